// SPDX-License-Identifier: Apache-2.0
#include "prcond/matrix_io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace prcond {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  return cells;
}

double parse_double(const std::string& text, std::size_t line_no) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError("csv line " + std::to_string(line_no) + ": bad number '" + text + "'");
  }
  return value;
}

}  // namespace

SensingMatrix read_matrix_json(std::istream& in) {
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("matrix json: ") + e.what());
  }
  try {
    const Field field = parse_field(doc.at("field").get<std::string>());
    const auto& rows = doc.at("rows");
    const Index m = doc.contains("m") ? doc.at("m").get<Index>() : static_cast<Index>(rows.size());
    if (m < 1 || static_cast<Index>(rows.size()) != m) throw ParseError("matrix json: row count does not match m");
    const std::size_t per = rows.at(0).size();
    const std::size_t stride = field == Field::Real ? 1 : 2;
    if (per == 0 || per % stride != 0) throw ParseError("matrix json: malformed row");
    const Index d = doc.contains("d") ? doc.at("d").get<Index>() : static_cast<Index>(per / stride);
    SensingMatrix::Storage a(m, d);
    for (Index j = 0; j < m; ++j) {
      const auto& row = rows.at(static_cast<std::size_t>(j));
      if (row.size() != static_cast<std::size_t>(d) * stride) {
        throw ParseError("matrix json: row " + std::to_string(j) + " has wrong length");
      }
      for (Index k = 0; k < d; ++k) {
        const double re = row.at(static_cast<std::size_t>(k) * stride).get<double>();
        const double im = stride == 2 ? row.at(static_cast<std::size_t>(k) * 2 + 1).get<double>() : 0.0;
        a(j, k) = Complex(re, im);
      }
    }
    return SensingMatrix(field, std::move(a));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("matrix json: ") + e.what());
  }
}

void write_matrix_json(std::ostream& out, const SensingMatrix& a) {
  nlohmann::json doc;
  doc["field"] = std::string(to_string(a.field()));
  doc["m"] = a.m();
  doc["d"] = a.d();
  nlohmann::json rows = nlohmann::json::array();
  for (Index j = 0; j < a.m(); ++j) {
    nlohmann::json row = nlohmann::json::array();
    for (Index k = 0; k < a.d(); ++k) {
      row.push_back(a(j, k).real());
      if (a.field() == Field::Complex) row.push_back(a(j, k).imag());
    }
    rows.push_back(std::move(row));
  }
  doc["rows"] = std::move(rows);
  out << doc.dump(2) << '\n';
}

SensingMatrix read_matrix_csv(std::istream& in, std::optional<Field> field) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::vector<double>> values;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    const auto cells = split_csv(line);
    if (values.empty() && !cells.empty() && !cells[0].empty() &&
        (std::isalpha(static_cast<unsigned char>(cells[0][0])) != 0)) {
      bool has_im = false;
      for (const auto& c : cells) has_im = has_im || c.rfind("im", 0) == 0;
      const Field header_field = has_im ? Field::Complex : Field::Real;
      if (field && *field != header_field) throw FieldMismatchError("csv header disagrees with requested field");
      field = header_field;
      continue;
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_double(c, line_no));
    if (!values.empty() && row.size() != values.front().size()) {
      throw ParseError("csv line " + std::to_string(line_no) + ": ragged row");
    }
    values.push_back(std::move(row));
  }
  if (values.empty()) throw ParseError("csv: no data rows");
  const Field f = field.value_or(Field::Real);
  const std::size_t stride = f == Field::Real ? 1 : 2;
  if (values.front().size() % stride != 0) throw ParseError("csv: odd column count for complex matrix");
  const Index m = static_cast<Index>(values.size());
  const Index d = static_cast<Index>(values.front().size() / stride);
  SensingMatrix::Storage a(m, d);
  for (Index j = 0; j < m; ++j) {
    for (Index k = 0; k < d; ++k) {
      const auto& row = values[static_cast<std::size_t>(j)];
      a(j, k) = Complex(row[static_cast<std::size_t>(k) * stride], stride == 2 ? row[static_cast<std::size_t>(k) * 2 + 1] : 0.0);
    }
  }
  return SensingMatrix(f, std::move(a));
}

void write_matrix_csv(std::ostream& out, const SensingMatrix& a) {
  const bool cplx = a.field() == Field::Complex;
  for (Index k = 0; k < a.d(); ++k) {
    out << (k ? "," : "") << "re_" << k + 1;
    if (cplx) out << ",im_" << k + 1;
  }
  out << '\n' << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (Index j = 0; j < a.m(); ++j) {
    for (Index k = 0; k < a.d(); ++k) {
      out << (k ? "," : "") << a(j, k).real();
      if (cplx) out << ',' << a(j, k).imag();
    }
    out << '\n';
  }
}

SensingMatrix load_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open matrix file " + path.string());
  if (path.extension() == ".csv") return read_matrix_csv(in);
  return read_matrix_json(in);
}

void save_matrix(const std::filesystem::path& path, const SensingMatrix& a, MatrixFormat format) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write matrix file " + path.string());
  if (format == MatrixFormat::Csv) {
    write_matrix_csv(out, a);
  } else {
    write_matrix_json(out, a);
  }
}

}  // namespace prcond
