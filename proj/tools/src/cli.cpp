// SPDX-License-Identifier: Apache-2.0
#include "prcond/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "prcond/closedform.hpp"
#include "prcond/experiment.hpp"
#include "prcond/matrix_io.hpp"
#include "prcond/oracle.hpp"
#include "prcond/serialize.hpp"

namespace prcond::cli {

namespace {

using nlohmann::json;

struct Options {
  int m = 0;
  int d = 0;
  int p = 2;
  std::string field;
  std::string matrix;
  int trials = 10;
  std::uint64_t seed = 0;
  int starts = OptimizerConfig{}.starts;
  int grid_resolution = GridSpec{}.resolution;
  std::string format;
  std::string out_path;
  bool inject_fault = false;
};

std::optional<Field> field_flag(const Options& o) {
  if (o.field.empty()) return std::nullopt;
  return parse_field(o.field);
}

SensingMatrix load(const Options& o) {
  const std::filesystem::path path(o.matrix);
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open matrix file '" + o.matrix + "'");
  const auto field = field_flag(o);
  if (path.extension() == ".csv") return read_matrix_csv(in, field);
  SensingMatrix a = read_matrix_json(in);
  if (field) require_same_field(*field, a.field(), "--field");
  return a;
}

// Writes to --out when given, otherwise to the caller's stream.
void emit(const Options& o, std::ostream& out, const std::function<void(std::ostream&)>& body) {
  if (o.out_path.empty()) {
    body(out);
    return;
  }
  std::ofstream file(o.out_path);
  if (!file) throw Error("cannot write '" + o.out_path + "'");
  body(file);
  if (!file) throw Error("write to '" + o.out_path + "' failed");
}

void csv_config(std::ostream& os, const json& config) {
  for (const auto& [key, value] : config.items()) os << "# " << key << '=' << value.dump() << '\n';
}

json base_config(const std::string& command) {
  return {{"command", command}, {"version", build_version()}};
}

OptimizerConfig optimizer(const Options& o) {
  OptimizerConfig cfg;
  cfg.starts = o.starts;
  cfg.rng = RngSpec{o.seed, 0};
  cfg.grid.resolution = o.grid_resolution;
  cfg.validate();
  return cfg;
}

void require_format(const std::string& format, std::initializer_list<const char*> allowed) {
  for (const char* f : allowed) {
    if (format == f) return;
  }
  throw DomainError("unsupported --format '" + format + "'");
}

int cmd_frame(const Options& o, std::ostream& out) {
  require_format(o.format, {"json", "csv"});
  const SensingMatrix e = harmonic_frame(o.m);
  json config = base_config("frame");
  config["m"] = o.m;
  config["format"] = o.format;
  emit(o, out, [&](std::ostream& os) {
    if (o.format == "csv") {
      csv_config(os, config);
      write_matrix_csv(os, e);
    } else {
      std::ostringstream buf;
      write_matrix_json(buf, e);
      json doc = json::parse(buf.str());
      doc["config"] = config;
      os << doc.dump(2) << '\n';
    }
  });
  return kOk;
}

int cmd_beta(const Options& o, std::ostream& out) {
  require_format(o.format, {"json", "text"});
  const SensingMatrix a = load(o);
  const OptimizerConfig cfg = optimizer(o);
  const ConditionReport rep = condition_number(a, o.p, cfg);
  json config = base_config("beta");
  config["matrix"] = o.matrix;
  config["p"] = o.p;
  config["field"] = std::string(to_string(a.field()));
  config["optimizer"] = to_json(cfg);
  config["format"] = o.format;
  emit(o, out, [&](std::ostream& os) {
    if (o.format == "json") {
      json doc = to_json(rep);
      doc["config"] = config;
      os << doc.dump(2) << '\n';
      return;
    }
    os << std::setprecision(12);
    os << "matrix  " << o.matrix << " (" << to_string(a.field()) << ", m=" << a.m() << ", d=" << a.d()
       << ")\n";
    os << "p       " << o.p << '\n';
    os << "L       " << rep.L << "  [" << to_string(rep.lower.method) << "]\n";
    os << "U       " << rep.U << "  [" << to_string(rep.upper.method) << "]\n";
    os << "beta    " << rep.beta << '\n';
    os << "bound   " << rep.theoretical_lower_bound << '\n';
    if (rep.no_phase_retrieval_suspected) os << "flag    NoPhaseRetrievalSuspected\n";
    os << "seed    " << o.seed << "  starts " << o.starts << "  grid " << o.grid_resolution << '\n';
  });
  return rep.no_phase_retrieval_suspected ? kNoPhaseRetrieval : kOk;
}

int cmd_bounds(const Options& o, std::ostream& out) {
  require_format(o.format, {"csv", "text"});
  if (o.m < 3) throw DomainError("--m must be >= 3");
  json config = base_config("bounds");
  config["m_max"] = o.m;
  config["format"] = o.format;
  const std::vector<std::string> header{"m",         "real_l2",   "real_l1",   "complex",
                                        "L_l2",      "U_l2",      "beta_l2",   "L_l1",
                                        "M_l1",      "U_l1",      "beta_l1"};
  std::vector<std::vector<double>> rows;
  for (int m = 3; m <= o.m; ++m) {
    const HarmonicConstants h2 = harmonic_constants(m, 2);
    const HarmonicConstants h1 = harmonic_constants(m, 1);
    rows.push_back({static_cast<double>(m), universal_lower_bound(Field::Real, 2).value,
                    universal_lower_bound(Field::Real, 1, m).value,
                    universal_lower_bound(Field::Complex, 2).value, h2.L, h2.U, h2.beta, h1.L,
                    h1.L_orth, h1.U, h1.beta});
  }
  emit(o, out, [&](std::ostream& os) {
    os << std::setprecision(12);
    if (o.format == "csv") {
      csv_config(os, config);
      for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
      os << '\n';
      for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
        os << '\n';
      }
      return;
    }
    os << std::left << std::setw(4) << header[0];
    for (std::size_t i = 1; i < header.size(); ++i) os << std::right << std::setw(16) << header[i];
    os << '\n' << std::fixed << std::setprecision(10);
    for (const auto& r : rows) {
      os << std::left << std::setw(4) << static_cast<int>(r[0]);
      for (std::size_t i = 1; i < r.size(); ++i) os << std::right << std::setw(16) << r[i];
      os << '\n';
    }
  });
  return kOk;
}

int cmd_oracle(const Options& o, std::ostream& out) {
  require_format(o.format, {"json"});
  require_p(o.p);
  const SensingMatrix a = load(o);
  if (a.d() != 2) throw DimensionError("the grid oracle needs d = 2");
  GridSpec grid;
  grid.resolution = o.grid_resolution;
  grid.validate();
  json config = base_config("oracle");
  config["matrix"] = o.matrix;
  config["p"] = o.p;
  config["field"] = std::string(to_string(a.field()));
  config["grid"] = {{"resolution", grid.resolution},
                    {"refine_rounds", grid.refine_rounds},
                    {"refine_zoom", grid.refine_zoom}};
  json doc{{"L", to_json(grid_lower_l(a, o.p, Constraint::RealInner, grid))},
           {"M", to_json(grid_lower_l(a, o.p, Constraint::Orthogonal, grid))},
           {"U", to_json(grid_upper_u(a, o.p, grid))},
           {"config", config}};
  emit(o, out, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
  return kOk;
}

int cmd_experiment(const Options& o, std::ostream& out) {
  require_format(o.format, {"csv", "json"});
  ExperimentConfig cfg;
  cfg.field = field_flag(o).value_or(Field::Real);
  cfg.p = o.p;
  cfg.m = o.m;
  cfg.d = o.d;
  cfg.trials = o.trials;
  cfg.rng = RngSpec{o.seed, 0};
  cfg.optimizer.starts = o.starts;
  cfg.optimizer.grid.resolution = o.grid_resolution;
  cfg.validate();
  const SweepResult result = run_gaussian_sweep(cfg);
  json doc = summary_json(cfg, result);
  emit(o, out, [&](std::ostream& os) {
    if (o.format == "json") {
      os << doc.dump(2) << '\n';
      return;
    }
    json config = doc["config"];
    config["command"] = "experiment";
    config["version"] = build_version();
    config["generator"] = doc["generator"];
    config["gaussian"] = doc["gaussian"];
    csv_config(os, config);
    write_records_csv(os, result.records);
  });
  return kOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  require_format(o.format, {"text", "json"});
  VerifyOptions opts;
  opts.grid.resolution = o.grid_resolution;
  opts.seed = o.seed;
  opts.inject_fault = o.inject_fault;
  const VerifyReport report = run_verify(opts);
  emit(o, out, [&](std::ostream& os) {
    if (o.format == "json") {
      json suites = json::array();
      for (const auto& s : report.suites) {
        suites.push_back({{"name", s.name},
                          {"cases", s.cases},
                          {"max_residual", s.max_residual},
                          {"threshold", s.threshold},
                          {"passed", s.passed},
                          {"detail", s.detail}});
      }
      json config = base_config("verify");
      config["seed"] = o.seed;
      config["grid_resolution"] = o.grid_resolution;
      os << json{{"suites", suites}, {"passed", report.passed()}, {"config", config}}.dump(2) << '\n';
      return;
    }
    os << "# verify seed=" << o.seed << " grid_resolution=" << o.grid_resolution << '\n';
    os << std::left << std::setw(24) << "suite" << std::right << std::setw(10) << "cases" << std::setw(14)
       << "max_residual" << std::setw(12) << "threshold" << "  result\n";
    for (const auto& s : report.suites) {
      os << std::left << std::setw(24) << s.name << std::right << std::setw(10) << s.cases
         << std::setw(14) << std::setprecision(3) << std::scientific << s.max_residual << std::setw(12)
         << s.threshold << std::defaultfloat << "  " << (s.passed ? "PASS" : "FAIL");
      if (!s.detail.empty()) os << "  (" << s.detail << ')';
      os << '\n';
    }
  });
  return report.passed() ? kOk : kVerificationFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Condition numbers of phase retrieval sensing matrices", "prcond"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(build_version()));
  // One options block per subcommand: default_val writes through immediately.
  Options fo, bo, so, oo, eo, vo;
  int result = kOk;

  auto* frame = app.add_subcommand("frame", "Write the harmonic frame E_m");
  frame->add_option("--m", fo.m, "Number of frame vectors (>= 3)")->required();
  frame->add_option("--format", fo.format, "json or csv")->default_val("json");
  frame->add_option("--out", fo.out_path, "Output file (stdout when absent)");
  frame->callback([&] { result = cmd_frame(fo, out); });

  auto* beta = app.add_subcommand("beta", "Estimate L, U and beta for a matrix file");
  beta->add_option("--matrix", bo.matrix, "Matrix file (.json or .csv)")->required();
  beta->add_option("--p", bo.p, "1 or 2")->default_val(2);
  beta->add_option("--field", bo.field, "real or complex (default: from the file)");
  beta->add_option("--starts", bo.starts, "Optimizer starts")->default_val(OptimizerConfig{}.starts);
  beta->add_option("--seed", bo.seed, "Optimizer seed")->default_val(0);
  beta->add_option("--grid-resolution", bo.grid_resolution, "Grid oracle resolution (d = 2)")
      ->default_val(GridSpec{}.resolution);
  beta->add_option("--format", bo.format, "json or text")->default_val("json");
  beta->add_option("--out", bo.out_path, "Output file (stdout when absent)");
  beta->callback([&] { result = cmd_beta(bo, out); });

  auto* bounds = app.add_subcommand("bounds", "Tabulate universal bounds and harmonic constants");
  bounds->add_option("--m", so.m, "Largest m")->default_val(12);
  bounds->add_option("--format", so.format, "csv or text")->default_val("text");
  bounds->add_option("--out", so.out_path, "Output file (stdout when absent)");
  bounds->callback([&] { result = cmd_bounds(so, out); });

  auto* oracle = app.add_subcommand("oracle", "Certified grid search for a d = 2 matrix");
  oracle->add_option("--matrix", oo.matrix, "Matrix file (.json or .csv)")->required();
  oracle->add_option("--p", oo.p, "1 or 2")->default_val(2);
  oracle->add_option("--field", oo.field, "real or complex (default: from the file)");
  oracle->add_option("--grid-resolution", oo.grid_resolution, "Grid resolution")
      ->default_val(GridSpec{}.resolution);
  oracle->add_option("--format", oo.format, "json")->default_val("json");
  oracle->add_option("--out", oo.out_path, "Output file (stdout when absent)");
  oracle->callback([&] { result = cmd_oracle(oo, out); });

  auto* experiment = app.add_subcommand("experiment", "Gaussian Monte-Carlo sweep");
  experiment->add_option("--field", eo.field, "real or complex")->default_val("real");
  experiment->add_option("--p", eo.p, "1 or 2")->default_val(2);
  experiment->add_option("--m", eo.m, "Measurements")->required();
  experiment->add_option("--d", eo.d, "Dimension")->required();
  experiment->add_option("--trials", eo.trials, "Number of matrices")->default_val(10);
  experiment->add_option("--seed", eo.seed, "Master seed")->default_val(0);
  experiment->add_option("--starts", eo.starts, "Optimizer starts per trial")
      ->default_val(sweep_optimizer_defaults().starts);
  experiment->add_option("--grid-resolution", eo.grid_resolution, "Grid oracle resolution (d = 2)")
      ->default_val(GridSpec{}.resolution);
  experiment->add_option("--format", eo.format, "csv or json")->default_val("csv");
  experiment->add_option("--out", eo.out_path, "Output file (stdout when absent)");
  experiment->callback([&] { result = cmd_experiment(eo, out); });

  auto* verify = app.add_subcommand("verify", "Run the identity suite");
  verify->add_option("--grid-resolution", vo.grid_resolution, "Grid oracle resolution")
      ->default_val(GridSpec{}.resolution);
  verify->add_option("--seed", vo.seed, "Suite seed")->default_val(VerifyOptions{}.seed);
  verify->add_option("--format", vo.format, "text or json")->default_val("text");
  verify->add_option("--out", vo.out_path, "Output file (stdout when absent)");
  verify->add_flag("--inject-fault", vo.inject_fault)->group("");
  verify->callback([&] { result = cmd_verify(vo, out); });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "prcond: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    err << "prcond: " << e.what() << '\n';
    return kUsage;
  } catch (const DimensionError& e) {
    err << "prcond: " << e.what() << '\n';
    return kUsage;
  } catch (const FieldMismatchError& e) {
    err << "prcond: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "prcond: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "prcond: " << e.what() << '\n';
    return kFailure;
  }
  return result;
}

}  // namespace prcond::cli
