// SPDX-License-Identifier: Apache-2.0
//
// Matrix files. JSON:
//   {"field": "real"|"complex", "m": int, "d": int, "rows": [[re, im, ...], ...]}
// (imaginary parts omitted for real matrices). CSV: one measurement vector
// per line, header re_1[,im_1],re_2[,im_2],...
#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "prcond/core.hpp"

namespace prcond {

enum class MatrixFormat { Json, Csv };

SensingMatrix read_matrix_json(std::istream& in);
void write_matrix_json(std::ostream& out, const SensingMatrix& a);

/// The field is taken from the header when present (im_ columns mean
/// complex), otherwise from `field` (default real).
SensingMatrix read_matrix_csv(std::istream& in, std::optional<Field> field = std::nullopt);
void write_matrix_csv(std::ostream& out, const SensingMatrix& a);

/// Format chosen by extension (.csv, anything else is JSON).
SensingMatrix load_matrix(const std::filesystem::path& path);
void save_matrix(const std::filesystem::path& path, const SensingMatrix& a, MatrixFormat format);

}  // namespace prcond
