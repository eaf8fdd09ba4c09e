#pragma once

// Matrix exchange: {"rows": n, "cols": m, "scalar": "complex",
// "data": [[re, im], ...]} in row-major order, plus a real-only CSV import.

#include <iosfwd>

#include <nlohmann/json.hpp>

#include "grassmann/types.hpp"

namespace grassmann {

nlohmann::json matrix_to_json(const Mat& m);

/// Accepts "scalar": "complex" with [re, im] pairs, or "real" with plain
/// numbers. Throws parse_error on any shape or type problem.
Mat matrix_from_json(const nlohmann::json& j);

/// Column vectors use the same object with cols = 1.
nlohmann::json vector_to_json(const Vec& v);
Vec vector_from_json(const nlohmann::json& j);

/// One row per non-empty line, comma separated, real entries only.
Mat read_csv_real(std::istream& in);

}  // namespace grassmann
