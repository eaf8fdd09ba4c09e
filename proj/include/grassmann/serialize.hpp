#pragma once

// JSON forms built on the matrix exchange object:
//   subspace  : the matrix object of its orthonormal basis
//   chart     : {"F": matrix, "G": matrix, "flavor": "general" | "hilbert"}
//   point     : {"chart": chart, "A": matrix}
//   tangent   : {"at": point, "X": matrix}
//   covector  : {"at": point, "mu": matrix, "class_tag": ..., "decay": {...}}
//   tensor    : {"at": point, "terms": [{"x": vector, "y": vector}, ...]}

#include <nlohmann/json.hpp>

#include "grassmann/atlas.hpp"
#include "grassmann/bundle.hpp"

namespace grassmann {

nlohmann::json to_json(const Subspace& s);
Subspace subspace_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ChartId& c);
ChartId chart_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ChartPoint& p);
ChartPoint point_from_json(const nlohmann::json& j);

nlohmann::json to_json(const TangentVector& v);
TangentVector tangent_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Covector& c);
Covector covector_from_json(const nlohmann::json& j);

nlohmann::json to_json(const TensorCovector& t);
TensorCovector tensor_from_json(const nlohmann::json& j);

}  // namespace grassmann
