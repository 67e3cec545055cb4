#pragma once

#include <json.hpp>

#include "linklab/cat0.hpp"

namespace linklab {

// JSON encodings. A space is {"factors":[{"kind":"euclidean","n":2},...]}
// (a bare factor object is accepted for single-factor spaces). Points are
// arrays of per-factor coordinate arrays; isometries are arrays of per-factor
// objects: {"linear":[...],"translation":[...]} for Euclidean factors,
// {"matrix":[...]} for hyperbolic ones, {"g":[...]} for SPD. Matrices are
// row-major flat arrays.

nlohmann::ordered_json space_to_json(const ModelSpace& s);
ModelSpace space_from_json(const nlohmann::json& j);

nlohmann::ordered_json point_to_json(const ModelSpace& s, const Point& p);
Point point_from_json(const ModelSpace& s, const nlohmann::json& j);

nlohmann::ordered_json isometry_to_json(const ModelSpace& s, const Isometry& g);
Isometry isometry_from_json(const ModelSpace& s, const nlohmann::json& j);

}  // namespace linklab
