#pragma once

#include <filesystem>
#include <string>
#include <variant>

#include <json.hpp>

#include "cantor/free_space.hpp"
#include "cantor/lipschitz.hpp"
#include "cantor/metric.hpp"
#include "cantor/surgery.hpp"

namespace cantor::io {

using json = nlohmann::ordered_json;

// Metric files:
//   {"depth": m, "mode": "rational" | "double",
//    "dist": [d(0,1), d(0,2), ..., d(1,2), ...],   strict upper triangle, row-major
//    "line": [...],                               optional line coordinates
//    "meta": {...}}                               optional, ignored on read
// Rationals are "p/q" strings. Readers also take "dist" as a full nested
// matrix, and reject asymmetric, negative, zero off-diagonal or nonzero
// diagonal input. Triangle violations are left to validate_metric.
using AnyMetric = std::variant<RationalMetric, DoubleMetric>;

template <Scalar T>
json scalar_to_json(const T& x);
template <Scalar T>
T scalar_from_json(const json& j);

template <Scalar T>
json metric_to_json(const DyadicMetric<T>& d, const json& meta = nullptr);
AnyMetric metric_from_json(const json& j);

// Reads either mode and converts to T (doubles convert to rationals exactly).
template <Scalar T>
DyadicMetric<T> metric_as(const AnyMetric& any);

// Square matrix without the depth constraint: {"size": k, "mode", "dist"}.
template <Scalar T>
json matrix_to_json(const DistanceMatrix<T>& m);
template <Scalar T>
DistanceMatrix<T> matrix_from_json(const json& j);

// {"weights": {"3": "1/2", "5": "-1/2"}}
template <Scalar T>
json molecule_to_json(const Molecule<T>& mol);
template <Scalar T>
Molecule<T> molecule_from_json(const json& j);

// {"net": [...], "rows": [[...], ...]}
template <Scalar T>
json operator_to_json(const ExtOperator<T>& op);
template <Scalar T>
ExtOperator<T> operator_from_json(const json& j);

// {"base": i, "values": [...]}
template <Scalar T>
json lipfn_to_json(const LipFn<T>& f);
template <Scalar T>
LipFn<T> lipfn_from_json(const json& j);

// {"epsilon", "delta", "target": ["01", ...], "pieces": [["010", "011"], ...],
//  "replacements": [<matrix> | {"file": "path"}, ...]}
// File references resolve against `base_dir`.
template <Scalar T>
json plan_to_json(const SurgeryPlan<T>& plan);
template <Scalar T>
SurgeryPlan<T> plan_from_json(const json& j, const std::filesystem::path& base_dir = {});

json read_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const json& j);

AnyMetric load_metric(const std::filesystem::path& path);

}  // namespace cantor::io
