#include "cantor/io.hpp"

#include <fstream>
#include <sstream>

#include "cantor/error.hpp"

namespace cantor::io {

namespace {

[[noreturn]] void bad(const std::string& what) { fail(ErrorKind::invalid_argument, what); }

const json& field(const json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key)) bad(std::string(what) + ": missing \"" + key + "\"");
  return j.at(key);
}

std::size_t index_from_json(const json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() < 0) bad(std::string(what) + ": expected a nonnegative index");
  return j.get<std::size_t>();
}

std::size_t index_from_key(const std::string& key, const char* what) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(key, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != key.size() || key[0] == '-' || key[0] == '+') {
    bad(std::string(what) + ": bad index key \"" + key + "\"");
  }
  return static_cast<std::size_t>(v);
}

NumberMode mode_field(const json& j, const char* what) {
  if (!j.contains("mode")) return NumberMode::rational;
  const json& m = j.at("mode");
  if (!m.is_string()) bad(std::string(what) + ": \"mode\" must be a string");
  return parse_mode(m.get<std::string>());
}

template <Scalar T>
DistanceMatrix<T> read_dist(const json& dist, std::size_t size, const char* what) {
  DistanceMatrix<T> m(size);
  if (!dist.is_array()) bad(std::string(what) + ": \"dist\" must be an array");
  const bool nested = !dist.empty() && dist.front().is_array();
  if (nested) {
    if (dist.size() != size) bad(std::string(what) + ": matrix has the wrong number of rows");
    for (std::size_t i = 0; i < size; ++i) {
      if (!dist[i].is_array() || dist[i].size() != size) bad(std::string(what) + ": matrix row has the wrong length");
      for (std::size_t j = 0; j < size; ++j) m.set_entry(i, j, scalar_from_json<T>(dist[i][j]));
    }
    for (std::size_t i = 0; i < size; ++i) {
      if (m(i, i) != 0) bad(std::string(what) + ": nonzero diagonal entry at " + std::to_string(i));
      for (std::size_t j = i + 1; j < size; ++j) {
        if (m(i, j) != m(j, i)) {
          bad(std::string(what) + ": asymmetric entries at (" + std::to_string(i) + ", " + std::to_string(j) + ")");
        }
      }
    }
  } else {
    if (dist.size() != size * (size - (size > 0 ? 1 : 0)) / 2) {
      bad(std::string(what) + ": expected " + std::to_string(size * (size > 0 ? size - 1 : 0) / 2) +
          " upper-triangle entries, got " + std::to_string(dist.size()));
    }
    std::size_t k = 0;
    for (std::size_t i = 0; i < size; ++i) {
      for (std::size_t j = i + 1; j < size; ++j) m.set(i, j, scalar_from_json<T>(dist[k++]));
    }
  }
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = i + 1; j < size; ++j) {
      if (m(i, j) < 0) bad(std::string(what) + ": negative distance at (" + std::to_string(i) + ", " + std::to_string(j) + ")");
      if (m(i, j) == 0) bad(std::string(what) + ": zero distance between distinct points " + std::to_string(i) + " and " + std::to_string(j));
    }
  }
  return m;
}

template <Scalar T>
json write_dist(const DistanceMatrix<T>& m) {
  json out = json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = i + 1; j < m.size(); ++j) out.push_back(scalar_to_json(m(i, j)));
  }
  return out;
}

json addresses_to_json(const std::vector<Address>& as) {
  json out = json::array();
  for (const Address& a : as) out.push_back(a.to_string());
  return out;
}

std::vector<Address> addresses_from_json(const json& j, const char* what) {
  if (!j.is_array()) bad(std::string(what) + ": expected an array of address strings");
  std::vector<Address> out;
  for (const json& a : j) {
    if (!a.is_string()) bad(std::string(what) + ": addresses are bit strings");
    out.push_back(Address::parse(a.get<std::string>()));
  }
  return out;
}

}  // namespace

template <Scalar T>
json scalar_to_json(const T& x) {
  if constexpr (std::is_same_v<T, Rational>) {
    return to_string(x);
  } else {
    return x;
  }
}

template <Scalar T>
T scalar_from_json(const json& j) {
  if (j.is_number_integer()) return T(j.get<long>());
  if constexpr (std::is_same_v<T, Rational>) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_float()) return parse_rational(j.dump());
  } else {
    if (j.is_number_float()) return j.get<double>();
    if (j.is_string()) {
      const std::string s = j.get<std::string>();
      if (s.find('/') != std::string::npos) return to_double(parse_rational(s));
      std::size_t pos = 0;
      double v = 0;
      try {
        v = std::stod(s, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos == 0 || pos != s.size()) bad("not a number: \"" + s + "\"");
      return v;
    }
  }
  bad("expected a number or a \"p/q\" string, got " + j.dump());
}

template <Scalar T>
json metric_to_json(const DyadicMetric<T>& d, const json& meta) {
  json out;
  out["depth"] = d.depth();
  out["mode"] = mode_name(mode_of<T>);
  out["dist"] = write_dist(d.dist());
  if (d.line_coordinates()) {
    json line = json::array();
    for (const T& x : *d.line_coordinates()) line.push_back(scalar_to_json(x));
    out["line"] = std::move(line);
  }
  if (!meta.is_null()) out["meta"] = meta;
  return out;
}

namespace {

template <Scalar T>
DyadicMetric<T> read_metric(const json& j, int depth) {
  const std::size_t size = std::size_t{1} << depth;
  DistanceMatrix<T> dist = read_dist<T>(field(j, "dist", "metric"), size, "metric");
  std::optional<std::vector<T>> line;
  if (j.contains("line")) {
    const json& l = j.at("line");
    if (!l.is_array() || l.size() != size) bad("metric: \"line\" must list one coordinate per point");
    line.emplace();
    for (const json& x : l) line->push_back(scalar_from_json<T>(x));
  }
  return DyadicMetric<T>(depth, std::move(dist), std::move(line));
}

}  // namespace

AnyMetric metric_from_json(const json& j) {
  const json& depth_j = field(j, "depth", "metric");
  if (!depth_j.is_number_integer()) bad("metric: \"depth\" must be an integer");
  const long long depth = depth_j.get<long long>();
  if (depth < 0 || depth > kHardMaxDepth) {
    bad("metric: depth must lie in 0.." + std::to_string(kHardMaxDepth));
  }
  if (mode_field(j, "metric") == NumberMode::rational) return read_metric<Rational>(j, static_cast<int>(depth));
  return read_metric<double>(j, static_cast<int>(depth));
}

template <Scalar T>
DyadicMetric<T> metric_as(const AnyMetric& any) {
  if (const auto* d = std::get_if<DyadicMetric<T>>(&any)) return *d;
  if constexpr (std::is_same_v<T, double>) {
    return to_double(std::get<RationalMetric>(any));
  } else {
    const DoubleMetric& src = std::get<DoubleMetric>(any);
    DistanceMatrix<Rational> m(src.size());
    for (std::size_t i = 0; i < src.size(); ++i) {
      for (std::size_t j = i + 1; j < src.size(); ++j) m.set(i, j, Rational(src(i, j)));
    }
    std::optional<std::vector<Rational>> line;
    if (src.line_coordinates()) {
      line.emplace();
      for (double x : *src.line_coordinates()) line->push_back(Rational(x));
    }
    return RationalMetric(src.depth(), std::move(m), std::move(line));
  }
}

template <Scalar T>
json matrix_to_json(const DistanceMatrix<T>& m) {
  json out;
  out["size"] = m.size();
  out["mode"] = mode_name(mode_of<T>);
  out["dist"] = write_dist(m);
  return out;
}

template <Scalar T>
DistanceMatrix<T> matrix_from_json(const json& j) {
  const std::size_t size = index_from_json(field(j, "size", "matrix"), "matrix size");
  if (size > (std::size_t{1} << kHardMaxDepth)) bad("matrix: too large");
  return read_dist<T>(field(j, "dist", "matrix"), size, "matrix");
}

template <Scalar T>
json molecule_to_json(const Molecule<T>& mol) {
  json weights = json::object();
  for (const auto& [x, w] : mol.weights) weights[std::to_string(x)] = scalar_to_json(w);
  json out;
  out["weights"] = std::move(weights);
  return out;
}

template <Scalar T>
Molecule<T> molecule_from_json(const json& j) {
  const json& w = field(j, "weights", "molecule");
  if (!w.is_object()) bad("molecule: \"weights\" must map point indices to weights");
  Molecule<T> mol;
  for (const auto& [key, value] : w.items()) {
    T weight = scalar_from_json<T>(value);
    if (weight != 0) mol.weights[index_from_key(key, "molecule")] += weight;
  }
  return mol;
}

template <Scalar T>
json operator_to_json(const ExtOperator<T>& op) {
  json rows = json::array();
  for (const auto& row : op.rows) {
    json r = json::array();
    for (const T& c : row) r.push_back(scalar_to_json(c));
    rows.push_back(std::move(r));
  }
  json out;
  out["net"] = op.net;
  out["rows"] = std::move(rows);
  return out;
}

template <Scalar T>
ExtOperator<T> operator_from_json(const json& j) {
  ExtOperator<T> op;
  const json& net = field(j, "net", "operator");
  if (!net.is_array()) bad("operator: \"net\" must be an array of point indices");
  for (const json& p : net) op.net.push_back(index_from_json(p, "operator net"));
  const json& rows = field(j, "rows", "operator");
  if (!rows.is_array()) bad("operator: \"rows\" must be an array");
  for (const json& row : rows) {
    if (!row.is_array() || row.size() != op.net.size()) bad("operator: each row needs one coefficient per net point");
    auto& r = op.rows.emplace_back();
    for (const json& c : row) r.push_back(scalar_from_json<T>(c));
  }
  return op;
}

template <Scalar T>
json lipfn_to_json(const LipFn<T>& f) {
  json values = json::array();
  for (const T& v : f.values) values.push_back(scalar_to_json(v));
  json out;
  out["base"] = f.base_index;
  out["values"] = std::move(values);
  return out;
}

template <Scalar T>
LipFn<T> lipfn_from_json(const json& j) {
  LipFn<T> f;
  if (j.contains("base")) f.base_index = index_from_json(j.at("base"), "function base");
  const json& values = field(j, "values", "function");
  if (!values.is_array()) bad("function: \"values\" must be an array");
  for (const json& v : values) f.values.push_back(scalar_from_json<T>(v));
  if (f.base_index >= f.values.size()) bad("function: base point out of range");
  return f;
}

template <Scalar T>
json plan_to_json(const SurgeryPlan<T>& plan) {
  json pieces = json::array();
  for (const auto& piece : plan.partition.pieces) pieces.push_back(addresses_to_json(piece));
  json replacements = json::array();
  for (const auto& m : plan.replacements) replacements.push_back(matrix_to_json(m));
  json out;
  out["epsilon"] = scalar_to_json(plan.epsilon);
  out["delta"] = scalar_to_json(plan.delta);
  out["target"] = addresses_to_json(plan.partition.target);
  out["pieces"] = std::move(pieces);
  out["replacements"] = std::move(replacements);
  return out;
}

template <Scalar T>
SurgeryPlan<T> plan_from_json(const json& j, const std::filesystem::path& base_dir) {
  SurgeryPlan<T> plan;
  plan.epsilon = scalar_from_json<T>(field(j, "epsilon", "plan"));
  plan.delta = scalar_from_json<T>(field(j, "delta", "plan"));
  plan.partition.target = addresses_from_json(field(j, "target", "plan"), "plan target");
  const json& pieces = field(j, "pieces", "plan");
  if (!pieces.is_array()) bad("plan: \"pieces\" must be an array");
  for (const json& piece : pieces) plan.partition.pieces.push_back(addresses_from_json(piece, "plan piece"));
  const json& reps = field(j, "replacements", "plan");
  if (!reps.is_array()) bad("plan: \"replacements\" must be an array");
  for (const json& r : reps) {
    if (r.is_object() && r.contains("file")) {
      if (!r.at("file").is_string()) bad("plan: replacement file reference must be a string");
      std::filesystem::path p = r.at("file").get<std::string>();
      if (p.is_relative()) p = base_dir / p;
      plan.replacements.push_back(matrix_from_json<T>(read_json(p)));
    } else {
      plan.replacements.push_back(matrix_from_json<T>(r));
    }
  }
  return plan;
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::invalid_argument, path.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::io, "cannot write " + path.string());
  out << text;
  if (!out) fail(ErrorKind::io, "write failed: " + path.string());
}

void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

AnyMetric load_metric(const std::filesystem::path& path) {
  try {
    return metric_from_json(read_json(path));
  } catch (const json::exception& e) {
    fail(ErrorKind::invalid_argument, path.string() + ": " + e.what());
  }
}

#define CANTOR_INSTANTIATE(T)                                                          \
  template json scalar_to_json<T>(const T&);                                           \
  template T scalar_from_json<T>(const json&);                                         \
  template json metric_to_json<T>(const DyadicMetric<T>&, const json&);                \
  template DyadicMetric<T> metric_as<T>(const AnyMetric&);                             \
  template json matrix_to_json<T>(const DistanceMatrix<T>&);                           \
  template DistanceMatrix<T> matrix_from_json<T>(const json&);                         \
  template json molecule_to_json<T>(const Molecule<T>&);                               \
  template Molecule<T> molecule_from_json<T>(const json&);                             \
  template json operator_to_json<T>(const ExtOperator<T>&);                            \
  template ExtOperator<T> operator_from_json<T>(const json&);                          \
  template json lipfn_to_json<T>(const LipFn<T>&);                                     \
  template LipFn<T> lipfn_from_json<T>(const json&);                                   \
  template json plan_to_json<T>(const SurgeryPlan<T>&);                                \
  template SurgeryPlan<T> plan_from_json<T>(const json&, const std::filesystem::path&);

CANTOR_INSTANTIATE(Rational)
CANTOR_INSTANTIATE(double)

}  // namespace cantor::io
