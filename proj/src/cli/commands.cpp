#include "cantor/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cantor/free_space.hpp"
#include "cantor/generate.hpp"
#include "cantor/geometry.hpp"
#include "cantor/io.hpp"
#include "cantor/metric_ops.hpp"
#include "cantor/surgery.hpp"

namespace cantor::cli {

using io::json;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::io:
      return 1;
    case ErrorKind::invalid_argument:
      return 2;
    case ErrorKind::insufficient_depth:
      return 3;
    case ErrorKind::internal:
      return 4;
  }
  return 4;
}

namespace {

constexpr const char* kVersion = "cantor " CANTOR_VERSION;

// Options shared by most commands. Output paths are not part of the echoed
// configuration, so identical runs written to different files match.
struct Common {
  std::string mode;
  double tol = Tolerance::kDefaultEps;
  std::string out;
  std::string json_out;
};

std::filesystem::path resolve_out(const std::string& path) {
  std::filesystem::path p = path;
  if (p.is_relative()) {
    if (const char* dir = std::getenv("CANTOR_OUT_DIR"); dir != nullptr && *dir != '\0') {
      p = std::filesystem::path(dir) / p;
    }
  }
  return p;
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    io::write_text(resolve_out(path), text);
  }
}

// Options as given, plus the effective number mode even when it was inferred.
json config_of(const CLI::App& sub, NumberMode mode) {
  json options = json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_name(false, true);
    if (name == "--help" || name == "--out" || name == "--json" || name == "--report") continue;
    std::vector<std::string> values = opt->results();
    if (values.empty()) {
      const std::string def = opt->get_default_str();
      if (def.empty()) continue;
      values.push_back(def);
    }
    const std::string key = name.substr(name.find_first_not_of('-'));
    if (values.size() == 1) {
      options[key] = values.front();
    } else {
      options[key] = values;
    }
  }
  json config;
  config["version"] = kVersion;
  config["command"] = sub.get_name();
  options["mode"] = std::string(mode_name(mode));
  config["options"] = std::move(options);
  return config;
}

NumberMode pick_mode(const std::string& requested, NumberMode fallback) {
  return requested.empty() ? fallback : parse_mode(requested);
}

template <class F>
auto with_mode(NumberMode mode, F&& f) {
  if (mode == NumberMode::rational) return f(Rational{});
  return f(double{});
}

NumberMode mode_of_any(const io::AnyMetric& any) {
  return std::holds_alternative<RationalMetric>(any) ? NumberMode::rational : NumberMode::real;
}

template <Scalar T>
DyadicMetric<T> checked_metric(const io::AnyMetric& any, const Tolerance& tol, const std::string& what) {
  DyadicMetric<T> d = io::metric_as<T>(any);
  const MetricDiagnostics<T> diag = validate_metric(d.dist(), tol);
  require(diag.accepted, what + ": not a metric (max triangle defect " +
                             std::to_string(to_double(diag.max_triangle_defect)) + ")");
  return d;
}

template <Scalar T>
T parse_scalar(const std::string& text) {
  return from_rational<T>(parse_rational(text));
}

// CSV cells: strings verbatim, numbers in shortest round-trip form, booleans
// as 0/1, null as an empty field.
std::string csv_cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  return v.dump();
}

template <Scalar T>
json number(const T& x) {
  return to_double(x);
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
  json extra = json::object();  // JSON-only detail

  std::string csv(const json& config) const {
    std::ostringstream s;
    s << "# " << kVersion << "\n# config " << config.dump() << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) s << (i ? "," : "") << columns[i];
    s << "\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) s << (i ? "," : "") << csv_cell(row[i]);
      s << "\n";
    }
    return s.str();
  }

  json mirror(const json& config) const {
    json out;
    out["config"] = config;
    out["columns"] = columns;
    json rs = json::array();
    for (const auto& row : rows) {
      json r = json::object();
      for (std::size_t i = 0; i < row.size(); ++i) r[columns[i]] = row[i];
      rs.push_back(std::move(r));
    }
    out["rows"] = std::move(rs);
    for (const auto& [k, v] : extra.items()) out[k] = v;
    return out;
  }

  void write(const Common& common, const json& config, std::ostream& out) const {
    emit(common.out, csv(config), out);
    if (!common.json_out.empty()) io::write_json(resolve_out(common.json_out), mirror(config));
  }
};

void add_common(CLI::App* sub, Common& c, bool with_json) {
  sub->add_option("--mode", c.mode, "Number mode: rational or double")
      ->check(CLI::IsMember({"rational", "double"}));
  sub->add_option("--tol", c.tol, "Comparison slack in double mode")->capture_default_str();
  sub->add_option("--out", c.out, "Output file (default: standard output)");
  if (with_json) sub->add_option("--json", c.json_out, "Also write a JSON mirror of the table here");
}

// ---- gen ----

struct GenArgs {
  Common common;
  std::string kind;
  int depth = 0;
  std::string lambda = "1/3";
  std::vector<std::string> fractions;
  std::string ratio = "1/2";
  std::string roughness = "1/2";
  std::optional<std::uint64_t> seed;
};

int cmd_gen(const GenArgs& a, const CLI::App& sub, std::ostream& out) {
  GeneratorParams params;
  params.lambda = parse_rational(a.lambda);
  for (const auto& f : a.fractions) params.removal_fractions.push_back(parse_rational(f));
  params.ratio = parse_rational(a.ratio);
  params.roughness = parse_rational(a.roughness);
  params.seed = a.seed;
  const GeneratorKind kind = parse_generator_kind(a.kind);
  const NumberMode mode = pick_mode(a.common.mode, default_mode(a.depth));
  const json config = config_of(sub, mode);
  const std::string text = with_mode(mode, [&](auto tag) {
    using T = decltype(tag);
    return io::metric_to_json(generate<T>(kind, a.depth, params), config).dump(2) + "\n";
  });
  emit(a.common.out, text, out);
  return 0;
}

// ---- push ----

struct PushArgs {
  Common common;
  std::string in;
  std::string epsilon;
  int n0 = 1;
  std::string report;
};

int cmd_push(const PushArgs& a, const CLI::App& sub, std::ostream& out) {
  const io::AnyMetric any = io::load_metric(a.in);
  const Tolerance tol(a.common.tol);
  const NumberMode mode = pick_mode(a.common.mode, mode_of_any(any));
  const json config = config_of(sub, mode);
  json report = with_mode(mode, [&](auto tag) {
    using T = decltype(tag);
    const DyadicMetric<T> d = checked_metric<T>(any, tol, a.in);
    const T epsilon = parse_scalar<T>(a.epsilon);
    const PushResult<T> r = push_into_Un(d, epsilon, a.n0, tol);
    const ChiValue<T> before = chi(d, r.n, tol);
    const ChiValue<T> after = chi(r.dtilde, r.n, tol);
    const T sup = sup_distance(d, r.dtilde);
    ensure(after.in_Un, "push: chi_after >= 1 + 1/n");
    ensure(tol.lt(sup, epsilon), "push: sup_distance >= epsilon");
    if (!a.common.out.empty()) {
      io::write_json(resolve_out(a.common.out), io::metric_to_json(r.dtilde, config));
    }
    json rep;
    rep["config"] = config;
    rep["n"] = r.n;
    rep["delta"] = io::scalar_to_json(r.delta);
    rep["chi_before"] = io::scalar_to_json(before.value);
    rep["in_Un_before"] = before.in_Un;
    rep["chi_after"] = io::scalar_to_json(after.value);
    rep["sup_distance"] = io::scalar_to_json(sup);
    return rep;
  });
  emit(a.report, report.dump(2) + "\n", out);
  return 0;
}

// ---- survey ----

struct SurveyArgs {
  Common common;
  int depth = 6;
  int trials = 100;
  std::string epsilon = "3/10";
  int n0 = 1;
  std::uint64_t seed = 1;
  std::string roughness = "1/2";
};

template <Scalar T>
Table survey(const SurveyArgs& a, const Tolerance& tol) {
  require(a.trials >= 1, "survey: trials must be at least 1");
  require(a.n0 >= 1 && a.n0 < a.depth, "survey: need 1 <= n0 < depth");
  const T epsilon = parse_scalar<T>(a.epsilon);
  GeneratorParams params;
  params.roughness = parse_rational(a.roughness);

  Table t;
  t.columns = {"trial", "seed", "chi_min_before", "best_n", "in_Un_before", "push_ok", "n", "chi_after",
               "sup_distance"};
  double chi_sum = 0;
  double chi_after_sum = 0;
  double max_sup = 0;
  int in_un = 0;
  int ok = 0;
  for (int trial = 0; trial < a.trials; ++trial) {
    const std::uint64_t seed = split_seed(a.seed, static_cast<std::uint64_t>(trial));
    params.seed = seed;
    const DyadicMetric<T> d = generate<T>(GeneratorKind::random, a.depth, params);
    std::optional<T> best;
    int best_n = 0;
    bool any_in = false;
    for (int n = a.n0; n < a.depth; ++n) {
      const ChiValue<T> c = chi(d, n, tol);
      any_in = any_in || c.in_Un;
      if (!best || c.value < *best) {
        best = c.value;
        best_n = n;
      }
    }
    chi_sum += to_double(*best);
    in_un += any_in ? 1 : 0;
    std::vector<json> row = {trial, std::to_string(seed), number(*best), best_n, any_in};
    try {
      const PushResult<T> r = push_into_Un(d, epsilon, a.n0, tol);
      const T after = chi(r.dtilde, r.n, tol).value;
      const T sup = sup_distance(d, r.dtilde);
      ensure(tol.lt(after, T(1 + T(1) / T(r.n))), "survey: chi_after >= 1 + 1/n");
      ensure(tol.lt(sup, epsilon), "survey: sup_distance >= epsilon");
      ++ok;
      chi_after_sum += to_double(after);
      max_sup = std::max(max_sup, to_double(sup));
      row.insert(row.end(), {true, r.n, number(after), number(sup)});
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::insufficient_depth) throw;
      row.insert(row.end(), {false, nullptr, nullptr, nullptr});
    }
    t.rows.push_back(std::move(row));
  }
  const double n = a.trials;
  t.rows.push_back({"summary", "", chi_sum / n, "", in_un / n, ok / n, "",
                    ok ? json(chi_after_sum / ok) : json(nullptr), max_sup});
  json summary;
  summary["trials"] = a.trials;
  summary["mean_chi_min_before"] = chi_sum / n;
  summary["in_Un_before_rate"] = in_un / n;
  summary["push_success_rate"] = ok / n;
  summary["mean_chi_after"] = ok ? json(chi_after_sum / ok) : json(nullptr);
  summary["max_sup_distance"] = max_sup;
  t.extra["summary"] = std::move(summary);
  return t;
}

int cmd_survey(const SurveyArgs& a, const CLI::App& sub, std::ostream& out) {
  const Tolerance tol(a.common.tol);
  const NumberMode mode = pick_mode(a.common.mode, default_mode(a.depth));
  const Table t = with_mode(mode, [&](auto tag) { return survey<decltype(tag)>(a, tol); });
  t.write(a.common, config_of(sub, mode), out);
  return 0;
}

// ---- report ----

struct ReportArgs {
  Common common;
  std::string what;
  std::string in;
  std::string molecule;
  std::vector<std::size_t> dipole;
  std::string op;
  std::optional<int> n;
  std::size_t base = 0;
  std::vector<std::string> lambdas = {"1/5", "1/3", "1/2"};
  int depth = 10;
  std::vector<std::size_t> points;
  std::string against;
};

template <Scalar T>
Table report_chi_table(const DyadicMetric<T>& d, const Tolerance& tol) {
  Table t;
  t.columns = {"n", "chi", "in_Un", "op_norm_exact", "threshold"};
  for (int n = 1; n < d.depth(); ++n) {
    const ChiValue<T> c = chi(d, n, tol);
    const OperatorNorm<T> norm = op_norm_Tn(d, n);
    t.rows.push_back({n, number(c.value), c.in_Un, number(norm.exact), 1.0 + 1.0 / n});
  }
  return t;
}

template <Scalar T>
Table report_freenorm(const ReportArgs& a, const DyadicMetric<T>& d, const Tolerance& tol) {
  Molecule<T> mol;
  if (!a.molecule.empty()) {
    mol = io::molecule_from_json<T>(io::read_json(a.molecule));
  } else {
    require(a.dipole.size() == 2, "report freenorm: give --molecule FILE or --dipole X,Y");
    require(a.dipole[0] < d.size() && a.dipole[1] < d.size(), "report freenorm: dipole point out of range");
    mol = Molecule<T>::dipole(a.dipole[0], a.dipole[1]);
  }
  const FreeNormResult<T> r = free_norm(mol, d.dist(), tol, a.base);
  Table t;
  t.columns = {"from", "to", "amount"};
  for (const auto& s : r.plan) t.rows.push_back({s.from, s.to, number(s.amount)});
  t.rows.push_back({"total", "", number(r.value)});
  t.extra["value"] = io::scalar_to_json(r.value);
  t.extra["dual"] = io::lipfn_to_json(r.dual);
  return t;
}

template <Scalar T>
Table report_defect(const ReportArgs& a, const DyadicMetric<T>& d, const Tolerance& tol) {
  Table t;
  t.columns = {"operator", "defect"};
  if (!a.op.empty()) {
    const ExtOperator<T> op = io::operator_from_json<T>(io::read_json(a.op));
    t.rows.push_back({a.op, number(defect(op, d.dist(), tol, a.base))});
    return t;
  }
  const int lo = a.n ? *a.n : 1;
  const int hi = a.n ? *a.n : d.depth() - 1;
  for (int n = lo; n <= hi; ++n) {
    t.rows.push_back({"T_" + std::to_string(n), number(defect(build_Tn(d, n), d.dist(), tol, a.base))});
  }
  return t;
}

template <Scalar T>
Table report_dims(const ReportArgs& a) {
  Table t;
  t.columns = {"lambda", "dim_formula", "box_dim_estimate", "abs_error"};
  for (const std::string& text : a.lambdas) {
    GeneratorParams params;
    params.lambda = parse_rational(text);
    require(params.lambda > 0 && params.lambda < 1, "report dims: lambda must lie in (0, 1)");
    const DyadicMetric<T> d = generate<T>(GeneratorKind::middle_lambda, a.depth, params);
    const double formula = dim_formula(to_double(params.lambda));
    const double estimate = box_dim_estimate(d, default_box_scales(d));
    t.rows.push_back({to_double(params.lambda), formula, estimate, std::abs(formula - estimate)});
  }
  return t;
}

template <Scalar T>
Table report_distortion(const ReportArgs& a, const DyadicMetric<T>& d, const Tolerance& tol) {
  std::vector<std::size_t> points = a.points;
  if (points.empty()) {
    require(d.size() <= kMaxLinePoints, "report distortion: pass --points (at most 10) for nets this large");
    for (std::size_t i = 0; i < d.size(); ++i) points.push_back(i);
  }
  const DistortionReport<T> r = line_distortion(std::span<const std::size_t>(points), d.dist(), tol);
  Table t;
  t.columns = {"quantity", "value"};
  t.rows.push_back({"line_distortion", number(r.distortion)});
  std::string order;
  for (std::size_t k : r.ordering) order += (order.empty() ? "" : " ") + std::to_string(points[k]);
  t.rows.push_back({"line_ordering", order});
  for (std::size_t i = 0; i < points.size(); ++i) {
    t.rows.push_back({"position_" + std::to_string(points[i]), number(r.embedding[i])});
  }
  if (!a.against.empty()) {
    const DyadicMetric<T> other = checked_metric<T>(io::load_metric(a.against), tol, a.against);
    require(other.size() == d.size(), "report distortion: --against has a different size");
    std::vector<std::size_t> identity(d.size());
    for (std::size_t i = 0; i < identity.size(); ++i) identity[i] = i;
    t.rows.push_back({"map_distortion_address_order",
                      map_distortion(d.dist(), other.dist(), std::span<const std::size_t>(identity)).distortion});
    if (d.size() <= kMaxExhaustiveBijection) {
      t.rows.push_back({"best_map_distortion", best_map_distortion(d.dist(), other.dist()).first.distortion});
    }
  }
  t.extra["distortion"] = io::scalar_to_json(r.distortion);
  return t;
}

int cmd_report(const ReportArgs& a, const CLI::App& sub, std::ostream& out) {
  const Tolerance tol(a.common.tol);
  Table t;
  NumberMode mode = pick_mode(a.common.mode, default_mode(a.depth));
  if (a.what == "dims") {
    t = with_mode(mode, [&](auto tag) { return report_dims<decltype(tag)>(a); });
  } else {
    require(!a.in.empty(), "report " + a.what + ": --in FILE is required");
    const io::AnyMetric any = io::load_metric(a.in);
    mode = pick_mode(a.common.mode, mode_of_any(any));
    t = with_mode(mode, [&](auto tag) {
      using T = decltype(tag);
      const DyadicMetric<T> d = checked_metric<T>(any, tol, a.in);
      if (a.what == "chi-table") return report_chi_table(d, tol);
      if (a.what == "freenorm") return report_freenorm(a, d, tol);
      if (a.what == "defect") return report_defect(a, d, tol);
      return report_distortion(a, d, tol);
    });
  }
  t.write(a.common, config_of(sub, mode), out);
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact metrics on finite dyadic approximations of the Cantor set"};
  app.name("cantor");
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  GenArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Generate a metric on the depth-m net");
  add_common(gen_cmd, gen.common, false);
  gen_cmd->add_option("--kind", gen.kind, "mu, middle-lambda, fat-cantor, ultrametric or random")->required();
  gen_cmd->add_option("--depth", gen.depth, "Net depth m (2^m points)")->required();
  gen_cmd->add_option("--lambda", gen.lambda, "Removed fraction for middle-lambda")->capture_default_str();
  gen_cmd->add_option("--fractions", gen.fractions, "Per-level removed fractions for fat-cantor")->delimiter(',');
  gen_cmd->add_option("--ratio", gen.ratio, "Height ratio for ultrametric")->capture_default_str();
  gen_cmd->add_option("--roughness", gen.roughness, "Perturbation amplitude")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "RNG seed (random, perturbed ultrametric)");

  PushArgs push;
  CLI::App* push_cmd = app.add_subcommand("push", "Move a metric by less than epsilon into some U_n");
  add_common(push_cmd, push.common, false);
  push_cmd->add_option("--in", push.in, "Input metric file")->required();
  push_cmd->add_option("--epsilon", push.epsilon, "Sup-distance budget")->required();
  push_cmd->add_option("--n0", push.n0, "Smallest level to try")->capture_default_str();
  push_cmd->add_option("--report", push.report, "Report file (default: standard output)");

  SurveyArgs survey;
  CLI::App* survey_cmd = app.add_subcommand("survey", "Push random metrics and tabulate chi");
  add_common(survey_cmd, survey.common, true);
  survey_cmd->add_option("--depth", survey.depth, "Net depth")->capture_default_str();
  survey_cmd->add_option("--trials", survey.trials, "Number of random metrics")->capture_default_str();
  survey_cmd->add_option("--epsilon", survey.epsilon, "Sup-distance budget")->capture_default_str();
  survey_cmd->add_option("--n0", survey.n0, "Smallest level")->capture_default_str();
  survey_cmd->add_option("--seed", survey.seed, "Master seed")->capture_default_str();
  survey_cmd->add_option("--roughness", survey.roughness, "Random-metric roughness")->capture_default_str();

  ReportArgs report;
  CLI::App* report_cmd = app.add_subcommand("report", "Tables of chi, free norms, defects, dimensions, distortion");
  add_common(report_cmd, report.common, true);
  report_cmd->add_option("--what", report.what, "chi-table, freenorm, defect, dims or distortion")
      ->required()
      ->check(CLI::IsMember({"chi-table", "freenorm", "defect", "dims", "distortion"}));
  report_cmd->add_option("--in", report.in, "Input metric file");
  report_cmd->add_option("--molecule", report.molecule, "freenorm: molecule file");
  report_cmd->add_option("--dipole", report.dipole, "freenorm: points X,Y for delta_X - delta_Y")
      ->delimiter(',')
      ->expected(2);
  report_cmd->add_option("--operator", report.op, "defect: operator file");
  report_cmd->add_option("--n", report.n, "defect: level of T_n (default: every level)");
  report_cmd->add_option("--base", report.base, "Base point index")->capture_default_str();
  report_cmd->add_option("--lambdas", report.lambdas, "dims: removed fractions")->delimiter(',')->capture_default_str();
  report_cmd->add_option("--depth", report.depth, "dims: net depth")->capture_default_str();
  report_cmd->add_option("--points", report.points, "distortion: point indices")->delimiter(',');
  report_cmd->add_option("--against", report.against, "distortion: second metric for map distortion");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen_cmd->parsed()) return cmd_gen(gen, *gen_cmd, out);
    if (push_cmd->parsed()) return cmd_push(push, *push_cmd, out);
    if (survey_cmd->parsed()) return cmd_survey(survey, *survey_cmd, out);
    return cmd_report(report, *report_cmd, out);
  } catch (const Error& e) {
    err << "cantor: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "cantor: internal error: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace cantor::cli
