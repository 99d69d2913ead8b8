#include "holo/runner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "holo/fixtures.hpp"
#include "holo/json_writer.hpp"

namespace holo {

using ojson = nlohmann::ordered_json;

namespace {

ojson to_json(const Vector& v) {
  ojson a = ojson::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

ojson to_json(const Matrix& m) {
  ojson a = ojson::array();
  for (int i = 0; i < m.rows(); ++i) {
    ojson row = ojson::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    a.push_back(row);
  }
  return a;
}

ojson to_json(const Christoffel& c) {
  const int n = c.dimension();
  ojson a = ojson::array();
  for (int i = 0; i < n; ++i) {
    ojson mid = ojson::array();
    for (int j = 0; j < n; ++j) {
      ojson row = ojson::array();
      for (int k = 0; k < n; ++k) row.push_back(c(i, j, k));
      mid.push_back(row);
    }
    a.push_back(mid);
  }
  return a;
}

// A scalar/array comparison expressed as a report: error = max |actual - expected|.
CheckReport value_check(std::string name, const std::vector<double>& actual, const std::vector<double>& expected,
                        double tol) {
  CheckReport r;
  r.check = std::move(name);
  r.tolerance = tol;
  r.samples = static_cast<int>(actual.size());
  if (actual.size() != expected.size()) {
    r.max_abs_error = r.max_rel_error = std::numeric_limits<double>::infinity();
  } else {
    for (std::size_t i = 0; i < actual.size(); ++i)
      r.max_abs_error = std::max(r.max_abs_error, std::abs(actual[i] - expected[i]));
    r.max_rel_error = r.max_abs_error;
  }
  r.witness.values["actual"] = actual;
  r.witness.values["expected"] = expected;
  r.finalize();
  return r;
}

std::vector<double> flatten(const Matrix& m) {
  std::vector<double> out;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out.push_back(m(i, j));
  return out;
}

struct SuiteEntry {
  CheckReport report;
  bool expected_pass;
};

class Suite {
 public:
  explicit Suite(const RunOptions& o) : options_(o) {}

  void add(CheckReport r, bool expected_pass = true) {
    if (r.step == 0.0) r.step = options_.step;
    if (r.seed == 0) r.seed = options_.seed;
    entries_.push_back({std::move(r), expected_pass});
  }

  bool pass() const {
    return std::all_of(entries_.begin(), entries_.end(),
                       [](const SuiteEntry& e) { return e.report.pass == e.expected_pass; });
  }

  ojson checks_json() const {
    auto sorted = entries_;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const SuiteEntry& a, const SuiteEntry& b) { return a.report.check < b.report.check; });
    ojson a = ojson::array();
    for (const auto& e : sorted) {
      ojson j = report_to_json(e.report);
      j["expected"] = e.expected_pass ? "pass" : "fail";
      j["expectation_met"] = e.report.pass == e.expected_pass;
      a.push_back(j);
    }
    return a;
  }

  const CheckReport* find(std::string_view name) const {
    for (const auto& e : entries_)
      if (e.report.check == name) return &e.report;
    return nullptr;
  }

 private:
  RunOptions options_;
  std::vector<SuiteEntry> entries_;
};

CheckReport verdict_report(const Verdict& v, double tol) {
  CheckReport r;
  r.check = "generalized_berwald";
  r.tolerance = tol;
  for (const auto& sub : v.reports) {
    r.samples += sub.samples;
    r.max_abs_error = std::max(r.max_abs_error, sub.max_abs_error);
    r.max_rel_error = std::max(r.max_rel_error, sub.max_rel_error);
  }
  r.witness.labels["verdict"] = v.verdict;
  r.witness.labels["berwald_note"] = v.berwald_note;
  r.witness.values["torsion_max"] = {v.torsion_max};
  r.pass = v.certified;
  return r;
}

CheckReport isometry_report(const MinkowskiNorm& f, const std::vector<double>* expected, double tol) {
  const IsometryGroup g = isometry_group_2x2(f);
  std::vector<double> actual;
  for (const auto& m : g.elements) {
    const auto flat = flatten(m);
    actual.insert(actual.end(), flat.begin(), flat.end());
  }
  CheckReport r = expected ? value_check("isometry_group", actual, *expected, tol) : CheckReport{};
  r.check = "isometry_group";
  r.tolerance = tol;
  r.witness.values["count"] = {static_cast<double>(g.elements.size())};
  r.witness.labels["continuous_family"] = g.continuous_family ? "true" : "false";
  if (!expected) {
    r.samples = static_cast<int>(g.elements.size());
    r.witness.values["matrices"] = actual;
    r.pass = !g.continuous_family;
  }
  return r;
}

InvarianceOptions invariance_options(const RunOptions& o) {
  InvarianceOptions inv;
  inv.vectors = o.vectors;
  inv.step = o.step;
  return inv;
}

VerdictOptions verdict_options(const RunOptions& o) {
  VerdictOptions v;
  v.tol = o.tolerance;
  v.seed = o.seed;
  v.curves = o.curves;
  v.invariance = invariance_options(o);
  return v;
}

std::vector<Vector> random_points(const Box& region, int count, std::uint64_t seed, std::uint64_t stream) {
  std::vector<Vector> out;
  for (int i = 0; i < count; ++i) {
    Rng rng(seed, stream + static_cast<std::uint64_t>(i));
    out.push_back(rng.in_box(region));
  }
  return out;
}

// Checks shared by every fixture with a parallelism and cover.
void common_checks(Suite& suite, const Fixture& fx, const RunOptions& o, const Box& curve_region) {
  const InvarianceOptions inv = invariance_options(o);
  CurveGenerator gen{o.seed, CurveFamily::Mixed, o.curves, curve_region, {}};
  suite.add(check_holonomy_invariance(fx.norm, fx.connection, gen, o.tolerance, inv), fx.expect_holonomy_invariant);
  PairSampler pairs{o.seed, 100, fx.region.intersect(fx.parallelism.domain()), o.vectors, {}};
  const double compat_tol = fx.name == "section5" ? 1e-9 : o.tolerance;
  suite.add(check_parallelism_compat(fx.norm, fx.parallelism, pairs, compat_tol), fx.expect_compatible);
  if (fx.cover) suite.add(verdict_report(generalized_berwald_verdict(fx.norm, *fx.cover, verdict_options(o)), o.tolerance),
                          fx.expect_compatible);
}

ojson verify_section5(const Fixture& fx, const RunOptions& o, Suite& suite) {
  const Box curve_region = Box::cube(2, 2.0);
  common_checks(suite, fx, o, curve_region);

  // Torsion of the frame at random points.
  {
    CheckReport r;
    r.check = "torsion";
    r.tolerance = fx.expectation("torsion_E1_E2").tolerance;
    const auto& expected = fx.expectation("torsion_E1_E2").value;
    const VectorField e1 = fx.frame.field(0), e2 = fx.frame.field(1);
    for (const auto& p : random_points(fx.region, 50, o.seed, 0x500000)) {
      const Vector t = torsion(fx.connection, e1, e2, {p}).components;
      const double err = std::max(std::abs(t[0] - expected[0]), std::abs(t[1] - expected[1]));
      ++r.samples;
      if (err >= r.max_abs_error) {
        r.max_abs_error = r.max_rel_error = err;
        r.witness.values["p"] = std::vector<double>{p[0], p[1]};
        r.witness.values["torsion"] = std::vector<double>{t[0], t[1]};
      }
    }
    r.finalize();
    suite.add(r);
  }
  const double obstruction = berwald_obstruction(fx.connection, random_points(fx.region, 20, o.seed, 0x510000));
  suite.add(value_check("berwald_obstruction", {obstruction}, fx.expectation("berwald_obstruction").value,
                        fx.expectation("berwald_obstruction").tolerance));

  const auto& iso = fx.expectation("isometry_group");
  suite.add(isometry_report(fx.model_norm, &iso.value, iso.tolerance));

  // Coordinate Christoffel symbols.
  {
    const auto& e = fx.expectation("coordinate_christoffel");
    CheckReport worst;
    for (const auto& p : random_points(fx.region, 20, o.seed, 0x520000)) {
      const Christoffel c = fx.connection.coordinate_symbols({p});
      std::vector<double> actual;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int k = 0; k < 2; ++k) actual.push_back(c(i, j, k));
      CheckReport r = value_check("coordinate_christoffel", actual, e.value, e.tolerance);
      if (worst.check.empty() || r.max_abs_error > worst.max_abs_error) worst = r;
    }
    worst.samples = 20;
    suite.add(worst);
  }

  // Transport against the frame-transfer oracle [E(q)] [E(p)]^-1.
  {
    const auto& e = fx.expectation("transport_origin_to_unit_x");
    const TransportOperator t =
        parallel_transport(fx.connection, Curve::segment(make_vector({0, 0}), make_vector({1, 0})), 1.0, o.step);
    CheckReport r = value_check("transport_oracle", flatten(t.matrix), e.value, e.tolerance);
    r.witness.values["step_error"] = {t.step_error};
    CurveGenerator gen{o.seed + 1, CurveFamily::Mixed, 20, curve_region, {}};
    double along = 0.0;
    for (const auto& c : gen.generate()) {
      const Matrix m = transport_matrices(fx.connection, c, {1.0}, o.step).front();
      const Matrix oracle = fx.frame.matrix({c.position(1.0)}) * fx.frame.matrix({c.position(0.0)}).inverse();
      along = std::max(along, max_abs(m - oracle));
    }
    r.samples += 20;
    r.max_abs_error = r.max_rel_error = std::max(r.max_abs_error, along);
    r.witness.values["random_curve_max_error"] = {along};
    r.finalize();
    suite.add(r);
  }

  // Lie-algebra criterion; (nabla P)_v itself must vanish.
  {
    CheckReport r = check_compalg_criterion(fx.norm, fx.parallelism, fx.connection, {o.seed, 100, fx.region});
    suite.add(r);
    CheckReport zero;
    zero.check = "nabla_P_zero";
    zero.tolerance = 1e-10;
    zero.samples = r.samples;
    zero.max_abs_error = zero.max_rel_error = r.witness.values["max_endomorphism_entry"].front();
    zero.finalize();
    suite.add(zero);
  }

  // Basepoint independence of the pushed-down norm.
  {
    const auto& e = fx.expectation("pushdown_independence");
    const auto probes = random_points(fx.region, 10, o.seed, 0x530000);
    const PushdownDeviation d = pushdown_deviation(fx.norm, fx.parallelism, {make_vector({0, 0})}, probes);
    CheckReport r = value_check("pushdown_independence", {d.max_deviation}, e.value, e.tolerance);
    r.samples = 10 * 200;
    r.witness.values["worst_basepoint"] = std::vector<double>{d.worst_probe[0], d.worst_probe[1]};
    suite.add(r);
  }

  suite.add(value_check("norm_values",
                        {fx.norm(make_vector({0, 0}), make_vector({0, 1})),
                         fx.norm(make_vector({1, 0}), make_vector({1, 1}))},
                        {fx.expectation("norm_origin_dy").value[0], fx.expectation("norm_unit_x_diagonal").value[0]},
                        1e-12));

  // Uniqueness against the connection synthesized from the single-member cover.
  {
    const Connection synthesized = connection_from_covering_parallelism(*fx.cover);
    CurveGenerator gen{o.seed + 2, CurveFamily::Mixed, std::max(1, o.curves / 4), curve_region, {}};
    suite.add(check_uniqueness(fx.norm, fx.connection, synthesized, gen, o.tolerance, invariance_options(o)));
  }

  // Not Berwald: the certified compatible connection is unique and has torsion.
  {
    const CheckReport* v = suite.find("generalized_berwald");
    CheckReport r;
    r.check = "not_berwald";
    r.tolerance = 0.0;
    r.samples = 1;
    const std::string note = v ? v->witness.labels.at("berwald_note") : "";
    r.witness.labels["berwald_note"] = note;
    r.pass = v && v->pass && note.rfind("not Berwald", 0) == 0;
    suite.add(r);
  }

  const CheckReport* inv = suite.find("holonomy_invariance");
  ojson summary;
  summary["torsion_max"] = obstruction;
  summary["isometry_count"] = static_cast<int>(isometry_group_2x2(fx.model_norm).elements.size());
  summary["invariance_max_rel"] = inv ? inv->max_rel_error : 0.0;
  return summary;
}

ojson verify_euclidean_flat(const Fixture& fx, const RunOptions& o, Suite& suite) {
  common_checks(suite, fx, o, fx.region.shrunk(0.1));
  CheckReport abs_check = *suite.find("holonomy_invariance");
  abs_check.check = "holonomy_max_abs";
  abs_check.tolerance = fx.expectation("holonomy_max_abs").tolerance;
  abs_check.max_rel_error = abs_check.max_abs_error;
  abs_check.finalize();
  suite.add(abs_check);
  suite.add(check_compalg_criterion(fx.norm, fx.parallelism, fx.connection, {o.seed, 100, fx.region}));
  const double obstruction = berwald_obstruction(fx.connection, grid_points(fx.region, 4));
  suite.add(value_check("berwald_obstruction", {obstruction}, {0.0}, fx.expectation("berwald_obstruction").tolerance));
  CheckReport iso = isometry_report(fx.model_norm, nullptr, kIsometryTolerance);
  suite.add(iso, false);  // O(2) is a continuous family
  ojson summary;
  summary["torsion_max"] = obstruction;
  summary["isometry_continuous_family"] = true;
  summary["invariance_max_abs"] = abs_check.max_abs_error;
  return summary;
}

ojson verify_scaled(const Fixture& fx, const RunOptions& o, Suite& suite) {
  common_checks(suite, fx, o, fx.region.shrunk(0.1));
  PairSampler witness_pair{o.seed, 1, fx.region, o.vectors, {{make_vector({0, 0}), make_vector({1, 0})}}};
  const CheckReport compat = check_parallelism_compat(fx.norm, fx.parallelism, witness_pair, o.tolerance);
  const auto& e = fx.expectation("compat_witness_ratio");
  CheckReport r = value_check("compat_witness_ratio", compat.witness.values.at("ratio"), e.value, e.tolerance);
  r.witness.values["p"] = {0.0, 0.0};
  r.witness.values["q"] = {1.0, 0.0};
  suite.add(r);
  ojson summary;
  summary["compat_witness_ratio"] = compat.witness.values.at("ratio").front();
  return summary;
}

ojson verify_rotated_blend(const Fixture& fx, const RunOptions& o, Suite& suite) {
  const Box curve_region = fx.region.shrunk(0.1);
  common_checks(suite, fx, o, curve_region);
  suite.add(check_compalg_criterion(fx.norm, fx.parallelism, fx.connection, {o.seed, 100, fx.region.shrunk(0.05)}));
  {
    CheckReport r;
    r.check = "phi_orthogonality";
    r.tolerance = fx.expectation("phi_orthogonality").tolerance;
    CurveGenerator gen{o.seed + 3, CurveFamily::Mixed, 20, curve_region, {}};
    for (const auto& c : gen.generate()) {
      for (const auto& s : phi_curve(fx.parallelism, fx.connection, c, o.step).samples) {
        const double err = max_abs(s.value.transpose() * s.value - Matrix::Identity(2, 2));
        ++r.samples;
        r.max_abs_error = std::max(r.max_abs_error, err);
      }
    }
    r.max_rel_error = r.max_abs_error;
    r.finalize();
    suite.add(r);
  }
  const double obstruction = berwald_obstruction(fx.connection, grid_points(curve_region, 5));
  {
    CheckReport r;
    r.check = "berwald_obstruction_positive";
    r.samples = 25;
    r.tolerance = 0.0;
    r.witness.values["torsion_max"] = {obstruction};
    r.pass = obstruction > 1e-6;
    suite.add(r);
  }
  {
    CheckReport r;
    r.check = "uniqueness_precondition";
    r.samples = 1;
    CurveGenerator gen{o.seed, CurveFamily::Mixed, 5, curve_region, {}};
    try {
      check_uniqueness(fx.norm, Connection::flat(2), fx.connection, gen, o.tolerance, invariance_options(o));
      r.witness.labels["diagnostic"] = "uniqueness check ran although the isometry group is continuous";
      r.pass = false;
    } catch (const Error& err) {
      r.witness.labels["diagnostic"] = err.what();
      r.pass = err.code() == ErrorCode::Precondition;
    }
    suite.add(r);
  }
  ojson summary;
  summary["torsion_max"] = obstruction;
  summary["phi_orthogonality_max"] = suite.find("phi_orthogonality")->max_abs_error;
  summary["invariance_max_rel"] = suite.find("holonomy_invariance")->max_rel_error;
  return summary;
}

ojson verify_gamma_xx(const Fixture& fx, const RunOptions& o, Suite& suite) {
  common_checks(suite, fx, o, fx.region.shrunk(0.1));
  CurveGenerator one{o.seed, CurveFamily::Segments, 1, fx.region,
                     {Curve::segment(make_vector({0, 0}), make_vector({1, 0}))}};
  InvarianceOptions inv = invariance_options(o);
  inv.ts = {1.0};
  const CheckReport witness = check_holonomy_invariance(fx.norm, fx.connection, one, o.tolerance, inv);
  const auto& e = fx.expectation("invariance_witness_ratio");
  CheckReport r = value_check("invariance_witness_ratio", witness.witness.values.at("ratio"), e.value, e.tolerance);
  r.witness.values["vector"] = witness.witness.values.at("vector");
  suite.add(r);
  ojson summary;
  summary["invariance_witness_ratio"] = witness.witness.values.at("ratio").front();
  return summary;
}

ojson options_json(const RunOptions& o) {
  ojson j;
  j["seed"] = o.seed;
  j["step"] = o.step;
  j["tolerance"] = o.tolerance;
  j["curves"] = o.curves;
  j["vectors"] = o.vectors;
  return j;
}

// ---------------------------------------------------------------------------
// Config parsing

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::Config, msg); }

void require_keys(const nlohmann::json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) config_error(where + " must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) config_error("unknown key '" + it.key() + "' in " + where);
}

std::vector<std::string> coordinate_names(int n) {
  static const char* names[] = {"x", "y", "z", "w"};
  return std::vector<std::string>(names, names + n);
}

Expression parse_expression(const nlohmann::json& j, const std::vector<std::string>& vars) {
  if (j.is_number()) return Expression::parse(std::to_string(j.get<double>()), vars);
  if (!j.is_string()) config_error("expected an expression string or number");
  return Expression::parse(j.get<std::string>(), vars);
}

double number(const nlohmann::json& j, const std::string& what) {
  if (!j.is_number()) config_error(what + " must be a number");
  return j.get<double>();
}

Matrix parse_matrix(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) config_error(what + " must be a non-empty array of rows");
  const int r = static_cast<int>(j.size());
  if (r > kMaxDim) config_error(what + " is too large");
  Matrix m(r, r);
  for (int i = 0; i < r; ++i) {
    if (!j[static_cast<std::size_t>(i)].is_array() || static_cast<int>(j[static_cast<std::size_t>(i)].size()) != r)
      config_error(what + " must be square");
    for (int k = 0; k < r; ++k) m(i, k) = number(j[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)], what);
  }
  return m;
}


Connection parse_connection(const nlohmann::json& spec, const Frame& frame, int n, const Box& domain) {
  require_keys(spec, {"type", "christoffel"}, "connection");
  const std::string type = spec.value("type", "");
  if (type == "flat") return Connection::flat(n);
  if (type == "frame_flat") return Connection::frame_flat(frame);
  if (type != "coordinate" && type != "frame") config_error("connection type must be flat, frame_flat, coordinate or frame");
  const auto& g = spec.at("christoffel");
  if (!g.is_array() || static_cast<int>(g.size()) != n) config_error("christoffel must be an n x n x n array");
  const auto vars = coordinate_names(n);
  std::vector<Expression> exprs;
  for (int i = 0; i < n; ++i) {
    const auto& gi = g[static_cast<std::size_t>(i)];
    if (!gi.is_array() || static_cast<int>(gi.size()) != n) config_error("christoffel must be an n x n x n array");
    for (int j = 0; j < n; ++j) {
      const auto& gij = gi[static_cast<std::size_t>(j)];
      if (!gij.is_array() || static_cast<int>(gij.size()) != n) config_error("christoffel must be an n x n x n array");
      for (int k = 0; k < n; ++k) exprs.push_back(parse_expression(gij[static_cast<std::size_t>(k)], vars));
    }
  }
  auto symbols = [exprs, n](const Vector& p) {
    std::array<double, kMaxDim> args{};
    for (int i = 0; i < n; ++i) args[static_cast<std::size_t>(i)] = p[i];
    const std::span<const double> a(args.data(), static_cast<std::size_t>(n));
    Christoffel c(n);
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) c(i, j, k) = exprs[idx++].evaluate(a);
    return c;
  };
  if (type == "coordinate") return Connection::coordinate(n, symbols, domain);
  return Connection(frame, symbols, domain);
}

struct Manifold {
  int dimension;
  Box domain;
  Box region;
  Frame frame;
  MinkowskiNorm model_norm;
  NormField norm;
  Connection connection;
  std::optional<Connection> alternate;
  Parallelism parallelism;
};

Manifold parse_manifold(const nlohmann::json& spec) {
  require_keys(spec,
               {"dimension", "domain", "region", "frame", "norm", "norm_scale", "connection", "alternate_connection"},
               "manifold");
  if (!spec.contains("dimension") || !spec["dimension"].is_number_integer()) config_error("manifold.dimension is required");
  const int n = spec["dimension"].get<int>();
  if (n < 2 || n > 3) config_error("manifold.dimension must be 2 or 3");
  const Box domain = spec.contains("domain") ? parse_box(spec["domain"], n) : Box::whole(n);
  const Box region = spec.contains("region") ? parse_box(spec["region"], n) : domain.clipped(2.0);
  const Frame frame = spec.contains("frame") ? parse_frame(spec["frame"], n, domain) : Frame::coordinate(n);
  if (!spec.contains("norm")) config_error("manifold.norm is required");
  const MinkowskiNorm f = parse_norm_spec(spec["norm"], n);
  if (f.dimension() != n) config_error("norm dimension does not match manifold.dimension");
  NormField norm = pullback_norm(f, frame);
  if (spec.contains("norm_scale")) {
    const Expression s = parse_expression(spec["norm_scale"], coordinate_names(n));
    norm = scaled_norm(norm, ScalarField(n, [s](JetArgs x) { return s.evaluate(x); }));
  }
  const Connection conn = spec.contains("connection") ? parse_connection(spec["connection"], frame, n, domain)
                                                      : Connection::frame_flat(frame);
  std::optional<Connection> alternate;
  if (spec.contains("alternate_connection"))
    alternate = parse_connection(spec["alternate_connection"], frame, n, domain);
  return Manifold{n, domain, region, frame, f, norm, conn, alternate, frame_parallelism(frame)};
}

RunOptions parse_options(const nlohmann::json& cfg, const RunOverrides& overrides) {
  RunOptions o;
  if (cfg.contains("seed")) {
    if (!cfg["seed"].is_number_unsigned()) config_error("seed must be a non-negative integer");
    o.seed = cfg["seed"].get<std::uint64_t>();
  }
  if (cfg.contains("step")) o.step = number(cfg["step"], "step");
  if (cfg.contains("tolerance")) o.tolerance = number(cfg["tolerance"], "tolerance");
  if (cfg.contains("curves")) o.curves = static_cast<int>(number(cfg["curves"], "curves"));
  if (cfg.contains("vectors")) o.vectors = static_cast<int>(number(cfg["vectors"], "vectors"));
  o = overrides.apply(o);
  if (!(o.step > 0.0) || !(o.tolerance > 0.0) || o.curves < 1 || o.vectors < 1)
    config_error("step and tolerance must be positive; curves and vectors at least 1");
  return o;
}

nlohmann::json parse_json(std::string_view text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    config_error(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

RunOptions RunOverrides::apply(RunOptions base) const {
  if (step) base.step = *step;
  if (tolerance) base.tolerance = *tolerance;
  if (curves) base.curves = *curves;
  if (vectors) base.vectors = *vectors;
  if (seed) base.seed = *seed;
  return base;
}

ojson report_to_json(const CheckReport& r) {
  ojson j;
  j["check"] = r.check;
  j["samples"] = r.samples;
  j["max_abs_error"] = r.max_abs_error;
  j["max_rel_error"] = r.max_rel_error;
  j["tolerance"] = r.tolerance;
  j["pass"] = r.pass;
  ojson w = ojson::object();
  for (const auto& [k, v] : r.witness.values) w[k] = v.size() == 1 ? ojson(v.front()) : ojson(v);
  for (const auto& [k, v] : r.witness.labels) w[k] = v;
  j["witness"] = w;
  j["seed"] = r.seed;
  j["step"] = r.step;
  return j;
}

RunResult run_verify(std::string_view name, const RunOptions& o) {
  const Fixture fx = fixture_by_name(name);
  Suite suite(o);
  ojson summary;
  if (fx.name == "section5") summary = verify_section5(fx, o, suite);
  else if (fx.name == "euclidean_flat") summary = verify_euclidean_flat(fx, o, suite);
  else if (fx.name == "scaled_euclidean_incompatible") summary = verify_scaled(fx, o, suite);
  else if (fx.name == "rotated_blend") summary = verify_rotated_blend(fx, o, suite);
  else summary = verify_gamma_xx(fx, o, suite);

  ojson doc;
  doc["command"] = "verify";
  doc["fixture"] = fx.name;
  doc["description"] = fx.description;
  doc["options"] = options_json(o);
  doc["checks"] = suite.checks_json();
  ojson expected = ojson::array();
  for (const auto& e : fx.expected) {
    ojson j;
    j["key"] = e.key;
    j["origin"] = to_string(e.origin);
    j["value"] = e.value;
    j["tolerance"] = e.tolerance;
    expected.push_back(j);
  }
  doc["expected_values"] = expected;
  doc["summary"] = summary;
  doc["pass"] = suite.pass();
  return RunResult{suite.pass(), to_json_text(doc), ""};
}

RunResult run_check(std::string_view config_json, const RunOverrides& overrides) {
  const nlohmann::json cfg = parse_json(config_json);
  require_keys(cfg,
               {"fixture", "manifold", "check", "checks", "seed", "step", "tolerance", "curves", "vectors",
                "curve_family", "output"},
               "check config");
  const RunOptions o = parse_options(cfg, overrides);
  if (cfg.contains("fixture") == cfg.contains("manifold")) config_error("give exactly one of 'fixture' or 'manifold'");

  std::optional<Manifold> m;
  if (cfg.contains("fixture")) {
    Fixture fx = fixture_by_name(cfg["fixture"].get<std::string>());
    m = Manifold{fx.dimension(), fx.frame.domain(), fx.region, fx.frame, fx.model_norm,
                 fx.norm,        fx.connection,     std::nullopt, fx.parallelism};
  } else {
    m = parse_manifold(cfg["manifold"]);
  }

  std::vector<std::string> names;
  if (cfg.contains("check")) names.push_back(cfg["check"].get<std::string>());
  if (cfg.contains("checks"))
    for (const auto& c : cfg["checks"]) names.push_back(c.get<std::string>());
  if (names.empty()) config_error("no checks requested");
  const CurveFamily family =
      cfg.contains("curve_family") ? curve_family_from_string(cfg["curve_family"].get<std::string>()) : CurveFamily::Mixed;

  const Box curve_region = m->region.clipped().shrunk(0.1);
  const InvarianceOptions inv = invariance_options(o);
  Suite suite(o);
  ojson extra = ojson::object();
  for (const auto& name : names) {
    CurveGenerator gen{o.seed, family, o.curves, curve_region, {}};
    if (name == "holonomy_invariance") {
      suite.add(check_holonomy_invariance(m->norm, m->connection, gen, o.tolerance, inv));
    } else if (name == "parallelism_compat") {
      suite.add(check_parallelism_compat(m->norm, m->parallelism, {o.seed, 100, m->region, o.vectors, {}},
                                         o.tolerance));
    } else if (name == "compalg_criterion") {
      suite.add(check_compalg_criterion(m->norm, m->parallelism, m->connection, {o.seed, 100, m->region}));
    } else if (name == "berwald_obstruction") {
      const double t = berwald_obstruction(m->connection, grid_points(curve_region, 5));
      CheckReport r;
      r.check = "berwald_obstruction";
      r.samples = 25;
      r.pass = true;
      r.witness.values["torsion_max"] = {t};
      extra["torsion_max"] = t;
      suite.add(r);
    } else if (name == "generalized_berwald") {
      const Verdict v = generalized_berwald_verdict(m->norm, m->connection, m->region, verdict_options(o));
      suite.add(verdict_report(v, o.tolerance));
      extra["verdict"] = v.verdict;
      extra["berwald_note"] = v.berwald_note;
    } else if (name == "isometry_group") {
      if (m->dimension != 2) config_error("isometry_group needs dimension 2");
      suite.add(isometry_report(m->model_norm, nullptr, kIsometryTolerance));
    } else if (name == "uniqueness") {
      if (!m->alternate) config_error("uniqueness needs manifold.alternate_connection");
      suite.add(check_uniqueness(m->norm, m->connection, *m->alternate, gen, o.tolerance, inv));
    } else {
      config_error("unknown check '" + name + "'");
    }
  }
  ojson doc;
  doc["command"] = "check";
  doc["options"] = options_json(o);
  doc["checks"] = suite.checks_json();
  if (!extra.empty()) doc["summary"] = extra;
  doc["pass"] = suite.pass();
  return RunResult{suite.pass(), to_json_text(doc), cfg.value("output", "")};
}

RunResult run_synthesize(std::string_view config_json, const RunOverrides& overrides) {
  const nlohmann::json cfg = parse_json(config_json);
  require_keys(cfg,
               {"dimension", "region", "cover", "grid", "norm", "frame", "seed", "step", "tolerance", "curves",
                "vectors", "output"},
               "synthesize config");
  const RunOptions o = parse_options(cfg, overrides);
  if (!cfg.contains("dimension") || !cfg["dimension"].is_number_integer()) config_error("dimension is required");
  const int n = cfg["dimension"].get<int>();
  if (n < 2 || n > 3) config_error("dimension must be 2 or 3");
  if (!cfg.contains("region")) config_error("region is required");
  const Box region = parse_box(cfg["region"], n);
  if (!region.bounded()) config_error("region must be bounded");
  if (!cfg.contains("cover") || !cfg["cover"].is_array() || cfg["cover"].empty())
    config_error("cover must be a non-empty array");

  std::vector<CoverMember> members;
  for (const auto& item : cfg["cover"]) {
    require_keys(item, {"domain", "frame"}, "cover member");
    if (!item.contains("domain")) config_error("cover member needs a domain");
    const Box box = parse_box(item["domain"], n);
    const Frame frame = item.contains("frame") ? parse_frame(item["frame"], n, Box::whole(n)) : Frame::coordinate(n);
    members.push_back({box, frame_parallelism(frame)});
  }
  const CoveringParallelism cover(members, region);
  const Connection conn = connection_from_covering_parallelism(cover);
  const int grid = cfg.contains("grid") ? cfg["grid"].get<int>() : 5;
  if (grid < 1 || grid > 50) config_error("grid must be between 1 and 50");

  ojson points = ojson::array();
  ojson symbols = ojson::array();
  for (const auto& p : grid_points(region, grid)) {
    points.push_back(to_json(p));
    symbols.push_back(to_json(conn.coordinate_symbols({p})));
  }
  ojson doc;
  doc["command"] = "synthesize";
  doc["options"] = options_json(o);
  ojson c;
  c["representation"] = "coordinate_christoffel_samples";
  c["index_order"] = "gamma[i][j][k] = Gamma^i_{jk}, nabla_{d_j} d_k = Gamma^i_{jk} d_i";
  c["points"] = points;
  c["christoffel"] = symbols;
  doc["connection"] = c;
  doc["torsion_max"] = berwald_obstruction(conn, grid_points(region, grid));
  bool pass = true;
  if (cfg.contains("norm")) {
    const Frame frame = cfg.contains("frame") ? parse_frame(cfg["frame"], n, Box::whole(n)) : Frame::coordinate(n);
    const NormField norm = pullback_norm(parse_norm_spec(cfg["norm"], n), frame);
    CurveGenerator gen{o.seed, CurveFamily::Mixed, o.curves, region.shrunk(0.1), {}};
    const CheckReport r = check_holonomy_invariance(norm, conn, gen, o.tolerance, invariance_options(o));
    doc["holonomy_invariance"] = report_to_json(r);
    pass = r.pass;
  }
  doc["pass"] = pass;
  return RunResult{pass, to_json_text(doc), cfg.value("output", "")};
}

RunResult run_isometry_group(std::string_view norm_spec_json) {
  const nlohmann::json spec = parse_json(norm_spec_json);
  const MinkowskiNorm f = parse_norm_spec(spec, 2);
  if (f.dimension() != 2) config_error("isometry-group needs a planar norm");
  const IsometryGroup g = isometry_group_2x2(f);
  ojson doc;
  doc["command"] = "isometry-group";
  doc["continuous_family"] = g.continuous_family;
  doc["count"] = static_cast<int>(g.elements.size());
  ojson mats = ojson::array();
  for (const auto& m : g.elements) mats.push_back(to_json(m));
  doc["matrices"] = mats;
  return RunResult{true, to_json_text(doc), ""};
}

MinkowskiNorm parse_norm_spec(const nlohmann::json& spec, int dimension_hint) {
  require_keys(spec, {"type", "Q", "beta", "expr", "dimension"}, "norm");
  const std::string type = spec.value("type", "");
  if (type == "randers") {
    if (!spec.contains("Q") || !spec.contains("beta")) config_error("randers norm needs Q and beta");
    const Matrix q = parse_matrix(spec["Q"], "Q");
    const auto& b = spec["beta"];
    if (!b.is_array() || static_cast<int>(b.size()) != q.rows()) config_error("beta must match Q's size");
    Vector beta(static_cast<int>(b.size()));
    for (int i = 0; i < beta.size(); ++i) beta[i] = number(b[static_cast<std::size_t>(i)], "beta");
    return randers_norm({q, beta});
  }
  const int n = spec.contains("dimension") ? spec["dimension"].get<int>() : dimension_hint;
  check_dimension(n);
  if (type == "custom") {
    if (!spec.contains("expr")) config_error("custom norm needs expr");
    const MinkowskiNorm f = MinkowskiNorm::from_expression(n, parse_expression(spec["expr"], component_names(n)));
    if (!is_definite(f, sphere_samples(n, 72))) config_error("custom norm is not definite on sampled vectors");
    return f;
  }
  if (type == "euclidean") return MinkowskiNorm::euclidean(n);
  config_error("norm type must be randers, custom or euclidean");
}

Frame parse_frame(const nlohmann::json& spec, int n, const Box& domain) {
  if (!spec.is_array() || static_cast<int>(spec.size()) != n) config_error("frame must list n vector fields");
  const auto vars = coordinate_names(n);
  std::vector<VectorField> fields;
  for (const auto& field : spec) {
    if (!field.is_array() || static_cast<int>(field.size()) != n) config_error("each frame field needs n components");
    std::vector<Expression> comps;
    for (const auto& c : field) comps.push_back(parse_expression(c, vars));
    fields.emplace_back(
        n,
        [comps](JetArgs x) {
          std::vector<Jet> out;
          out.reserve(comps.size());
          for (const auto& e : comps) out.push_back(e.evaluate(x));
          return out;
        },
        domain);
  }
  return Frame(std::move(fields));
}

Box parse_box(const nlohmann::json& spec, int n) {
  require_keys(spec, {"lower", "upper"}, "box");
  const double inf = std::numeric_limits<double>::infinity();
  Box b{Vector::Constant(n, -inf), Vector::Constant(n, inf)};
  for (const char* side : {"lower", "upper"}) {
    if (!spec.contains(side)) continue;
    const auto& a = spec[side];
    if (!a.is_array() || static_cast<int>(a.size()) != n) config_error(std::string("box.") + side + " needs n entries");
    for (int i = 0; i < n; ++i) {
      const auto& v = a[static_cast<std::size_t>(i)];
      if (v.is_null()) continue;
      (std::string(side) == "lower" ? b.lower : b.upper)[i] = number(v, "box bound");
    }
  }
  for (int i = 0; i < n; ++i)
    if (!(b.lower[i] < b.upper[i])) config_error("box bounds must satisfy lower < upper");
  return b;
}

}  // namespace holo
