#include "holo/verification.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace holo {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::vector<double> to_list(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

std::vector<double> to_list(const Matrix& m) {
  std::vector<double> out;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out.push_back(m(i, j));
  return out;
}

// A unit vector orthogonal to `d`.
Vector orthogonal_unit(const Vector& d, Rng& rng) {
  const int n = static_cast<int>(d.size());
  if (n == 2) return make_vector({-d[1], d[0]}) / d.norm();
  for (;;) {
    Vector r = rng.unit_vector(n);
    r -= r.dot(d) / d.squaredNorm() * d;
    if (r.norm() > 1e-3) return r / r.norm();
  }
}

bool regular(const Curve& c) {
  double scale = 0.0;
  double slowest = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= 100; ++k) {
    const double speed = c.velocity(k / 100.0).norm();
    scale = std::max(scale, speed);
    slowest = std::min(slowest, speed);
  }
  return slowest > 1e-6 * std::max(scale, 1.0) && slowest > 1e-9;
}

bool inside(const Curve& c, const Box& box) {
  for (int k = 0; k <= 100; ++k)
    if (!box.contains(c.position(k / 100.0))) return false;
  return true;
}

Curve draw_curve(CurveFamily family, const Box& box, Rng& rng) {
  const int n = box.dimension();
  Vector width = box.upper - box.lower;
  const double margin = 0.1 * width.minCoeff();
  const Box inner{box.lower + Vector::Constant(n, margin), box.upper - Vector::Constant(n, margin)};
  switch (family) {
    case CurveFamily::Segments: {
      const Vector a = rng.in_box(box);
      const Vector b = rng.in_box(box);
      return Curve::segment(a, b);
    }
    case CurveFamily::Circles: {
      const Box middle = box.shrunk(0.5);
      const Vector c = rng.in_box(middle);
      double room = std::numeric_limits<double>::infinity();
      for (int i = 0; i < n; ++i) room = std::min({room, c[i] - box.lower[i], box.upper[i] - c[i]});
      const double radius = rng.uniform(0.1, 0.9) * room;
      const Vector u = rng.unit_vector(n);
      const Vector w = orthogonal_unit(u, rng);
      const double start = rng.uniform(0.0, 2.0 * std::numbers::pi);
      const double sweep = rng.uniform(0.5 * std::numbers::pi, 2.0 * std::numbers::pi);
      return Curve::circle(c, u, w, radius, start, sweep);
    }
    case CurveFamily::Sinusoids: {
      const Vector a = rng.in_box(inner);
      const Vector b = rng.in_box(inner);
      const Vector d = (b - a).norm() > 1e-9 ? Vector(b - a) : Vector(Vector::Unit(n, 0));
      const Vector normal = orthogonal_unit(d, rng);
      const int waves = 1 + static_cast<int>(rng.uniform() * 3.0);
      return Curve::sinusoid(a, b, normal, rng.uniform(0.2, 0.8) * margin, waves);
    }
    case CurveFamily::Bezier:
    case CurveFamily::Mixed: {
      return Curve::bezier({rng.in_box(box), rng.in_box(box), rng.in_box(box), rng.in_box(box)});
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown curve family");
}

double relative(double abs_err, double reference) { return abs_err / std::max(std::abs(reference), kRelativeFloor); }

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : engine_(splitmix64(seed ^ splitmix64(stream + 1))) {}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Vector Rng::unit_vector(int n) {
  for (;;) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = normal();
    const double r = v.norm();
    if (r > 1e-6) return v / r;
  }
}

Vector Rng::in_box(const Box& box) {
  const Box b = box.clipped();
  Vector p(b.dimension());
  for (int i = 0; i < p.size(); ++i) p[i] = uniform(b.lower[i], b.upper[i]);
  return p;
}

const char* to_string(CurveFamily family) {
  switch (family) {
    case CurveFamily::Segments: return "segments";
    case CurveFamily::Circles: return "circles";
    case CurveFamily::Sinusoids: return "sinusoids";
    case CurveFamily::Bezier: return "bezier";
    case CurveFamily::Mixed: return "mixed";
  }
  return "mixed";
}

CurveFamily curve_family_from_string(const std::string& name) {
  for (auto f : {CurveFamily::Segments, CurveFamily::Circles, CurveFamily::Sinusoids, CurveFamily::Bezier,
                 CurveFamily::Mixed})
    if (name == to_string(f)) return f;
  throw Error(ErrorCode::Config, "unknown curve family '" + name + "'");
}

std::vector<Curve> CurveGenerator::generate() const {
  if (!fixed.empty()) return fixed;
  const Box box = region.clipped();
  std::vector<Curve> out;
  out.reserve(static_cast<std::size_t>(count));
  static constexpr CurveFamily cycle[] = {CurveFamily::Segments, CurveFamily::Circles, CurveFamily::Sinusoids,
                                          CurveFamily::Bezier};
  for (int i = 0; i < count; ++i) {
    Rng rng(seed, static_cast<std::uint64_t>(i));
    const CurveFamily f = family == CurveFamily::Mixed ? cycle[i % 4] : family;
    for (;;) {
      Curve c = draw_curve(f, box, rng);
      if (regular(c) && inside(c, box)) {
        out.push_back(std::move(c));
        break;
      }
    }
  }
  return out;
}

std::vector<Vector> sample_vectors(int n, int count, Rng& rng) {
  std::vector<Vector> out;
  for (int i = 0; i < n && static_cast<int>(out.size()) < count; ++i) {
    out.push_back(Vector::Unit(n, i));
    if (static_cast<int>(out.size()) < count) out.push_back(-Vector::Unit(n, i));
  }
  while (static_cast<int>(out.size()) < count) out.push_back(rng.unit_vector(n));
  return out;
}

CheckReport check_holonomy_invariance(const NormField& norm, const Connection& conn, const CurveGenerator& gen,
                                      double tol, const InvarianceOptions& options) {
  CheckReport report;
  report.check = "holonomy_invariance";
  report.tolerance = tol;
  report.seed = gen.seed;
  report.step = options.step;
  const int n = conn.dimension();
  const auto curves = gen.generate();
  double worst = -1.0;
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const Curve& curve = curves[c];
    Rng rng(gen.seed, 0x100000ULL + c);
    const auto vectors = sample_vectors(n, options.vectors, rng);
    const Vector start = curve.position(0.0);
    const auto transports = transport_matrices(conn, curve, options.ts, options.step);
    for (std::size_t k = 0; k < options.ts.size(); ++k) {
      const Vector end = curve.position(options.ts[k]);
      for (const auto& v : vectors) {
        const double before = norm(start, v);
        const Vector moved = transports[k] * v;
        const double after = norm(end, moved);
        const double abs_err = std::abs(after - before);
        const double rel = relative(abs_err, before);
        ++report.samples;
        report.max_abs_error = std::max(report.max_abs_error, abs_err);
        if (rel > worst) {
          worst = rel;
          report.max_rel_error = rel;
          report.witness.values = {{"curve_index", {static_cast<double>(c)}},
                                   {"t", {options.ts[k]}},
                                   {"start", to_list(start)},
                                   {"vector", to_list(v)},
                                   {"ratio", {after / before}}};
          report.witness.labels = {{"curve_family", curve.family()}};
        }
      }
    }
  }
  report.finalize();
  return report;
}

std::vector<std::pair<Vector, Vector>> PairSampler::generate() const {
  if (!fixed.empty()) return fixed;
  std::vector<std::pair<Vector, Vector>> out;
  for (int i = 0; i < count; ++i) {
    Rng rng(seed, 0x200000ULL + static_cast<std::uint64_t>(i));
    Vector p = rng.in_box(region);
    Vector q = rng.in_box(region);
    out.emplace_back(std::move(p), std::move(q));
  }
  return out;
}

CheckReport check_parallelism_compat(const NormField& norm, const Parallelism& parallelism,
                                     const PairSampler& pairs, double tol) {
  CheckReport report;
  report.check = "parallelism_compat";
  report.tolerance = tol;
  report.seed = pairs.seed;
  const int n = parallelism.dimension();
  const auto list = pairs.generate();
  double worst = -1.0;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto& [p, q] = list[i];
    Rng rng(pairs.seed, 0x300000ULL + i);
    const auto vectors = sample_vectors(n, pairs.vectors, rng);
    const Matrix transfer = parallelism.transfer({p}, {q});
    for (const auto& v : vectors) {
      const double before = norm(p, v);
      const double after = norm(q, transfer * v);
      const double abs_err = std::abs(after - before);
      const double rel = relative(abs_err, before);
      ++report.samples;
      report.max_abs_error = std::max(report.max_abs_error, abs_err);
      if (rel > worst) {
        worst = rel;
        report.max_rel_error = rel;
        report.witness.values = {
            {"p", to_list(p)}, {"q", to_list(q)}, {"vector", to_list(v)}, {"ratio", {after / before}}};
      }
    }
  }
  report.finalize();
  return report;
}

CheckReport check_compalg_criterion(const NormField& norm, const Parallelism& parallelism, const Connection& conn,
                                    const TangentSampler& samples) {
  CheckReport report;
  report.check = "compalg_criterion";
  report.seed = samples.seed;
  report.tolerance = kLieAlgebraTolerance;
  const int n = conn.dimension();
  const auto directions = sphere_samples(n, n == 2 ? 72 : 100);
  double largest_entry = 0.0;
  double worst = -1.0;
  bool secant = false;
  for (int i = 0; i < samples.count; ++i) {
    Rng rng(samples.seed, 0x400000ULL + static_cast<std::uint64_t>(i));
    const Vector p = rng.in_box(samples.region);
    const Vector v = rng.unit_vector(n);
    const Endomorphism e = nabla_P(conn, parallelism, TangentVector{{p}, v});
    const LieAlgebraCheck membership = lie_algebra_member(norm.at({p}), e.matrix, directions);
    secant = secant || membership.used_secant;
    largest_entry = std::max(largest_entry, max_abs(e.matrix));
    ++report.samples;
    report.max_abs_error = std::max(report.max_abs_error, membership.max_violation);
    if (membership.max_violation > worst) {
      worst = membership.max_violation;
      report.max_rel_error = membership.max_violation;
      report.witness.values["p"] = to_list(p);
      report.witness.values["vector"] = to_list(v);
      report.witness.values["endomorphism"] = to_list(e.matrix);
    }
  }
  if (secant) report.tolerance = kSecantTolerance;
  report.witness.values["max_endomorphism_entry"] = {largest_entry};
  report.witness.labels["membership_test"] = secant ? "secant" : "gradient";
  report.finalize();
  return report;
}

double berwald_obstruction(const Connection& conn, const std::vector<Vector>& points) {
  const int n = conn.dimension();
  std::vector<VectorField> fields;
  for (int i = 0; i < n; ++i) fields.push_back(conn.frame().field(i));
  double worst = 0.0;
  for (const auto& p : points)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const TangentVector t = torsion(conn, fields[static_cast<std::size_t>(i)],
                                        fields[static_cast<std::size_t>(j)], {p});
        worst = std::max(worst, t.components.cwiseAbs().maxCoeff());
      }
  return worst;
}

CheckReport check_uniqueness(const NormField& norm, const Connection& first, const Connection& second,
                             const CurveGenerator& gen, double tol, const InvarianceOptions& options) {
  const auto curves = gen.generate();
  if (curves.empty()) throw Error(ErrorCode::InvalidArgument, "uniqueness check needs at least one curve");
  if (norm.dimension() != 2)
    throw Error(ErrorCode::Precondition, "uniqueness check requires a planar norm (discreteness test is 2x2)");
  const IsometryGroup group = isometry_group_2x2(norm.at({curves.front().position(0.0)}));
  if (group.continuous_family)
    throw Error(ErrorCode::Precondition,
                "isometry group of F_p contains a continuous family; compatible connections need not be unique");
  for (const Connection* c : {&first, &second}) {
    const CheckReport inv = check_holonomy_invariance(norm, *c, gen, tol, options);
    if (!inv.pass)
      throw Error(ErrorCode::Precondition, "a connection is not holonomy invariant for F (max rel error " +
                                               std::to_string(inv.max_rel_error) + ")");
  }
  CheckReport report;
  report.check = "uniqueness";
  report.tolerance = tol;
  report.seed = gen.seed;
  report.step = options.step;
  double worst = -1.0;
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const auto a = transport_matrices(first, curves[c], options.ts, options.step);
    const auto b = transport_matrices(second, curves[c], options.ts, options.step);
    for (std::size_t k = 0; k < a.size(); ++k) {
      const double err = max_abs(a[k] - b[k]);
      ++report.samples;
      report.max_abs_error = std::max(report.max_abs_error, err);
      if (err > worst) {
        worst = err;
        report.max_rel_error = err;
        report.witness.values = {{"curve_index", {static_cast<double>(c)}}, {"t", {options.ts[k]}}};
      }
    }
  }
  report.witness.values["isometry_count"] = {static_cast<double>(group.elements.size())};
  report.finalize();
  return report;
}

namespace {

std::string berwald_note(const NormField& norm, const Box& region, double torsion) {
  if (torsion <= 1e-9) return "Berwald: the compatible connection found is torsion-free";
  if (norm.dimension() == 2) {
    const IsometryGroup g = isometry_group_2x2(norm.at({region.center()}));
    if (!g.continuous_family) return "not Berwald: the compatible connection is unique and has torsion";
  }
  return "Berwald status undetermined: the synthesized connection has torsion and compatible connections "
         "are not unique";
}

Verdict finish(Verdict v, const NormField& norm, const Connection& conn, const Box& region) {
  v.torsion_max = berwald_obstruction(conn, grid_points(region, 5));
  v.certified = std::all_of(v.reports.begin(), v.reports.end(), [](const CheckReport& r) { return r.pass; });
  v.verdict = v.certified ? "generalized Berwald (certified)" : "not certified";
  if (v.certified) v.berwald_note = berwald_note(norm, region, v.torsion_max);
  return v;
}

}  // namespace

Verdict generalized_berwald_verdict(const NormField& norm, const CoveringParallelism& cover,
                                    const VerdictOptions& options) {
  Verdict v;
  const Box region = cover.region().clipped();
  for (std::size_t a = 0; a < cover.members().size(); ++a) {
    const auto& member = cover.members()[a];
    PairSampler pairs{options.seed + a, options.pairs, member.domain.intersect(region).shrunk(0.05), 20, {}};
    CheckReport r = check_parallelism_compat(norm, member.parallelism, pairs, options.tol);
    r.check = "parallelism_compat[" + std::to_string(a) + "]";
    v.reports.push_back(std::move(r));
  }
  const Connection conn = connection_from_covering_parallelism(cover);
  CurveGenerator gen{options.seed, CurveFamily::Mixed, options.curves, region.shrunk(0.1), {}};
  v.reports.push_back(check_holonomy_invariance(norm, conn, gen, options.tol, options.invariance));
  return finish(std::move(v), norm, conn, region.shrunk(0.1));
}

Verdict generalized_berwald_verdict(const NormField& norm, const Connection& conn, const Box& region_in,
                                    const VerdictOptions& options) {
  Verdict v;
  const Box region = region_in.clipped();
  CurveGenerator gen{options.seed, CurveFamily::Mixed, options.curves, region.shrunk(0.1), {}};
  v.reports.push_back(check_holonomy_invariance(norm, conn, gen, options.tol, options.invariance));
  const CoveringParallelism cover = covering_from_connection(conn, region, options.cells_per_axis,
                                                             options.invariance.step);
  for (std::size_t a = 0; a < cover.members().size(); ++a) {
    const auto& member = cover.members()[a];
    PairSampler pairs{options.seed + a, options.pairs, member.domain.intersect(region).shrunk(0.05), 20, {}};
    CheckReport r = check_parallelism_compat(norm, member.parallelism, pairs, options.tol);
    r.check = "parallelism_compat[" + std::to_string(a) + "]";
    v.reports.push_back(std::move(r));
  }
  return finish(std::move(v), norm, conn, region.shrunk(0.1));
}

}  // namespace holo
