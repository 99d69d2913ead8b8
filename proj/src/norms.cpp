#include "holo/norms.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace holo {

MinkowskiNorm::MinkowskiNorm(int n, Fn f, GradientFn gradient, NormKind kind)
    : n_(n), f_(std::move(f)), gradient_(std::move(gradient)), kind_(kind) {
  check_dimension(n);
}

MinkowskiNorm MinkowskiNorm::euclidean(int n) {
  return MinkowskiNorm(
      n, [](const Vector& v) { return v.norm(); },
      [](const Vector& v) {
        const double r = v.norm();
        return Vector(v / r);
      },
      NormKind::Custom);
}

std::vector<std::string> component_names(int n) {
  static const char* names[] = {"a", "b", "c", "d"};
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.emplace_back(names[i]);
  return out;
}

MinkowskiNorm MinkowskiNorm::from_expression(int n, const Expression& expr) {
  auto f = [expr, n](const Vector& v) {
    std::array<double, kMaxDim> args{};
    for (int i = 0; i < n; ++i) args[static_cast<std::size_t>(i)] = v[i];
    return expr.evaluate(std::span<const double>(args.data(), static_cast<std::size_t>(n)));
  };
  auto g = [expr, n](const Vector& v) {
    std::array<Jet, kMaxDim> args{};
    for (int i = 0; i < n; ++i) args[static_cast<std::size_t>(i)] = Jet::variable(v[i], i);
    const Jet j = expr.evaluate(std::span<const Jet>(args.data(), static_cast<std::size_t>(n)));
    Vector grad(n);
    for (int i = 0; i < n; ++i) grad[i] = j.d[i];
    return grad;
  };
  return MinkowskiNorm(n, f, g, NormKind::Custom);
}

Vector MinkowskiNorm::gradient(const Vector& v) const {
  if (!gradient_) throw Error(ErrorCode::InvalidArgument, "norm has no gradient");
  return gradient_(v);
}

MinkowskiNorm randers_norm(const RandersData& data) {
  const int n = static_cast<int>(data.q.rows());
  check_dimension(n);
  if (data.q.cols() != n || data.beta.size() != n)
    throw Error(ErrorCode::InvalidArgument, "Randers data has inconsistent shapes");
  if (max_abs(data.q - data.q.transpose()) > 1e-12)
    throw Error(ErrorCode::IndefiniteNorm, "Randers Q must be symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(data.q);
  if (!(eig.eigenvalues().minCoeff() > 0.0))
    throw Error(ErrorCode::IndefiniteNorm, "Randers Q must be positive definite");
  const double margin = data.beta.dot(data.q.inverse() * data.beta);
  if (!(margin < 1.0))
    throw Error(ErrorCode::IndefiniteNorm, "Randers one-form too large: beta^T Q^-1 beta >= 1");

  const Matrix q = data.q;
  const Vector beta = data.beta;
  MinkowskiNorm f(
      n, [q, beta](const Vector& v) { return std::sqrt(v.dot(q * v)) + beta.dot(v); },
      [q, beta](const Vector& v) {
        const Vector qv = q * v;
        return Vector(qv / std::sqrt(v.dot(qv)) + beta);
      },
      NormKind::Randers);
  f.randers_ = data;
  return f;
}

std::vector<Vector> sphere_samples(int n, int count) {
  check_dimension(n);
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(count));
  if (n == 1) {
    out.push_back(make_vector({1.0}));
    out.push_back(make_vector({-1.0}));
    return out;
  }
  if (n == 2) {
    for (int k = 0; k < count; ++k) {
      const double a = 2.0 * std::numbers::pi * k / count;
      out.push_back(make_vector({std::cos(a), std::sin(a)}));
    }
    return out;
  }
  for (int i = 0; i < n && static_cast<int>(out.size()) < count; ++i) {
    out.push_back(Vector::Unit(n, i));
    out.push_back(-Vector::Unit(n, i));
  }
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  const int remaining = std::max(0, count - static_cast<int>(out.size()));
  for (int k = 0; k < remaining; ++k) {
    const double z = 1.0 - 2.0 * (k + 0.5) / remaining;
    const double r = std::sqrt(1.0 - z * z);
    Vector v = Vector::Zero(n);
    v[0] = r * std::cos(golden * k);
    v[1] = r * std::sin(golden * k);
    v[2] = z;
    // Higher dimensions: rotate the extra weight into the remaining axes.
    for (int i = 3; i < n; ++i) v[i] = 0.5 * std::sin(golden * k * (i + 1));
    out.push_back(v / v.norm());
  }
  return out;
}

bool is_definite(const MinkowskiNorm& f, const std::vector<Vector>& samples) {
  if (f(Vector::Zero(f.dimension())) != 0.0) return false;
  for (double radius : {1e-3, 1.0, 1e3})
    for (const auto& v : samples)
      if (!(f(radius * v) > 0.0)) return false;
  return true;
}

IsometryCheck is_isometry(const MinkowskiNorm& f, const Matrix& a, const std::vector<Vector>& samples, double tol) {
  IsometryCheck r;
  for (const auto& v : samples) r.max_deviation = std::max(r.max_deviation, std::abs(f(a * v) - f(v)));
  // Elements of iso(f) are invertible; a singular map sends some direction to 0.
  const bool singular = !(std::abs(a.determinant()) > kSingularDet);
  r.is_isometry = !singular && r.max_deviation <= tol;
  if (singular) r.max_deviation = std::max(r.max_deviation, f(samples.front()));
  return r;
}

namespace {

constexpr int kGrid = 720;

Vector direction(double angle) { return make_vector({std::cos(angle), std::sin(angle)}); }

// Smallest radius r with f(r u) = target, by bracketing and bisection.
double radius_for(const MinkowskiNorm& f, const Vector& u, double target) {
  double lo = 0.0;
  double hi = 1.0;
  int grow = 0;
  while (f(hi * u) < target) {
    lo = hi;
    hi *= 2.0;
    if (++grow > 200) return std::numeric_limits<double>::quiet_NaN();
  }
  for (int i = 0; i < 200 && hi - lo > 1e-16 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid * u) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct ColumnProblem {
  const MinkowskiNorm& f;
  double plus;   // f(e_k)
  double minus;  // f(-e_k)

  Vector column(double angle) const { return radius_for(f, direction(angle), plus) * direction(angle); }
  double residual(double angle) const {
    const Vector c = column(angle);
    return f(-c) - minus;
  }
};

double bisect_root(const std::function<double(double)>& g, double lo, double hi) {
  double glo = g(lo);
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if ((gm < 0) == (glo < 0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct ColumnSolutions {
  std::vector<Vector> columns;
  bool continuous = false;
};

ColumnSolutions solve_column(const ColumnProblem& prob) {
  const double step = 2.0 * std::numbers::pi / kGrid;
  std::vector<double> h(kGrid);
  for (int k = 0; k < kGrid; ++k) h[static_cast<std::size_t>(k)] = prob.residual(k * step);

  const double scale = std::max(1.0, std::abs(prob.minus));
  const double flat_tol = 1e-9 * scale;
  const double accept_tol = 1e-10 * scale;
  auto at = [&](int k) { return h[static_cast<std::size_t>((k % kGrid + kGrid) % kGrid)]; };

  ColumnSolutions out;
  for (int k = 0; k < kGrid; ++k)
    if (std::abs(at(k)) <= flat_tol && std::abs(at(k + 1)) <= flat_tol && std::abs(at(k + 2)) <= flat_tol) {
      out.continuous = true;
      return out;
    }

  std::vector<double> angles;
  auto residual = [&](double a) { return prob.residual(a); };
  for (int k = 0; k < kGrid; ++k) {
    const double a0 = k * step;
    const double h0 = at(k), h1 = at(k + 1);
    if (h0 == 0.0) {
      angles.push_back(a0);
    } else if (h0 * h1 < 0.0) {
      angles.push_back(bisect_root(residual, a0, a0 + step));
    } else if (std::abs(h0) <= std::abs(at(k - 1)) && std::abs(h0) <= std::abs(h1)) {
      // Touching root: bisect on the sign of the residual's slope.
      const double d = 1e-6;
      auto slope = [&](double a) { return prob.residual(a + d) - prob.residual(a - d); };
      const double lo = a0 - step, hi = a0 + step;
      double a = a0;
      if (slope(lo) * slope(hi) < 0.0) a = bisect_root(slope, lo, hi);
      if (std::abs(prob.residual(a)) <= accept_tol) angles.push_back(a);
    }
  }
  for (double a : angles) {
    const Vector c = prob.column(a);
    const bool dup = std::any_of(out.columns.begin(), out.columns.end(),
                                 [&](const Vector& o) { return (o - c).norm() < 1e-6; });
    if (!dup && c.allFinite()) out.columns.push_back(c);
  }
  return out;
}

}  // namespace

IsometryGroup isometry_group_2x2(const MinkowskiNorm& f) {
  if (f.dimension() != 2) throw Error(ErrorCode::InvalidArgument, "isometry_group_2x2 needs a planar norm");
  IsometryGroup group;
  std::array<ColumnSolutions, 2> cols;
  for (int k = 0; k < 2; ++k) {
    const Vector e = Vector::Unit(2, k);
    cols[static_cast<std::size_t>(k)] = solve_column(ColumnProblem{f, f(e), f(-e)});
    if (cols[static_cast<std::size_t>(k)].continuous) {
      group.continuous_family = true;
      return group;
    }
  }
  const auto samples = sphere_samples(2, kGrid);
  const double scale = std::max({1.0, f(Vector::Unit(2, 0)), f(Vector::Unit(2, 1))});
  for (const auto& c0 : cols[0].columns)
    for (const auto& c1 : cols[1].columns) {
      Matrix a(2, 2);
      a.col(0) = c0;
      a.col(1) = c1;
      if (is_isometry(f, a, samples, 1e-8 * scale).is_isometry) group.elements.push_back(a);
    }
  std::sort(group.elements.begin(), group.elements.end(), [](const Matrix& x, const Matrix& y) {
    // Identity-like (larger trace) first, then lexicographic.
    if (std::abs(x.trace() - y.trace()) > 1e-9) return x.trace() > y.trace();
    for (int i = 0; i < 4; ++i)
      if (std::abs(x(i / 2, i % 2) - y(i / 2, i % 2)) > 1e-9) return x(i / 2, i % 2) < y(i / 2, i % 2);
    return false;
  });
  return group;
}

LieAlgebraCheck lie_algebra_member_secant(const MinkowskiNorm& f, const Matrix& a,
                                          const std::vector<Vector>& samples_in) {
  const auto samples = samples_in.empty() ? sphere_samples(f.dimension(), 360) : samples_in;
  LieAlgebraCheck r;
  r.used_secant = true;
  r.tolerance = kSecantTolerance;
  for (double t : {1e-4, -1e-4, 1e-2, -1e-2}) {
    const Matrix g = (t * a).exp();
    for (const auto& v : samples) r.max_violation = std::max(r.max_violation, std::abs(f(g * v) - f(v)) / std::abs(t));
  }
  r.member = r.max_violation <= r.tolerance;
  return r;
}

LieAlgebraCheck lie_algebra_member(const MinkowskiNorm& f, const Matrix& a, const std::vector<Vector>& samples_in) {
  const auto samples = samples_in.empty() ? sphere_samples(f.dimension(), 360) : samples_in;
  if (!f.has_gradient()) return lie_algebra_member_secant(f, a, samples);
  LieAlgebraCheck r;
  r.tolerance = kLieAlgebraTolerance;
  for (const auto& v : samples) {
    const Vector g = f.gradient(v);
    if (!g.allFinite()) return lie_algebra_member_secant(f, a, samples);
    r.max_violation = std::max(r.max_violation, std::abs(g.dot(a * v)));
  }
  r.member = r.max_violation <= r.tolerance;
  return r;
}

NormField::NormField(int n, Fn f, GradientFn gradient) : n_(n), f_(std::move(f)), gradient_(std::move(gradient)) {
  check_dimension(n);
}

NormField NormField::uniform(const MinkowskiNorm& f) {
  NormField::GradientFn grad;
  if (f.has_gradient()) grad = [f](const Vector&, const Vector& v) { return f.gradient(v); };
  return NormField(
      f.dimension(), [f](const Vector&, const Vector& v) { return f(v); }, grad);
}

MinkowskiNorm NormField::at(const ChartPoint& p) const {
  const Vector base = p.coords;
  auto f = f_;
  MinkowskiNorm::GradientFn g;
  if (gradient_) {
    auto grad = gradient_;
    g = [grad, base](const Vector& v) { return grad(base, v); };
  }
  return MinkowskiNorm(
      n_, [f, base](const Vector& v) { return f(base, v); }, g, NormKind::Custom);
}

NormField pullback_norm(const MinkowskiNorm& f, const Frame& frame) {
  const Coframe coframe = dual_coframe(frame);
  NormField::GradientFn grad;
  if (f.has_gradient())
    grad = [f, coframe](const Vector& p, const Vector& v) {
      const Matrix inv = coframe.matrix({p});
      return Vector(inv.transpose() * f.gradient(inv * v));
    };
  return NormField(
      f.dimension(), [f, coframe](const Vector& p, const Vector& v) { return f(coframe.matrix({p}) * v); }, grad);
}

Vector NormField::gradient(const Vector& p, const Vector& v) const {
  if (!gradient_) throw Error(ErrorCode::InvalidArgument, "norm field has no gradient");
  return gradient_(p, v);
}

NormField scaled_norm(const NormField& g, const ScalarField& s) {
  NormField::GradientFn grad;
  if (g.has_gradient()) grad = [g, s](const Vector& p, const Vector& v) { return Vector(s.value(p) * g.gradient(p, v)); };
  return NormField(
      g.dimension(), [g, s](const Vector& p, const Vector& v) { return s.value(p) * g(p, v); }, grad);
}

}  // namespace holo
