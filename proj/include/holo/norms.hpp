#pragma once

// Definite continuous functions on R^n and on tangent spaces, Randers norms,
// linear isometries and Lie-algebra membership.

#include <functional>
#include <optional>
#include <vector>

#include "holo/core.hpp"
#include "holo/expression.hpp"
#include "holo/geometry.hpp"

namespace holo {

enum class NormKind { Randers, Custom };

// f(v) = sqrt(v^T Q v) + beta . v
struct RandersData {
  Matrix q;
  Vector beta;
};

class MinkowskiNorm {
 public:
  using Fn = std::function<double(const Vector&)>;
  using GradientFn = std::function<Vector(const Vector&)>;

  MinkowskiNorm(int n, Fn f, GradientFn gradient, NormKind kind);

  static MinkowskiNorm euclidean(int n);
  // Expression in the component names a, b, c, d.
  static MinkowskiNorm from_expression(int n, const Expression& expr);

  int dimension() const { return n_; }
  NormKind kind() const { return kind_; }
  double operator()(const Vector& v) const { return f_(v); }
  bool has_gradient() const { return static_cast<bool>(gradient_); }
  Vector gradient(const Vector& v) const;
  const std::optional<RandersData>& randers() const { return randers_; }

 private:
  friend MinkowskiNorm randers_norm(const RandersData& data);
  int n_;
  Fn f_;
  GradientFn gradient_;
  NormKind kind_;
  std::optional<RandersData> randers_;
};

// Rejects non-symmetric or non-positive Q and beta^T Q^-1 beta >= 1 (IndefiniteNorm).
MinkowskiNorm randers_norm(const RandersData& data);

// Component names used by expression norms.
std::vector<std::string> component_names(int n);

// Deterministic Euclidean-unit sample vectors: equally spaced angles for n = 2,
// a Fibonacci lattice for n = 3, and +-basis vectors plus lattice points otherwise.
std::vector<Vector> sphere_samples(int n, int count);

// f > 0 on sphere samples at radii 1e-3, 1, 1e3 and f(0) == 0.
bool is_definite(const MinkowskiNorm& f, const std::vector<Vector>& samples);

struct IsometryCheck {
  bool is_isometry = false;
  double max_deviation = 0.0;
};

inline constexpr double kIsometryTolerance = 1e-9;
inline constexpr double kDerivedIsometryTolerance = 1e-7;

IsometryCheck is_isometry(const MinkowskiNorm& f, const Matrix& a, const std::vector<Vector>& samples,
                          double tol = kIsometryTolerance);

struct IsometryGroup {
  std::vector<Matrix> elements;
  bool continuous_family = false;
};

// Linear isometries of a planar norm: each column is located from the two
// constraints f(A e_k) = f(e_k), f(-A e_k) = f(-e_k) by radius and angle
// bisection, then candidate matrices are certified on 720 unit vectors.
IsometryGroup isometry_group_2x2(const MinkowskiNorm& f);

struct LieAlgebraCheck {
  bool member = false;
  double max_violation = 0.0;
  double tolerance = 0.0;
  bool used_secant = false;
};

inline constexpr double kLieAlgebraTolerance = 1e-8;
inline constexpr double kSecantTolerance = 1e-6;

// Gradient test <grad f(v), A v> = 0 on sample vectors when f has a finite
// gradient there, otherwise the secant test |f(exp(tA)v) - f(v)| / |t| over
// t in {+-1e-4, +-1e-2} with the widened tolerance.
LieAlgebraCheck lie_algebra_member(const MinkowskiNorm& f, const Matrix& a, const std::vector<Vector>& samples = {});
LieAlgebraCheck lie_algebra_member_secant(const MinkowskiNorm& f, const Matrix& a,
                                          const std::vector<Vector>& samples = {});

// F on the tangent bundle: F(p, v) with v in coordinate components at p.
class NormField {
 public:
  using Fn = std::function<double(const Vector& p, const Vector& v)>;
  using GradientFn = std::function<Vector(const Vector& p, const Vector& v)>;

  NormField(int n, Fn f, GradientFn gradient = {});

  // Same norm on every tangent space in coordinate components.
  static NormField uniform(const MinkowskiNorm& f);

  int dimension() const { return n_; }
  double operator()(const Vector& p, const Vector& v) const { return f_(p, v); }
  double operator()(const TangentVector& v) const { return f_(v.base.coords, v.components); }
  bool has_gradient() const { return static_cast<bool>(gradient_); }
  Vector gradient(const Vector& p, const Vector& v) const;
  // F_p as a norm on coordinate components.
  MinkowskiNorm at(const ChartPoint& p) const;

 private:
  int n_;
  Fn f_;
  GradientFn gradient_;
};

// F := f o (E^1, ..., E^n) for the coframe dual to `frame`.
NormField pullback_norm(const MinkowskiNorm& f, const Frame& frame);

// F_p := s(p) * G_p.
NormField scaled_norm(const NormField& g, const ScalarField& s);

}  // namespace holo
