#pragma once

// Points, tangent vectors, vector fields with exact first derivatives,
// frames, coframes, curves and the Lie bracket, all in one global chart.

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "holo/core.hpp"

namespace holo {

struct ChartPoint {
  Vector coords;
  int dimension() const { return static_cast<int>(coords.size()); }
};

struct TangentVector {
  ChartPoint base;
  Vector components;

  // Linear operations require equal base points; throws InvalidArgument otherwise.
  TangentVector operator+(const TangentVector& other) const;
  TangentVector operator-(const TangentVector& other) const;
  TangentVector operator*(double s) const { return {base, components * s}; }
};

using JetArgs = std::span<const Jet>;

class ScalarField {
 public:
  using Fn = std::function<Jet(JetArgs)>;
  ScalarField(int n, Fn fn);
  static ScalarField constant(int n, double c);
  static ScalarField coordinate(int n, int i);

  int dimension() const { return n_; }
  Jet evaluate(JetArgs x) const { return fn_(x); }
  double value(const Vector& p) const;
  Vector gradient(const Vector& p) const;

 private:
  int n_;
  Fn fn_;
};

// Value plus Jacobian of a vector field at a point; jacobian(i, j) = d(component i)/dx^j.
struct FieldJet {
  Vector components;
  Matrix jacobian;
};

class VectorField {
 public:
  using Fn = std::function<std::vector<Jet>(JetArgs)>;

  VectorField(int n, Fn fn, Box domain);
  VectorField(int n, Fn fn) : VectorField(n, std::move(fn), Box::whole(n)) {}

  static VectorField constant(const Vector& c);
  static VectorField coordinate(int n, int i);
  static VectorField linear(const Matrix& a);
  // Field known only through its values; partials come from a fourth-order
  // central difference stencil with step h.
  static VectorField numeric(int n, std::function<Vector(const Vector&)> values, Box domain, double h = 1e-3);

  int dimension() const { return n_; }
  const Box& domain() const { return domain_; }

  // Evaluates on arbitrary input jets (chain rule through the inputs).
  std::vector<Jet> evaluate(JetArgs x) const;
  Vector value(const Vector& p) const;

  VectorField operator+(const VectorField& other) const;
  VectorField operator*(double s) const;
  friend VectorField operator*(const ScalarField& f, const VectorField& x);

 private:
  int n_;
  Fn fn_;
  Box domain_;
};

FieldJet jet_eval(const VectorField& field, const ChartPoint& p);

// [X,Y]^i = X^j d_j Y^i - Y^j d_j X^i. Values are exact; partials of the
// result (needed only when it is bracketed again) use finite differences.
VectorField lie_bracket(const VectorField& x, const VectorField& y);

// Matrix-valued field with first derivatives; partial[m] = d/dx^m of value.
struct MatrixJet {
  Matrix value;
  std::array<Matrix, kMaxDim> partial;
};

class MatrixField {
 public:
  using ValueFn = std::function<Matrix(const Vector&)>;
  using JetFn = std::function<MatrixJet(const Vector&)>;

  MatrixField(int n, Box domain, ValueFn value, JetFn jet);
  // Central differences of step h (second order) for the partials.
  static MatrixField numeric(int n, Box domain, ValueFn value, double h = 1e-4);

  int dimension() const { return n_; }
  const Box& domain() const { return domain_; }
  Matrix value(const Vector& p) const;
  MatrixJet jet(const Vector& p) const;

 private:
  int n_;
  Box domain_;
  ValueFn value_;
  JetFn jet_;
};

// n vector fields; column k of matrix(p) holds the coordinate components of E_k(p).
class Frame {
 public:
  explicit Frame(std::vector<VectorField> fields);
  explicit Frame(MatrixField matrix);
  static Frame coordinate(int n);

  int dimension() const { return matrix_.dimension(); }
  const Box& domain() const { return matrix_.domain(); }
  // Throws SingularMatrix when |det| <= 1e-12 at p.
  Matrix matrix(const ChartPoint& p) const;
  MatrixJet jet(const ChartPoint& p) const;
  VectorField field(int k) const;
  const MatrixField& matrix_field() const { return matrix_; }

 private:
  MatrixField matrix_;
};

// Dual frame: row i of matrix(p) holds the components of E^i at p.
class Coframe {
 public:
  explicit Coframe(Frame frame) : frame_(std::move(frame)) {}
  int dimension() const { return frame_.dimension(); }
  Matrix matrix(const ChartPoint& p) const;
  Vector form(int i, const ChartPoint& p) const;
  double apply(int i, const TangentVector& v) const;

 private:
  Frame frame_;
};

Coframe dual_coframe(const Frame& frame);

class Curve {
 public:
  using Fn = std::function<std::vector<Jet>(const Jet& t)>;

  Curve(int n, Fn fn, std::string family);

  static Curve segment(const Vector& from, const Vector& to);
  // Circle arc in the plane spanned by orthonormal u, w.
  static Curve circle(const Vector& center, const Vector& u, const Vector& w, double radius, double start,
                      double sweep);
  // Segment from a to b displaced along `normal` by amplitude * sin(pi * waves * t).
  static Curve sinusoid(const Vector& from, const Vector& to, const Vector& normal, double amplitude, int waves);
  static Curve bezier(const std::array<Vector, 4>& control);

  int dimension() const { return n_; }
  const std::string& family() const { return family_; }
  Vector position(double t) const;
  Vector velocity(double t) const;
  // Reparametrizes [t0, t1] onto [0, 1].
  Curve restricted(double t0, double t1) const;
  // Runs this curve, then `next` (which must start where this one ends).
  // Each half is eased to rest at the junction.
  Curve followed_by(const Curve& next) const;

 private:
  int n_;
  Fn fn_;
  std::string family_;
};

}  // namespace holo
