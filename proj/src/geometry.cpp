#include "holo/geometry.hpp"

#include <cmath>
#include <numbers>

namespace holo {

namespace {

bool has_partials(JetArgs x) {
  for (const Jet& j : x)
    for (double d : j.d)
      if (d != 0.0) return true;
  return false;
}

Vector values_of(JetArgs x) {
  Vector p(static_cast<int>(x.size()));
  for (int i = 0; i < p.size(); ++i) p[i] = x[static_cast<std::size_t>(i)].value;
  return p;
}

std::vector<Jet> constant_jets(const Vector& p) {
  std::vector<Jet> x(static_cast<std::size_t>(p.size()));
  for (int i = 0; i < p.size(); ++i) x[static_cast<std::size_t>(i)] = Jet(p[i]);
  return x;
}

std::vector<Jet> variable_jets(const Vector& p) {
  std::vector<Jet> x(static_cast<std::size_t>(p.size()));
  for (int i = 0; i < p.size(); ++i) x[static_cast<std::size_t>(i)] = Jet::variable(p[i], i);
  return x;
}

// Pushes known partials d(out_i)/dx^m through input jets x^m.
Jet compose(double value, const Vector& partials, JetArgs x) {
  Jet r(value);
  for (int m = 0; m < partials.size(); ++m) {
    const Jet& xm = x[static_cast<std::size_t>(m)];
    for (int k = 0; k < kMaxDim; ++k) r.d[k] += partials[m] * xm.d[k];
  }
  return r;
}

void require_inside(const Box& domain, const Vector& p) {
  if (!domain.contains(p)) throw Error(ErrorCode::OutsideDomain, "point outside the chart domain");
}

}  // namespace

TangentVector TangentVector::operator+(const TangentVector& other) const {
  if (base.coords != other.base.coords)
    throw Error(ErrorCode::InvalidArgument, "tangent vectors at different base points");
  return {base, components + other.components};
}

TangentVector TangentVector::operator-(const TangentVector& other) const { return *this + other * -1.0; }

ScalarField::ScalarField(int n, Fn fn) : n_(n), fn_(std::move(fn)) { check_dimension(n); }

ScalarField ScalarField::constant(int n, double c) {
  return ScalarField(n, [c](JetArgs) { return Jet(c); });
}

ScalarField ScalarField::coordinate(int n, int i) {
  return ScalarField(n, [i](JetArgs x) { return x[static_cast<std::size_t>(i)]; });
}

double ScalarField::value(const Vector& p) const { return fn_(constant_jets(p)).value; }

Vector ScalarField::gradient(const Vector& p) const {
  const Jet j = fn_(variable_jets(p));
  Vector g(n_);
  for (int i = 0; i < n_; ++i) g[i] = j.d[i];
  return g;
}

VectorField::VectorField(int n, Fn fn, Box domain) : n_(n), fn_(std::move(fn)), domain_(std::move(domain)) {
  check_dimension(n);
}

VectorField VectorField::constant(const Vector& c) {
  return VectorField(static_cast<int>(c.size()), [c](JetArgs) {
    std::vector<Jet> out(static_cast<std::size_t>(c.size()));
    for (int i = 0; i < c.size(); ++i) out[static_cast<std::size_t>(i)] = Jet(c[i]);
    return out;
  });
}

VectorField VectorField::coordinate(int n, int i) { return constant(Vector::Unit(n, i)); }

VectorField VectorField::linear(const Matrix& a) {
  const int n = static_cast<int>(a.rows());
  return VectorField(n, [a, n](JetArgs x) {
    std::vector<Jet> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(i)] += Jet(a(i, j)) * x[static_cast<std::size_t>(j)];
    return out;
  });
}

VectorField VectorField::numeric(int n, std::function<Vector(const Vector&)> values, Box domain, double h) {
  return VectorField(
      n,
      [n, values = std::move(values), h](JetArgs x) {
        const Vector p = values_of(x);
        const Vector v = values(p);
        std::vector<Jet> out(static_cast<std::size_t>(n));
        if (!has_partials(x)) {
          for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = Jet(v[i]);
          return out;
        }
        Matrix jac(n, n);
        for (int m = 0; m < n; ++m) {
          const Vector e = Vector::Unit(n, m) * h;
          jac.col(m) = (-values(p + 2 * e) + 8 * values(p + e) - 8 * values(p - e) + values(p - 2 * e)) / (12 * h);
        }
        for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = compose(v[i], jac.row(i).transpose(), x);
        return out;
      },
      std::move(domain));
}

std::vector<Jet> VectorField::evaluate(JetArgs x) const {
  if (static_cast<int>(x.size()) != n_) throw Error(ErrorCode::InvalidArgument, "dimension mismatch");
  require_inside(domain_, values_of(x));
  return fn_(x);
}

Vector VectorField::value(const Vector& p) const { return values_of(evaluate(constant_jets(p))); }

VectorField VectorField::operator+(const VectorField& other) const {
  auto a = fn_;
  auto b = other.fn_;
  return VectorField(
      n_,
      [a, b](JetArgs x) {
        auto r = a(x);
        const auto s = b(x);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] += s[i];
        return r;
      },
      domain_.intersect(other.domain_));
}

VectorField VectorField::operator*(double s) const {
  auto a = fn_;
  return VectorField(
      n_,
      [a, s](JetArgs x) {
        auto r = a(x);
        for (auto& c : r) c *= Jet(s);
        return r;
      },
      domain_);
}

VectorField operator*(const ScalarField& f, const VectorField& x) {
  auto a = x.fn_;
  return VectorField(
      x.n_,
      [f, a](JetArgs args) {
        auto r = a(args);
        const Jet s = f.evaluate(args);
        for (auto& c : r) c *= s;
        return r;
      },
      x.domain_);
}

FieldJet jet_eval(const VectorField& field, const ChartPoint& p) {
  const int n = field.dimension();
  if (p.dimension() != n) throw Error(ErrorCode::InvalidArgument, "dimension mismatch");
  const auto out = field.evaluate(variable_jets(p.coords));
  FieldJet r{Vector(n), Matrix(n, n)};
  for (int i = 0; i < n; ++i) {
    r.components[i] = out[static_cast<std::size_t>(i)].value;
    for (int j = 0; j < n; ++j) r.jacobian(i, j) = out[static_cast<std::size_t>(i)].d[j];
  }
  return r;
}

VectorField lie_bracket(const VectorField& x, const VectorField& y) {
  if (x.dimension() != y.dimension()) throw Error(ErrorCode::InvalidArgument, "dimension mismatch");
  const Box domain = x.domain().intersect(y.domain());
  auto bracket = [x, y](const Vector& p) -> Vector {
    const FieldJet jx = jet_eval(x, {p});
    const FieldJet jy = jet_eval(y, {p});
    return jy.jacobian * jx.components - jx.jacobian * jy.components;
  };
  return VectorField::numeric(x.dimension(), bracket, domain);
}

MatrixField::MatrixField(int n, Box domain, ValueFn value, JetFn jet)
    : n_(n), domain_(std::move(domain)), value_(std::move(value)), jet_(std::move(jet)) {
  check_dimension(n);
}

MatrixField MatrixField::numeric(int n, Box domain, ValueFn value, double h) {
  auto jet = [n, value, h](const Vector& p) {
    MatrixJet j;
    j.value = value(p);
    for (int m = 0; m < n; ++m) {
      const Vector e = Vector::Unit(n, m) * h;
      j.partial[static_cast<std::size_t>(m)] = (value(p + e) - value(p - e)) / (2 * h);
    }
    return j;
  };
  return MatrixField(n, std::move(domain), std::move(value), std::move(jet));
}

Matrix MatrixField::value(const Vector& p) const {
  require_inside(domain_, p);
  return value_(p);
}

MatrixJet MatrixField::jet(const Vector& p) const {
  require_inside(domain_, p);
  return jet_(p);
}

Frame::Frame(std::vector<VectorField> fields)
    : matrix_(
          [&fields] {
            if (fields.empty()) throw Error(ErrorCode::InvalidArgument, "empty frame");
            const int n = fields.front().dimension();
            if (static_cast<int>(fields.size()) != n)
              throw Error(ErrorCode::InvalidArgument, "a frame needs exactly n fields");
            Box domain = fields.front().domain();
            for (const auto& f : fields) {
              if (f.dimension() != n) throw Error(ErrorCode::InvalidArgument, "dimension mismatch");
              domain = domain.intersect(f.domain());
            }
            auto value = [fields, n](const Vector& p) {
              Matrix m(n, n);
              for (int k = 0; k < n; ++k) m.col(k) = fields[static_cast<std::size_t>(k)].value(p);
              return m;
            };
            auto jet = [fields, n](const Vector& p) {
              MatrixJet j;
              j.value = Matrix(n, n);
              for (int m = 0; m < n; ++m) j.partial[static_cast<std::size_t>(m)] = Matrix::Zero(n, n);
              for (int k = 0; k < n; ++k) {
                const FieldJet fj = jet_eval(fields[static_cast<std::size_t>(k)], {p});
                j.value.col(k) = fj.components;
                for (int m = 0; m < n; ++m) j.partial[static_cast<std::size_t>(m)].col(k) = fj.jacobian.col(m);
              }
              return j;
            };
            return MatrixField(n, domain, value, jet);
          }()) {}

Frame::Frame(MatrixField matrix) : matrix_(std::move(matrix)) {}

Frame Frame::coordinate(int n) {
  auto value = [n](const Vector&) { return Matrix(Matrix::Identity(n, n)); };
  auto jet = [n](const Vector&) {
    MatrixJet j;
    j.value = Matrix::Identity(n, n);
    for (int m = 0; m < n; ++m) j.partial[static_cast<std::size_t>(m)] = Matrix::Zero(n, n);
    return j;
  };
  return Frame(MatrixField(n, Box::whole(n), value, jet));
}

Matrix Frame::matrix(const ChartPoint& p) const {
  Matrix m = matrix_.value(p.coords);
  if (!(std::abs(m.determinant()) > kSingularDet))
    throw Error(ErrorCode::SingularMatrix, "frame matrix is singular (|det| <= 1e-12)");
  return m;
}

MatrixJet Frame::jet(const ChartPoint& p) const {
  MatrixJet j = matrix_.jet(p.coords);
  if (!(std::abs(j.value.determinant()) > kSingularDet))
    throw Error(ErrorCode::SingularMatrix, "frame matrix is singular (|det| <= 1e-12)");
  return j;
}

VectorField Frame::field(int k) const {
  const int n = dimension();
  if (k < 0 || k >= n) throw Error(ErrorCode::InvalidArgument, "frame index out of range");
  auto mf = matrix_;
  return VectorField(
      n,
      [mf, k, n](JetArgs x) {
        const Vector p = values_of(x);
        std::vector<Jet> out(static_cast<std::size_t>(n));
        if (!has_partials(x)) {
          const Vector c = mf.value(p).col(k);
          for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = Jet(c[i]);
          return out;
        }
        const MatrixJet j = mf.jet(p);
        for (int i = 0; i < n; ++i) {
          Vector partials(n);
          for (int m = 0; m < n; ++m) partials[m] = j.partial[static_cast<std::size_t>(m)](i, k);
          out[static_cast<std::size_t>(i)] = compose(j.value(i, k), partials, x);
        }
        return out;
      },
      matrix_.domain());
}

Matrix Coframe::matrix(const ChartPoint& p) const { return frame_.matrix(p).inverse(); }

Vector Coframe::form(int i, const ChartPoint& p) const { return matrix(p).row(i).transpose(); }

double Coframe::apply(int i, const TangentVector& v) const { return form(i, v.base).dot(v.components); }

Coframe dual_coframe(const Frame& frame) { return Coframe(frame); }

Curve::Curve(int n, Fn fn, std::string family) : n_(n), fn_(std::move(fn)), family_(std::move(family)) {
  check_dimension(n);
}

Curve Curve::segment(const Vector& from, const Vector& to) {
  const int n = static_cast<int>(from.size());
  return Curve(
      n,
      [from, to, n](const Jet& t) {
        std::vector<Jet> out(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = Jet(from[i]) + t * Jet(to[i] - from[i]);
        return out;
      },
      "segment");
}

Curve Curve::circle(const Vector& center, const Vector& u, const Vector& w, double radius, double start,
                    double sweep) {
  const int n = static_cast<int>(center.size());
  return Curve(
      n,
      [=](const Jet& t) {
        const Jet angle = Jet(start) + Jet(sweep) * t;
        const Jet c = cos(angle) * Jet(radius);
        const Jet s = sin(angle) * Jet(radius);
        std::vector<Jet> out(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = Jet(center[i]) + c * Jet(u[i]) + s * Jet(w[i]);
        return out;
      },
      "circle");
}

Curve Curve::sinusoid(const Vector& from, const Vector& to, const Vector& normal, double amplitude, int waves) {
  const int n = static_cast<int>(from.size());
  return Curve(
      n,
      [=](const Jet& t) {
        const Jet bump = sin(Jet(std::numbers::pi * waves) * t) * Jet(amplitude);
        std::vector<Jet> out(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
          out[static_cast<std::size_t>(i)] = Jet(from[i]) + t * Jet(to[i] - from[i]) + bump * Jet(normal[i]);
        return out;
      },
      "sinusoid");
}

Curve Curve::bezier(const std::array<Vector, 4>& control) {
  const int n = static_cast<int>(control[0].size());
  return Curve(
      n,
      [control, n](const Jet& t) {
        const Jet s = Jet(1.0) - t;
        const std::array<Jet, 4> basis{s * s * s, Jet(3.0) * s * s * t, Jet(3.0) * s * t * t, t * t * t};
        std::vector<Jet> out(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
          for (std::size_t k = 0; k < 4; ++k) out[static_cast<std::size_t>(i)] += basis[k] * Jet(control[k][i]);
        return out;
      },
      "bezier");
}

Vector Curve::position(double t) const {
  const auto out = fn_(Jet(t));
  Vector p(n_);
  for (int i = 0; i < n_; ++i) p[i] = out[static_cast<std::size_t>(i)].value;
  return p;
}

Vector Curve::velocity(double t) const {
  const auto out = fn_(Jet::variable(t, 0));
  Vector v(n_);
  for (int i = 0; i < n_; ++i) v[i] = out[static_cast<std::size_t>(i)].d[0];
  return v;
}

Curve Curve::restricted(double t0, double t1) const {
  auto f = fn_;
  return Curve(n_, [f, t0, t1](const Jet& t) { return f(Jet(t0) + Jet(t1 - t0) * t); }, family_);
}

Curve Curve::followed_by(const Curve& next) const {
  auto f = fn_;
  auto g = next.fn_;
  return Curve(
      n_,
      [f, g](const Jet& t) {
        // u - sin(2 pi u) / (2 pi) has zero first and second derivative at
        // u = 0, 1, so the joined curve is C^2 in t and fixed-step
        // integrators keep their order across the junction.
        const auto ease = [](const Jet& u) {
          constexpr double two_pi = 2.0 * std::numbers::pi;
          return u - sin(two_pi * u) / two_pi;
        };
        if (t.value <= 0.5) return f(ease(Jet(2.0) * t));
        return g(ease(Jet(2.0) * t - Jet(1.0)));
      },
      family_ + "+" + next.family_);
}

}  // namespace holo
