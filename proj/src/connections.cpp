#include "holo/connections.hpp"

#include <cmath>

namespace holo {

Matrix Christoffel::slice(int j) const {
  Matrix m(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int k = 0; k < n_; ++k) m(i, k) = (*this)(i, j, k);
  return m;
}

void Christoffel::set_slice(int j, const Matrix& m) {
  for (int i = 0; i < n_; ++i)
    for (int k = 0; k < n_; ++k) (*this)(i, j, k) = m(i, k);
}

Christoffel& Christoffel::operator+=(const Christoffel& other) {
  for (std::size_t i = 0; i < g_.size(); ++i) g_[i] += other.g_[i];
  return *this;
}

Christoffel Christoffel::operator*(double s) const {
  Christoffel r = *this;
  for (auto& x : r.g_) x *= s;
  return r;
}

double Christoffel::max_abs() const {
  double m = 0.0;
  for (double x : g_) m = std::max(m, std::abs(x));
  return m;
}

Connection::Connection(Frame frame, SymbolsFn symbols, Box domain)
    : frame_(std::move(frame)), symbols_(std::move(symbols)), domain_(std::move(domain)) {}

Connection Connection::flat(int n) {
  return coordinate(n, [n](const Vector&) { return Christoffel(n); }, Box::whole(n));
}

Connection Connection::frame_flat(const Frame& frame) {
  const int n = frame.dimension();
  return Connection(frame, [n](const Vector&) { return Christoffel(n); }, frame.domain());
}

Connection Connection::coordinate(int n, SymbolsFn symbols, Box domain) {
  Connection c(Frame::coordinate(n), std::move(symbols), std::move(domain));
  c.coordinate_frame_ = true;
  return c;
}

Christoffel Connection::symbols(const ChartPoint& p) const {
  if (!domain_.contains(p.coords)) throw Error(ErrorCode::OutsideDomain, "point outside the connection's domain");
  return symbols_(p.coords);
}

Christoffel Connection::coordinate_symbols(const ChartPoint& p) const {
  if (coordinate_frame_) return symbols(p);
  return to_coordinate_symbols(frame_.jet(p), symbols(p));
}

Vector Connection::covariant_derivative(const VectorField& x, const VectorField& y, const ChartPoint& p) const {
  const FieldJet jx = jet_eval(x, p);
  const FieldJet jy = jet_eval(y, p);
  const Christoffel c = coordinate_symbols(p);
  Vector r = jy.jacobian * jx.components;
  for (int a = 0; a < dimension(); ++a) r += jx.components[a] * (c.slice(a) * jy.components);
  return r;
}

// C_a = sum_j Einv(j, a) E Gamma_j Einv - (d_a E) Einv.
Christoffel to_coordinate_symbols(const MatrixJet& frame, const Christoffel& gamma) {
  const int n = gamma.dimension();
  const Matrix& e = frame.value;
  const Matrix einv = e.inverse();
  std::array<Matrix, kMaxDim> transported;
  for (int j = 0; j < n; ++j) transported[static_cast<std::size_t>(j)] = e * gamma.slice(j) * einv;
  Christoffel out(n);
  for (int a = 0; a < n; ++a) {
    Matrix ca = -frame.partial[static_cast<std::size_t>(a)] * einv;
    for (int j = 0; j < n; ++j) ca += einv(j, a) * transported[static_cast<std::size_t>(j)];
    out.set_slice(a, ca);
  }
  return out;
}

// Gamma_j = Binv sum_a B(a, j) (d_a B + C_a B).
Christoffel from_coordinate_symbols(const MatrixJet& frame, const Christoffel& coordinate) {
  const int n = coordinate.dimension();
  const Matrix& b = frame.value;
  const Matrix binv = b.inverse();
  std::array<Matrix, kMaxDim> moved;
  for (int a = 0; a < n; ++a)
    moved[static_cast<std::size_t>(a)] = frame.partial[static_cast<std::size_t>(a)] + coordinate.slice(a) * b;
  Christoffel out(n);
  for (int j = 0; j < n; ++j) {
    Matrix sum = Matrix::Zero(n, n);
    for (int a = 0; a < n; ++a) sum += b(a, j) * moved[static_cast<std::size_t>(a)];
    out.set_slice(j, binv * sum);
  }
  return out;
}

Christoffel christoffels_in_frame(const Connection& conn, const Frame& new_frame, const ChartPoint& p) {
  return from_coordinate_symbols(new_frame.jet(p), conn.coordinate_symbols(p));
}

Connection blend_connections(const std::vector<Connection>& members, const std::vector<WeightFn>& weights,
                             Box domain) {
  if (members.empty() || members.size() != weights.size())
    throw Error(ErrorCode::InvalidArgument, "blend needs one weight per connection");
  const int n = members.front().dimension();
  return Connection::coordinate(
      n,
      [members, weights, n](const Vector& p) {
        Christoffel sum(n);
        for (std::size_t a = 0; a < members.size(); ++a) {
          const double w = weights[a](p);
          if (w == 0.0) continue;
          sum += members[a].coordinate_symbols({p}) * w;
        }
        return sum;
      },
      std::move(domain));
}

Endomorphism nabla_P(const Connection& conn, const Parallelism& parallelism, const TangentVector& v) {
  const int n = conn.dimension();
  const Frame frame = parallelism.parallel_frame();
  const Christoffel gamma = christoffels_in_frame(conn, frame, v.base);
  const Matrix e = frame.matrix(v.base);
  const Matrix einv = e.inverse();
  const Vector vf = einv * v.components;
  Matrix sum = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) sum += vf[j] * gamma.slice(j);
  return Endomorphism{v.base, e * sum * einv};
}

TangentVector torsion(const Connection& conn, const VectorField& x, const VectorField& y, const ChartPoint& p) {
  const Vector xy = conn.covariant_derivative(x, y, p);
  const Vector yx = conn.covariant_derivative(y, x, p);
  const Vector bracket = lie_bracket(x, y).value(p.coords);
  return TangentVector{p, xy - yx - bracket};
}

}  // namespace holo
