#pragma once

// Covariant derivatives given by Christoffel symbols relative to a frame,
// frame changes, torsion and the endomorphism (nabla P)_v.

#include <functional>
#include <vector>

#include "holo/geometry.hpp"
#include "holo/parallelism.hpp"

namespace holo {

// Gamma^i_{jk}, with nabla_{E_j} E_k = Gamma^i_{jk} E_i.
class Christoffel {
 public:
  explicit Christoffel(int n) : n_(n) { check_dimension(n); }

  int dimension() const { return n_; }
  double& operator()(int i, int j, int k) { return g_[index(i, j, k)]; }
  double operator()(int i, int j, int k) const { return g_[index(i, j, k)]; }

  // Matrix (i, k) -> Gamma^i_{jk} for a fixed lower index j.
  Matrix slice(int j) const;
  void set_slice(int j, const Matrix& m);

  Christoffel& operator+=(const Christoffel& other);
  Christoffel operator*(double s) const;
  double max_abs() const;

 private:
  static std::size_t index(int i, int j, int k) {
    return static_cast<std::size_t>((i * kMaxDim + j) * kMaxDim + k);
  }
  int n_;
  std::array<double, kMaxDim * kMaxDim * kMaxDim> g_{};
};

class Connection {
 public:
  using SymbolsFn = std::function<Christoffel(const Vector&)>;

  Connection(Frame frame, SymbolsFn symbols, Box domain);

  // Zero symbols in the coordinate frame.
  static Connection flat(int n);
  // Zero symbols in `frame`: the connection making every E_i parallel.
  static Connection frame_flat(const Frame& frame);
  static Connection coordinate(int n, SymbolsFn symbols, Box domain);

  int dimension() const { return frame_.dimension(); }
  const Box& domain() const { return domain_; }
  const Frame& frame() const { return frame_; }
  bool coordinate_frame() const { return coordinate_frame_; }

  // Symbols relative to the connection's own frame.
  Christoffel symbols(const ChartPoint& p) const;
  // Symbols relative to the coordinate frame (d_1, ..., d_n).
  Christoffel coordinate_symbols(const ChartPoint& p) const;
  // nabla_X Y at p, in coordinate components.
  Vector covariant_derivative(const VectorField& x, const VectorField& y, const ChartPoint& p) const;

 private:
  Frame frame_;
  SymbolsFn symbols_;
  Box domain_;
  bool coordinate_frame_ = false;
};

Christoffel to_coordinate_symbols(const MatrixJet& frame, const Christoffel& gamma);
Christoffel from_coordinate_symbols(const MatrixJet& frame, const Christoffel& coordinate);

// Throws SingularMatrix when either frame is singular at p.
Christoffel christoffels_in_frame(const Connection& conn, const Frame& new_frame, const ChartPoint& p);

// sum_a w_a(p) nabla^a, taken pointwise on coordinate symbols. Members with
// zero weight at p are not evaluated there.
Connection blend_connections(const std::vector<Connection>& members, const std::vector<WeightFn>& weights,
                             Box domain);

struct Endomorphism {
  ChartPoint base;
  Matrix matrix;
};

// w -> w^k v^j Gamma^i_{jk}(p) E_i(p) with Gamma taken in the P-parallel frame,
// returned in coordinate components.
Endomorphism nabla_P(const Connection& conn, const Parallelism& parallelism, const TangentVector& v);

// T(X, Y) = nabla_X Y - nabla_Y X - [X, Y] at p.
TangentVector torsion(const Connection& conn, const VectorField& x, const VectorField& y, const ChartPoint& p);

}  // namespace holo
