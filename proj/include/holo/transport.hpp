#pragma once

// Parallel translation as a linear matrix ODE integrated with fixed-step RK4.

#include <functional>
#include <vector>

#include "holo/connections.hpp"
#include "holo/geometry.hpp"
#include "holo/parallelism.hpp"

namespace holo {

inline constexpr double kDefaultStep = 1e-3;

struct TransportOperator {
  ChartPoint from;
  ChartPoint to;
  Matrix matrix;      // coordinate components at `from` -> components at `to`
  double step_error;  // max-entry difference between the step and step/2 runs
};

struct MatrixSample {
  double t;
  Matrix value;
};

struct MatrixCurve {
  std::vector<MatrixSample> samples;
};

using CoefficientFn = std::function<Matrix(double t)>;

// Phi' = A(t) Phi, Phi(t0) = start, from t0 to t1 in ceil((t1 - t0) / step)
// equal RK4 steps. `observe` sees every step boundary. Throws BlowupError.
Matrix integrate_linear(const CoefficientFn& a, const Matrix& start, double t0, double t1, double step,
                        const std::function<void(double, const Matrix&)>& observe = {});

// Phi' = A(t) Phi, Phi(0) = I, sampled at every step boundary.
MatrixCurve matrix_ode_solve(const CoefficientFn& a, int n, double t_end, double step);

// A(t) = -gamma_dot^j(t) C_j(gamma(t)) with C the coordinate symbols.
CoefficientFn transport_coefficient(const Connection& conn, const Curve& curve);

TransportOperator parallel_transport(const Connection& conn, const Curve& curve, double t,
                                     double step = kDefaultStep);

// Transport matrices at the increasing parameters `ts`, from one RK4 pass
// whose step boundaries land on every requested t.
std::vector<Matrix> transport_matrices(const Connection& conn, const Curve& curve, const std::vector<double>& ts,
                                       double step = kDefaultStep);

// Phi(t) = [phi_gamma(t)]^-1 P_gamma^t [phi_gamma(0)], at every step boundary of [0, 1].
MatrixCurve phi_curve(const Parallelism& parallelism, const Connection& conn, const Curve& curve,
                      double step = kDefaultStep);

}  // namespace holo
