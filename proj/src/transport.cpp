#include "holo/transport.hpp"

#include <cmath>

namespace holo {

namespace {

int step_count(double span, double step) {
  if (!(step > 0.0)) throw Error(ErrorCode::InvalidArgument, "step must be positive");
  if (span <= 0.0) return 0;
  return std::max(1, static_cast<int>(std::ceil(span / step - 1e-9)));
}

}  // namespace

Matrix integrate_linear(const CoefficientFn& a, const Matrix& start, double t0, double t1, double step,
                        const std::function<void(double, const Matrix&)>& observe) {
  const int steps = step_count(t1 - t0, step);
  Matrix phi = start;
  if (observe) observe(t0, phi);
  if (steps == 0) return phi;
  const double h = (t1 - t0) / steps;
  for (int s = 0; s < steps; ++s) {
    const double t = t0 + s * h;
    const Matrix a0 = a(t);
    const Matrix amid = a(t + 0.5 * h);
    const Matrix a1 = a(t + h);
    const Matrix k1 = a0 * phi;
    const Matrix k2 = amid * (phi + 0.5 * h * k1);
    const Matrix k3 = amid * (phi + 0.5 * h * k2);
    const Matrix k4 = a1 * (phi + h * k3);
    phi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double tn = s + 1 == steps ? t1 : t0 + (s + 1) * h;
    if (!phi.allFinite()) throw BlowupError("matrix ODE solution became non-finite", tn);
    if (observe) observe(tn, phi);
  }
  return phi;
}

MatrixCurve matrix_ode_solve(const CoefficientFn& a, int n, double t_end, double step) {
  MatrixCurve curve;
  integrate_linear(a, Matrix::Identity(n, n), 0.0, t_end, step,
                   [&curve](double t, const Matrix& m) { curve.samples.push_back({t, m}); });
  return curve;
}

CoefficientFn transport_coefficient(const Connection& conn, const Curve& curve) {
  const int n = conn.dimension();
  return [conn, curve, n](double t) {
    const Vector p = curve.position(t);
    const Vector v = curve.velocity(t);
    const Christoffel c = conn.coordinate_symbols({p});
    Matrix a = Matrix::Zero(n, n);
    for (int j = 0; j < n; ++j) a -= v[j] * c.slice(j);
    return a;
  };
}

TransportOperator parallel_transport(const Connection& conn, const Curve& curve, double t, double step) {
  if (t < 0.0 || t > 1.0) throw Error(ErrorCode::InvalidArgument, "transport parameter must lie in [0, 1]");
  const int n = conn.dimension();
  const auto a = transport_coefficient(conn, curve);
  const Matrix coarse = integrate_linear(a, Matrix::Identity(n, n), 0.0, t, step);
  const Matrix fine = integrate_linear(a, Matrix::Identity(n, n), 0.0, t, 0.5 * step);
  return TransportOperator{{curve.position(0.0)}, {curve.position(t)}, coarse, max_abs(coarse - fine)};
}

std::vector<Matrix> transport_matrices(const Connection& conn, const Curve& curve, const std::vector<double>& ts,
                                       double step) {
  const int n = conn.dimension();
  const auto a = transport_coefficient(conn, curve);
  std::vector<Matrix> out;
  out.reserve(ts.size());
  Matrix phi = Matrix::Identity(n, n);
  double t = 0.0;
  for (double target : ts) {
    if (target < t) throw Error(ErrorCode::InvalidArgument, "transport parameters must be increasing");
    phi = integrate_linear(a, phi, t, target, step);
    t = target;
    out.push_back(phi);
  }
  return out;
}

MatrixCurve phi_curve(const Parallelism& parallelism, const Connection& conn, const Curve& curve, double step) {
  const int n = conn.dimension();
  const Matrix start = parallelism.trivialization({curve.position(0.0)});
  MatrixCurve out;
  integrate_linear(transport_coefficient(conn, curve), Matrix::Identity(n, n), 0.0, 1.0, step,
                   [&](double t, const Matrix& transport) {
                     const Matrix phi_t = parallelism.trivialization({curve.position(t)});
                     out.samples.push_back({t, Matrix(phi_t.inverse() * transport * start)});
                   });
  return out;
}

}  // namespace holo
