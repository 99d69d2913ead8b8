#include "holo/core.hpp"

#include <algorithm>
#include <cmath>

namespace holo {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::OutsideDomain: return "outside_domain";
    case ErrorCode::SingularMatrix: return "singular_matrix";
    case ErrorCode::IndefiniteNorm: return "indefinite_norm";
    case ErrorCode::NumericalBlowup: return "numerical_blowup";
    case ErrorCode::Incompatible: return "incompatible";
    case ErrorCode::CoverageGap: return "coverage_gap";
    case ErrorCode::Precondition: return "precondition";
    case ErrorCode::Config: return "config";
  }
  return "unknown";
}

Box Box::cube(int n, double half_width) {
  check_dimension(n);
  return Box{Vector::Constant(n, -half_width), Vector::Constant(n, half_width)};
}

Box Box::whole(int n) {
  check_dimension(n);
  const double inf = std::numeric_limits<double>::infinity();
  return Box{Vector::Constant(n, -inf), Vector::Constant(n, inf)};
}

bool Box::contains(const Vector& p) const {
  if (p.size() != lower.size()) return false;
  for (int i = 0; i < p.size(); ++i)
    if (!(p[i] > lower[i] && p[i] < upper[i])) return false;
  return true;
}

bool Box::bounded() const { return lower.allFinite() && upper.allFinite(); }

Box Box::clipped(double clip) const {
  Box b = *this;
  for (int i = 0; i < b.dimension(); ++i) {
    b.lower[i] = std::max(b.lower[i], -clip);
    b.upper[i] = std::min(b.upper[i], clip);
  }
  return b;
}

Box Box::shrunk(double fraction) const {
  Box b = clipped();
  for (int i = 0; i < b.dimension(); ++i) {
    const double margin = 0.5 * fraction * (b.upper[i] - b.lower[i]);
    b.lower[i] += margin;
    b.upper[i] -= margin;
  }
  return b;
}

Box Box::intersect(const Box& other) const {
  Box b = *this;
  for (int i = 0; i < b.dimension(); ++i) {
    b.lower[i] = std::max(lower[i], other.lower[i]);
    b.upper[i] = std::min(upper[i], other.upper[i]);
  }
  return b;
}

Vector Box::center() const {
  const Box b = clipped();
  return 0.5 * (b.lower + b.upper);
}

Vector make_vector(std::initializer_list<double> values) {
  Vector v(static_cast<int>(values.size()));
  int i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

Matrix make_matrix(std::initializer_list<std::initializer_list<double>> rows) {
  const int r = static_cast<int>(rows.size());
  const int c = r == 0 ? 0 : static_cast<int>(rows.begin()->size());
  Matrix m(r, c);
  int i = 0;
  for (const auto& row : rows) {
    int j = 0;
    for (double x : row) m(i, j++) = x;
    ++i;
  }
  return m;
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Matrix checked_inverse(const Matrix& m, const char* what) {
  const double det = m.determinant();
  if (!(std::abs(det) > kSingularDet))
    throw Error(ErrorCode::SingularMatrix, std::string(what) + " is singular (|det| <= 1e-12)");
  return m.inverse();
}

}  // namespace holo
