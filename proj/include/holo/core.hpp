#pragma once

// Shared small-matrix types, error types and the box-shaped chart domain.

#include <Eigen/Dense>

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "holo/jet.hpp"

namespace holo {

using Vector = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;

enum class ErrorCode {
  InvalidArgument,
  OutsideDomain,
  SingularMatrix,
  IndefiniteNorm,
  NumericalBlowup,
  Incompatible,
  CoverageGap,
  Precondition,
  Config,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised when a basepoint-independence or compatibility requirement fails;
// carries the pair of points where it was observed.
class IncompatibleError : public Error {
 public:
  IncompatibleError(const std::string& what, Vector p, Vector q, double deviation)
      : Error(ErrorCode::Incompatible, what), p_(std::move(p)), q_(std::move(q)), deviation_(deviation) {}
  const Vector& first() const { return p_; }
  const Vector& second() const { return q_; }
  double deviation() const { return deviation_; }

 private:
  Vector p_, q_;
  double deviation_;
};

class BlowupError : public Error {
 public:
  BlowupError(const std::string& what, double t) : Error(ErrorCode::NumericalBlowup, what), t_(t) {}
  double failing_t() const { return t_; }

 private:
  double t_;
};

inline void check_dimension(int n) {
  if (n < 1 || n > kMaxDim)
    throw Error(ErrorCode::InvalidArgument, "dimension must be between 1 and " + std::to_string(kMaxDim));
}

// Open axis-aligned box. Infinite bounds are allowed.
struct Box {
  Vector lower;
  Vector upper;

  static Box cube(int n, double half_width);
  static Box whole(int n);

  int dimension() const { return static_cast<int>(lower.size()); }
  bool contains(const Vector& p) const;
  bool bounded() const;
  // Finite box used for sampling: infinite sides are clipped to +-clip.
  Box clipped(double clip = 3.0) const;
  Box shrunk(double fraction) const;
  Box intersect(const Box& other) const;
  Vector center() const;
};

Vector make_vector(std::initializer_list<double> values);
Matrix make_matrix(std::initializer_list<std::initializer_list<double>> rows);

double max_abs(const Matrix& m);

// |det| threshold below which frame and trivialization matrices count as singular.
inline constexpr double kSingularDet = 1e-12;

Matrix checked_inverse(const Matrix& m, const char* what);

}  // namespace holo
