#pragma once

// Parallelisms stored through their induced trivialization, covering
// parallelisms with a partition of unity, and the pushed-down norm.

#include <functional>
#include <vector>

#include "holo/geometry.hpp"
#include "holo/norms.hpp"

namespace holo {

// P(p, q) = [phi_q] [phi_p]^-1 for a trivialization matrix field q -> [phi_q].
// The P-parallel frame is E_i(q) = phi_q(e_i).
class Parallelism {
 public:
  Parallelism(MatrixField trivialization, Vector basepoint);

  int dimension() const { return trivialization_.dimension(); }
  const Box& domain() const { return trivialization_.domain(); }
  const Vector& basepoint() const { return basepoint_; }

  Matrix trivialization(const ChartPoint& p) const;
  Matrix transfer(const ChartPoint& p, const ChartPoint& q) const;
  Frame parallel_frame() const { return Frame(trivialization_); }
  const MatrixField& trivialization_field() const { return trivialization_; }

 private:
  MatrixField trivialization_;
  Vector basepoint_;
};

// P(p, q)(v) = E^i(v) E_i(q).
Parallelism frame_parallelism(const Frame& frame);

// q -> [P(p, q)] * eta; Throws SingularMatrix for singular eta.
MatrixField induced_trivialization(const Parallelism& parallelism, const ChartPoint& p, const Matrix& eta);

// f := F_p o phi_p, with its witness basepoint.
struct PushedNorm {
  MinkowskiNorm f;
  ChartPoint witness;
};

inline constexpr double kPushdownTolerance = 1e-9;

struct PushdownDeviation {
  double max_deviation = 0.0;
  Vector worst_probe;
};

// max over probes q and 200 unit vectors v of |F_q(phi_q v) - F_p(phi_p v)|.
PushdownDeviation pushdown_deviation(const NormField& field, const Parallelism& parallelism, const ChartPoint& p,
                                     const std::vector<Vector>& probes);

// Probes basepoint independence of F_q o phi_q against `probes` (a default
// grid over the parallelism's domain when empty) and throws IncompatibleError
// with the violating pair when the deviation exceeds tol.
PushedNorm pushdown_norm(const NormField& field, const Parallelism& parallelism, const ChartPoint& p,
                         const std::vector<Vector>& probes = {}, double tol = kPushdownTolerance);

using WeightFn = std::function<double(const Vector&)>;

// exp(-1/t) for t > 0, zero otherwise.
double smooth_glue(double t);

// Normalized mollifier bumps, one per box; each vanishes outside its box.
// Throws CoverageGap if any of `probes` lies in no box. Evaluating a weight
// at an uncovered point also throws CoverageGap.
std::vector<WeightFn> bump_partition(const std::vector<Box>& domains, const std::vector<Vector>& probes = {});

// Splits a bounded region into cells_per_axis^n boxes, each enlarged so that
// neighbours overlap by 25% of a cell width.
std::vector<Box> overlapping_boxes(const Box& region, int cells_per_axis);

// Deterministic grid of points strictly inside a (clipped) box.
std::vector<Vector> grid_points(const Box& box, int per_axis);

struct CoverMember {
  Box domain;
  Parallelism parallelism;
};

class CoveringParallelism {
 public:
  // Builds the partition of unity from the member boxes and checks that
  // `region` is covered.
  CoveringParallelism(std::vector<CoverMember> members, Box region);

  int dimension() const { return region_.dimension(); }
  const std::vector<CoverMember>& members() const { return members_; }
  const std::vector<WeightFn>& partition() const { return partition_; }
  const Box& region() const { return region_; }

 private:
  std::vector<CoverMember> members_;
  std::vector<WeightFn> partition_;
  Box region_;
};

}  // namespace holo
