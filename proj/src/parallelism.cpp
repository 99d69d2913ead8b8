#include "holo/parallelism.hpp"

#include <cmath>
#include <memory>

namespace holo {

Parallelism::Parallelism(MatrixField trivialization, Vector basepoint)
    : trivialization_(std::move(trivialization)), basepoint_(std::move(basepoint)) {}

Matrix Parallelism::trivialization(const ChartPoint& p) const {
  Matrix m = trivialization_.value(p.coords);
  if (!(std::abs(m.determinant()) > kSingularDet))
    throw Error(ErrorCode::SingularMatrix, "trivialization is singular (|det| <= 1e-12)");
  return m;
}

Matrix Parallelism::transfer(const ChartPoint& p, const ChartPoint& q) const {
  return trivialization(q) * trivialization(p).inverse();
}

Parallelism frame_parallelism(const Frame& frame) {
  return Parallelism(frame.matrix_field(), frame.domain().center());
}

MatrixField induced_trivialization(const Parallelism& parallelism, const ChartPoint& p, const Matrix& eta) {
  checked_inverse(eta, "trivialization normalization");
  const Matrix base_inv = parallelism.trivialization(p).inverse();
  const MatrixField& phi = parallelism.trivialization_field();
  auto value = [phi, base_inv, eta](const Vector& q) { return Matrix(phi.value(q) * base_inv * eta); };
  auto jet = [phi, base_inv, eta](const Vector& q) {
    MatrixJet j = phi.jet(q);
    const Matrix right = base_inv * eta;
    j.value = j.value * right;
    for (int m = 0; m < phi.dimension(); ++m)
      j.partial[static_cast<std::size_t>(m)] = j.partial[static_cast<std::size_t>(m)] * right;
    return j;
  };
  return MatrixField(phi.dimension(), phi.domain(), value, jet);
}

std::vector<Vector> grid_points(const Box& box, int per_axis) {
  const Box b = box.clipped();
  const int n = b.dimension();
  std::vector<Vector> out;
  int total = 1;
  for (int i = 0; i < n; ++i) total *= per_axis;
  for (int idx = 0; idx < total; ++idx) {
    Vector p(n);
    int rest = idx;
    for (int i = 0; i < n; ++i) {
      const int k = rest % per_axis;
      rest /= per_axis;
      p[i] = b.lower[i] + (k + 0.5) / per_axis * (b.upper[i] - b.lower[i]);
    }
    out.push_back(p);
  }
  return out;
}

PushdownDeviation pushdown_deviation(const NormField& field, const Parallelism& parallelism, const ChartPoint& p,
                                     const std::vector<Vector>& probes) {
  const Matrix phi_p = parallelism.trivialization(p);
  const auto samples = sphere_samples(parallelism.dimension(), 200);
  PushdownDeviation out{0.0, p.coords};
  for (const auto& q : probes) {
    const Matrix phi_q = parallelism.trivialization({q});
    for (const auto& v : samples) {
      const double d = std::abs(field(q, phi_q * v) - field(p.coords, phi_p * v));
      if (d > out.max_deviation) {
        out.max_deviation = d;
        out.worst_probe = q;
      }
    }
  }
  return out;
}

PushedNorm pushdown_norm(const NormField& field, const Parallelism& parallelism, const ChartPoint& p,
                         const std::vector<Vector>& probes_in, double tol) {
  const int n = parallelism.dimension();
  const Matrix phi_p = parallelism.trivialization(p);
  const Vector base = p.coords;
  MinkowskiNorm f(
      n, [field, phi_p, base](const Vector& v) { return field(base, phi_p * v); }, {}, NormKind::Custom);

  const auto probes = probes_in.empty() ? grid_points(parallelism.domain(), 3) : probes_in;
  const PushdownDeviation dev = pushdown_deviation(field, parallelism, p, probes);
  if (dev.max_deviation > tol)
    throw IncompatibleError("norm field is not compatible with the parallelism: F_q o phi_q depends on q", base,
                            dev.worst_probe, dev.max_deviation);
  return PushedNorm{f, p};
}

double smooth_glue(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

namespace {

double bump(const Box& b, const Vector& x) {
  double v = 1.0;
  for (int i = 0; i < b.dimension(); ++i) {
    if (std::isfinite(b.lower[i])) v *= smooth_glue(x[i] - b.lower[i]);
    if (std::isfinite(b.upper[i])) v *= smooth_glue(b.upper[i] - x[i]);
  }
  return v;
}

}  // namespace

std::vector<WeightFn> bump_partition(const std::vector<Box>& domains, const std::vector<Vector>& probes) {
  if (domains.empty()) throw Error(ErrorCode::InvalidArgument, "empty covering");
  for (const auto& x : probes) {
    bool covered = false;
    for (const auto& b : domains) covered = covered || (b.contains(x) && bump(b, x) > 0.0);
    if (!covered) throw Error(ErrorCode::CoverageGap, "covering leaves a sampled point uncovered");
  }
  auto boxes = std::make_shared<const std::vector<Box>>(domains);
  std::vector<WeightFn> out;
  for (std::size_t a = 0; a < domains.size(); ++a) {
    out.emplace_back([boxes, a](const Vector& x) {
      double total = 0.0;
      double mine = 0.0;
      for (std::size_t b = 0; b < boxes->size(); ++b) {
        const double v = bump((*boxes)[b], x);
        total += v;
        if (b == a) mine = v;
      }
      if (!(total > 0.0)) throw Error(ErrorCode::CoverageGap, "point outside every box of the covering");
      return mine / total;
    });
  }
  return out;
}

std::vector<Box> overlapping_boxes(const Box& region, int cells_per_axis) {
  if (!region.bounded()) throw Error(ErrorCode::InvalidArgument, "box decomposition needs a bounded region");
  if (cells_per_axis < 1) throw Error(ErrorCode::InvalidArgument, "cells_per_axis must be positive");
  const int n = region.dimension();
  std::vector<Box> out;
  int total = 1;
  for (int i = 0; i < n; ++i) total *= cells_per_axis;
  for (int idx = 0; idx < total; ++idx) {
    Box b{Vector(n), Vector(n)};
    int rest = idx;
    for (int i = 0; i < n; ++i) {
      const int k = rest % cells_per_axis;
      rest /= cells_per_axis;
      const double w = (region.upper[i] - region.lower[i]) / cells_per_axis;
      // Neighbouring cells share an overlap of 0.25 w.
      b.lower[i] = region.lower[i] + k * w - 0.125 * w;
      b.upper[i] = region.lower[i] + (k + 1) * w + 0.125 * w;
    }
    out.push_back(b);
  }
  return out;
}

CoveringParallelism::CoveringParallelism(std::vector<CoverMember> members, Box region)
    : members_(std::move(members)), region_(std::move(region)) {
  std::vector<Box> boxes;
  for (const auto& m : members_) {
    if (m.parallelism.dimension() != region_.dimension())
      throw Error(ErrorCode::InvalidArgument, "cover member dimension mismatch");
    boxes.push_back(m.domain);
  }
  partition_ = bump_partition(boxes, grid_points(region_, region_.dimension() == 2 ? 40 : 12));
}

}  // namespace holo
