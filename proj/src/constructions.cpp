#include "holo/constructions.hpp"

namespace holo {

Parallelism parallelism_from_connection(const Connection& conn, const ConvexChartRegion& region, double step) {
  const int n = conn.dimension();
  if (!region.box.contains(region.center.coords))
    throw Error(ErrorCode::InvalidArgument, "region center must lie inside its box");
  const Vector center = region.center.coords;
  auto value = [conn, center, step, n](const Vector& q) -> Matrix {
    if (q == center) return Matrix::Identity(n, n);
    const Curve segment = Curve::segment(center, q);
    return integrate_linear(transport_coefficient(conn, segment), Matrix::Identity(n, n), 0.0, 1.0, step);
  };
  return Parallelism(MatrixField::numeric(n, region.box, value), center);
}

CoveringParallelism covering_from_connection(const Connection& conn, const Box& region, int cells_per_axis,
                                             double step) {
  std::vector<CoverMember> members;
  for (const Box& box : overlapping_boxes(region, cells_per_axis)) {
    const Box inside = box.intersect(conn.domain());
    members.push_back({inside, parallelism_from_connection(conn, {{inside.center()}, inside}, step)});
  }
  return CoveringParallelism(std::move(members), region);
}

Connection connection_from_covering_parallelism(const CoveringParallelism& cover) {
  std::vector<Connection> locals;
  for (const auto& m : cover.members()) {
    const Frame frame = m.parallelism.parallel_frame();
    const int n = frame.dimension();
    locals.emplace_back(frame, [n](const Vector&) { return Christoffel(n); }, m.domain);
  }
  return blend_connections(locals, cover.partition(), cover.region());
}

}  // namespace holo
