#pragma once

// Parallelism from a covariant derivative (radial transport in a convex
// chart) and covariant derivative from a covering parallelism (zero symbols
// in each parallel frame, glued with a partition of unity).

#include "holo/connections.hpp"
#include "holo/parallelism.hpp"
#include "holo/transport.hpp"

namespace holo {

struct ConvexChartRegion {
  ChartPoint center;
  Box box;
};

// [phi_q] = transport along the segment from the center to q.
Parallelism parallelism_from_connection(const Connection& conn, const ConvexChartRegion& region,
                                        double step = kDefaultStep);

// Covers `region` with overlapping boxes (25% overlap) and builds one
// radial-transport parallelism per box.
CoveringParallelism covering_from_connection(const Connection& conn, const Box& region, int cells_per_axis,
                                             double step = kDefaultStep);

Connection connection_from_covering_parallelism(const CoveringParallelism& cover);

}  // namespace holo
