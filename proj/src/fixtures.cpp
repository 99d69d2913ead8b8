#include "holo/fixtures.hpp"

#include <cmath>
#include <numbers>

#include "holo/constructions.hpp"

namespace holo {

const char* to_string(Origin origin) {
  switch (origin) {
    case Origin::Reference: return "reference";
    case Origin::Derived: return "derived";
    case Origin::Identity: return "identity";
  }
  return "identity";
}

const ExpectedValue& Fixture::expectation(std::string_view key) const {
  for (const auto& e : expected)
    if (e.key == key) return e;
  throw Error(ErrorCode::InvalidArgument, "fixture " + name + " has no expectation '" + std::string(key) + "'");
}

namespace {

Frame section5_frame() {
  VectorField e1(2, [](JetArgs x) { return std::vector<Jet>{x[0], Jet(1.0)}; });
  VectorField e2(2, [](JetArgs) { return std::vector<Jet>{Jet(-1.0), Jet(0.0)}; });
  return Frame({e1, e2});
}

MinkowskiNorm section5_model_norm() {
  return randers_norm({make_matrix({{4.0, 0.0}, {0.0, 12.0}}), make_vector({-1.0, 0.0})});
}

Parallelism translation(int n) { return frame_parallelism(Frame::coordinate(n)); }

}  // namespace

Frame rotated_frame(double max_angle) {
  auto theta = [max_angle](const Jet& x) { return Jet(0.5 * max_angle) * (Jet(1.0) + tanh(Jet(2.0) * x)); };
  VectorField e1(2, [theta](JetArgs x) {
    const Jet a = theta(x[0]);
    return std::vector<Jet>{cos(a), sin(a)};
  });
  VectorField e2(2, [theta](JetArgs x) {
    const Jet a = theta(x[0]);
    return std::vector<Jet>{-sin(a), cos(a)};
  });
  return Frame({e1, e2});
}

Fixture section5_example() {
  const Frame frame = section5_frame();
  const MinkowskiNorm f = section5_model_norm();
  const Parallelism parallelism = frame_parallelism(frame);
  const Box region = Box::cube(2, 4.0);
  Fixture fx{
      "section5",
      "planar Randers norm pulled back through E1 = x d/dx + d/dy, E2 = -d/dx",
      region,
      frame,
      f,
      pullback_norm(f, frame),
      Connection::frame_flat(frame),
      parallelism,
      CoveringParallelism({{region, parallelism}}, region),
      true,
      true,
      {
          {"torsion_E1_E2", Origin::Reference, {-1.0, 0.0}, 1e-9},
          {"isometry_group", Origin::Reference, {1, 0, 0, 1, 1, 0, 0, -1}, 1e-6},
          {"berwald_obstruction", Origin::Reference, {1.0}, 1e-9},
          {"transport_origin_to_unit_x", Origin::Derived, {1, 1, 0, 1}, 1e-7},
          // Gamma^i_{jk} in (i, j, k) order: only Gamma^x_{xy} = -1.
          {"coordinate_christoffel", Origin::Derived, {0, -1, 0, 0, 0, 0, 0, 0}, 1e-9},
          {"norm_origin_dy", Origin::Derived, {1.0}, 1e-12},
          {"norm_unit_x_diagonal", Origin::Derived, {1.0}, 1e-12},
          {"pushdown_independence", Origin::Reference, {0.0}, 1e-9},
      },
  };
  validate_fixture(fx);
  return fx;
}

Fixture euclidean_flat() {
  const Frame frame = Frame::coordinate(2);
  const MinkowskiNorm f = MinkowskiNorm::euclidean(2);
  const Box region = Box::cube(2, 2.0);
  Fixture fx{"euclidean_flat",
             "Euclidean norm with the flat connection",
             region,
             frame,
             f,
             NormField::uniform(f),
             Connection::flat(2),
             translation(2),
             CoveringParallelism({{region, translation(2)}}, region),
             true,
             true,
             {
                 {"holonomy_max_abs", Origin::Identity, {0.0}, 1e-12},
                 {"berwald_obstruction", Origin::Identity, {0.0}, 1e-12},
             }};
  validate_fixture(fx);
  return fx;
}

Fixture scaled_euclidean_incompatible() {
  const Frame frame = Frame::coordinate(2);
  const MinkowskiNorm f = MinkowskiNorm::euclidean(2);
  const Box region = Box::cube(2, 2.0);
  const ScalarField scale(2, [](JetArgs x) { return exp(x[0]); });
  Fixture fx{"scaled_euclidean_incompatible",
             "e^x times the Euclidean norm with the translation parallelism",
             region,
             frame,
             f,
             scaled_norm(NormField::uniform(f), scale),
             Connection::flat(2),
             translation(2),
             CoveringParallelism({{region, translation(2)}}, region),
             false,
             false,
             {
                 {"compat_witness_ratio", Origin::Derived, {std::numbers::e}, 1e-6},
             }};
  validate_fixture(fx);
  return fx;
}

Fixture rotated_blend() {
  const double inf = std::numeric_limits<double>::infinity();
  const Box left{make_vector({-inf, -inf}), make_vector({1.0, inf})};
  const Box right{make_vector({-1.0, -inf}), make_vector({inf, inf})};
  const Box region = Box::cube(2, 2.0);
  CoveringParallelism cover({{left, translation(2)}, {right, frame_parallelism(rotated_frame(std::numbers::pi / 3))}},
                            region);
  const MinkowskiNorm f = MinkowskiNorm::euclidean(2);
  Fixture fx{"rotated_blend",
             "Euclidean norm; translation and rotated-frame parallelisms blended by a partition of unity",
             region,
             Frame::coordinate(2),
             f,
             NormField::uniform(f),
             connection_from_covering_parallelism(cover),
             translation(2),
             cover,
             true,
             true,
             {
                 {"phi_orthogonality", Origin::Derived, {0.0}, 1e-7},
             }};
  validate_fixture(fx);
  return fx;
}

Fixture euclidean_gamma_xx() {
  const Frame frame = Frame::coordinate(2);
  const MinkowskiNorm f = MinkowskiNorm::euclidean(2);
  const Box region = Box::cube(2, 2.0);
  Fixture fx{"euclidean_gamma_xx",
             "Euclidean norm with the coordinate connection Gamma^x_xx = 1",
             region,
             frame,
             f,
             NormField::uniform(f),
             Connection::coordinate(
                 2,
                 [](const Vector&) {
                   Christoffel c(2);
                   c(0, 0, 0) = 1.0;
                   return c;
                 },
                 Box::whole(2)),
             translation(2),
             std::nullopt,
             false,
             true,
             {
                 {"invariance_witness_ratio", Origin::Derived, {std::exp(-1.0)}, 1e-4},
             }};
  validate_fixture(fx);
  return fx;
}

std::vector<std::string> fixture_names() {
  return {"euclidean_flat", "euclidean_gamma_xx", "rotated_blend", "scaled_euclidean_incompatible", "section5"};
}

Fixture fixture_by_name(std::string_view name) {
  if (name == "section5") return section5_example();
  if (name == "euclidean_flat") return euclidean_flat();
  if (name == "scaled_euclidean_incompatible") return scaled_euclidean_incompatible();
  if (name == "rotated_blend") return rotated_blend();
  if (name == "euclidean_gamma_xx") return euclidean_gamma_xx();
  throw Error(ErrorCode::Config, "unknown fixture '" + std::string(name) + "'");
}

void validate_fixture(const Fixture& fx) {
  const int n = fx.dimension();
  const Coframe coframe = dual_coframe(fx.frame);
  const auto directions = sphere_samples(n, 36);
  for (const auto& p : grid_points(fx.region, 4)) {
    const Matrix duality = coframe.matrix({p}) * fx.frame.matrix({p});
    if (max_abs(duality - Matrix::Identity(n, n)) > 1e-12)
      throw Error(ErrorCode::InvalidArgument, fx.name + ": coframe is not dual to the frame");
    if (!is_definite(fx.norm.at({p}), directions))
      throw Error(ErrorCode::InvalidArgument, fx.name + ": norm field is not definite");
  }
  if (!fx.connection.coordinate_frame() && fx.connection.symbols({fx.region.center()}).dimension() != n)
    throw Error(ErrorCode::InvalidArgument, fx.name + ": connection dimension mismatch");
}

}  // namespace holo
