#include "doctest.h"

#include "holo/fixtures.hpp"
#include "holo/verification.hpp"
#include "oracles.hpp"

using namespace holo;

namespace {

Christoffel constant_frame_symbol() {
  Christoffel c(2);
  c(0, 0, 0) = 1.0;
  return c;
}

double christoffel_distance(const Christoffel& a, const Christoffel& b) {
  double worst = 0.0;
  const int n = a.dimension();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) worst = std::max(worst, std::abs(a(i, j, k) - b(i, j, k)));
  return worst;
}

}  // namespace

TEST_SUITE("connections") {
  TEST_CASE("example connection in its own frame and in coordinates") {
    const Fixture fx = section5_example();
    Rng rng(10, 0);
    for (int i = 0; i < 20; ++i) {
      const ChartPoint p{rng.in_box(fx.region)};
      CHECK(christoffels_in_frame(fx.connection, fx.frame, p).max_abs() <= 1e-14);
      const Christoffel c = christoffels_in_frame(fx.connection, Frame::coordinate(2), p);
      Christoffel expected(2);
      expected(0, 0, 1) = -1.0;  // nabla_{d_x} d_y = -d_x
      CHECK(christoffel_distance(c, expected) <= 1e-14);
    }
    CHECK(christoffels_in_frame(Connection::flat(2), Frame::coordinate(2), {make_vector({1, 2})}).max_abs() == 0.0);
  }

  TEST_CASE("frame change round trip") {
    const Fixture fx = section5_example();
    const Frame other = rotated_frame(std::numbers::pi / 3);
    const Connection c(fx.frame, [](const Vector& p) {
      Christoffel g(2);
      g(0, 1, 0) = p[0] * p[1];
      g(1, 0, 1) = std::sin(p[0]);
      g(1, 1, 1) = 0.5;
      return g;
    }, Box::whole(2));
    Rng rng(11, 0);
    for (int i = 0; i < 20; ++i) {
      const ChartPoint p{rng.in_box(Box::cube(2, 2))};
      const Christoffel in_other = christoffels_in_frame(c, other, p);
      const Connection via_other(other, [&](const Vector& q) { return christoffels_in_frame(c, other, {q}); },
                                 Box::whole(2));
      CHECK(christoffel_distance(christoffels_in_frame(via_other, fx.frame, p), c.symbols(p)) <= 1e-9);
      CHECK(christoffel_distance(from_coordinate_symbols(other.jet(p), to_coordinate_symbols(other.jet(p), in_other)),
                                 in_other) <= 1e-9);
    }
  }

  TEST_CASE("singular target frame is rejected") {
    const Frame degenerate({VectorField::coordinate(2, 0), VectorField::coordinate(2, 0)});
    CHECK_THROWS_AS(christoffels_in_frame(Connection::flat(2), degenerate, {make_vector({0, 0})}), Error);
  }

  TEST_CASE("torsion of the example frame is -d/dx") {
    const Fixture fx = section5_example();
    Rng rng(12, 0);
    for (int i = 0; i < 50; ++i) {
      const ChartPoint p{rng.in_box(fx.region)};
      const Vector t = torsion(fx.connection, fx.frame.field(0), fx.frame.field(1), p).components;
      CHECK(std::abs(t[0] + 1.0) <= 1e-9);
      CHECK(std::abs(t[1]) <= 1e-9);
    }
  }

  TEST_CASE("torsion antisymmetry, flat case and tensoriality") {
    const Fixture fx = section5_example();
    const VectorField x(2, [](JetArgs a) { return std::vector<Jet>{a[0] * a[1], 1.0 + a[0] * a[0]}; });
    const VectorField y(2, [](JetArgs a) { return std::vector<Jet>{a[1] - 2.0, a[0] * a[1] * a[1]}; });
    const ScalarField f(2, [](JetArgs a) { return 1.0 + a[0] * a[0] - 3.0 * a[1]; });
    Rng rng(13, 0);
    for (int i = 0; i < 20; ++i) {
      const ChartPoint p{rng.in_box(Box::cube(2, 2))};
      CHECK(torsion(fx.connection, x, x, p).components.cwiseAbs().maxCoeff() <= 1e-12);
      CHECK(torsion(Connection::flat(2), VectorField::coordinate(2, 0), VectorField::coordinate(2, 1), p)
                .components.cwiseAbs()
                .maxCoeff() == 0.0);
      const Vector lhs = torsion(fx.connection, f * x, y, p).components;
      const Vector rhs = f.value(p.coords) * torsion(fx.connection, x, y, p).components;
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-9);
    }
  }

  TEST_CASE("covariant derivative of the frame fields vanishes") {
    const Fixture fx = section5_example();
    const ChartPoint p{make_vector({0.7, -1.3})};
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        CHECK(fx.connection.covariant_derivative(fx.frame.field(j), fx.frame.field(k), p).cwiseAbs().maxCoeff() <=
              1e-14);
  }

  TEST_CASE("nabla_P: zero symbols, zero vector, linearity") {
    const Fixture fx = section5_example();
    const Connection perturbed(fx.frame, [](const Vector&) { return constant_frame_symbol(); }, Box::whole(2));
    Rng rng(14, 0);
    for (int i = 0; i < 20; ++i) {
      const ChartPoint p{rng.in_box(fx.region)};
      const Vector v1 = rng.unit_vector(2), v2 = rng.unit_vector(2);
      CHECK(max_abs(nabla_P(fx.connection, fx.parallelism, {p, v1}).matrix) <= 1e-14);
      CHECK(max_abs(nabla_P(perturbed, fx.parallelism, {p, Vector::Zero(2)}).matrix) == 0.0);
      const double a = 0.7, b = -2.1;
      const Matrix lhs = nabla_P(perturbed, fx.parallelism, {p, a * v1 + b * v2}).matrix;
      const Matrix rhs = a * nabla_P(perturbed, fx.parallelism, {p, v1}).matrix +
                         b * nabla_P(perturbed, fx.parallelism, {p, v2}).matrix;
      CHECK(max_abs(lhs - rhs) <= 1e-12);
      // Closed form: w -> E^1(w) E^1(v) E_1, i.e. E_1 (E^1)^T scaled by E^1(v) = v_y.
      const Matrix e = oracle::frame(p.coords[0]);
      const Eigen::RowVector2d e_up(0.0, 1.0);
      const oracle::M2 expected = v1[1] * e.col(0) * e_up;
      CHECK(max_abs(nabla_P(perturbed, fx.parallelism, {p, v1}).matrix - Matrix(expected)) <= 1e-13);
    }
  }

  TEST_CASE("nabla_P of a half-blended connection") {
    // Blend of two Euclidean-compatible frame-flat connections with constant weights 1/2:
    // relative to the first parallelism, (nabla P)_v is half of the second member's.
    const Frame rotated = rotated_frame(std::numbers::pi / 3);
    const Connection a = Connection::flat(2), b = Connection::frame_flat(rotated);
    const std::vector<WeightFn> half{[](const Vector&) { return 0.5; }, [](const Vector&) { return 0.5; }};
    const Connection blend = blend_connections({a, b}, half, Box::whole(2));
    const Parallelism translation = frame_parallelism(Frame::coordinate(2));
    Rng rng(15, 0);
    for (int i = 0; i < 20; ++i) {
      const ChartPoint p{rng.in_box(Box::cube(2, 1.5))};
      const Vector v = rng.unit_vector(2);
      const Matrix m = nabla_P(blend, translation, {p, v}).matrix;
      CHECK(max_abs(m - 0.5 * nabla_P(b, translation, {p, v}).matrix) <= 1e-9);
      CHECK(max_abs(m + m.transpose()) <= 1e-9);
    }
  }
}
