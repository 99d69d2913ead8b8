#include "doctest.h"

#include "holo/fixtures.hpp"
#include "holo/verification.hpp"
#include "oracles.hpp"

using namespace holo;

TEST_SUITE("fixtures") {
  TEST_CASE("every fixture loads and validates") {
    for (const auto& name : fixture_names()) {
      const Fixture fx = fixture_by_name(name);
      CHECK(fx.name == name);
      CHECK_NOTHROW(validate_fixture(fx));
    }
    CHECK_THROWS_AS(fixture_by_name("no_such_fixture"), Error);
  }

  TEST_CASE("example norm values") {
    const Fixture fx = section5_example();
    CHECK(fx.norm(make_vector({0, 0}), make_vector({0, 1})) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(fx.norm(make_vector({1, 0}), make_vector({1, 1})) == doctest::Approx(1.0).epsilon(1e-15));
    Rng rng(70, 0);
    for (int i = 0; i < 20; ++i) CHECK(fx.norm(rng.in_box(fx.region), Vector::Zero(2)) == 0.0);
  }

  TEST_CASE("expected tables are re-derived by the operations") {
    const Fixture fx = section5_example();
    const auto& t = fx.expectation("torsion_E1_E2");
    const Vector tv = torsion(fx.connection, fx.frame.field(0), fx.frame.field(1), {make_vector({0.4, 1.0})}).components;
    CHECK(std::abs(tv[0] - t.value[0]) <= t.tolerance);
    CHECK(std::abs(tv[1] - t.value[1]) <= t.tolerance);
    CHECK(t.origin == Origin::Reference);

    const auto& tr = fx.expectation("transport_origin_to_unit_x");
    const Matrix m = parallel_transport(fx.connection, Curve::segment(make_vector({0, 0}), make_vector({1, 0})), 1.0).matrix;
    for (int i = 0; i < 4; ++i) CHECK(std::abs(m(i / 2, i % 2) - tr.value[static_cast<std::size_t>(i)]) <= tr.tolerance);
    CHECK(tr.origin == Origin::Derived);

    const auto& iso = fx.expectation("isometry_group");
    const auto els = isometry_group_2x2(fx.model_norm).elements;
    REQUIRE(els.size() * 4 == iso.value.size());
    for (std::size_t k = 0; k < els.size(); ++k)
      for (int i = 0; i < 4; ++i)
        CHECK(std::abs(els[k](i / 2, i % 2) - iso.value[4 * k + static_cast<std::size_t>(i)]) <= iso.tolerance);
    CHECK_THROWS_AS(fx.expectation("missing"), Error);
  }

  TEST_CASE("control fixtures carry their expectations") {
    CHECK(euclidean_flat().expect_holonomy_invariant);
    CHECK_FALSE(scaled_euclidean_incompatible().expect_compatible);
    CHECK_FALSE(euclidean_gamma_xx().expect_holonomy_invariant);
    const Fixture blend = rotated_blend();
    CHECK(blend.cover->members().size() == 2);
    CHECK(blend.expectation("phi_orthogonality").tolerance == 1e-7);
  }

  TEST_CASE("rotated frame is orthonormal with the expected angle") {
    const Frame f = rotated_frame(std::numbers::pi / 3);
    for (double x : {-3.0, -0.5, 0.0, 0.5, 3.0}) {
      const Matrix m = f.matrix({make_vector({x, 0.2})});
      CHECK(max_abs(m.transpose() * m - Matrix::Identity(2, 2)) <= 1e-15);
      const double theta = std::numbers::pi / 3 * (1 + std::tanh(2 * x)) / 2;
      CHECK(max_abs(m - Matrix(oracle::rotation(theta))) <= 1e-15);
    }
  }
}
