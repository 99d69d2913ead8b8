#include "doctest.h"

#include "holo/fixtures.hpp"
#include "holo/norms.hpp"
#include "holo/verification.hpp"
#include "oracles.hpp"

using namespace holo;

namespace {

MinkowskiNorm section5_f() { return randers_norm({make_matrix({{4, 0}, {0, 12}}), make_vector({-1, 0})}); }

oracle::Norm2 as_fn(const MinkowskiNorm& f) {
  return [f](const oracle::V2& v) { return f(make_vector({v[0], v[1]})); };
}

std::vector<oracle::M2> to_m2(const std::vector<Matrix>& ms) {
  std::vector<oracle::M2> out;
  for (const auto& m : ms) out.push_back(m);
  return out;
}

Matrix rot(double t) { return make_matrix({{std::cos(t), -std::sin(t)}, {std::sin(t), std::cos(t)}}); }

}  // namespace

TEST_SUITE("norms") {
  TEST_CASE("randers evaluation") {
    const MinkowskiNorm f = section5_f();
    CHECK(f(make_vector({1, 0})) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(f(make_vector({0, 1})) == doctest::Approx(std::sqrt(12.0)).epsilon(1e-15));
    CHECK(f(make_vector({0, 0})) == 0.0);
    CHECK(f.kind() == NormKind::Randers);
  }

  TEST_CASE("randers rejects indefinite or malformed data") {
    auto code_of = [](const RandersData& d) {
      try {
        randers_norm(d);
      } catch (const Error& e) {
        return e.code();
      }
      return ErrorCode::Config;
    };
    CHECK(code_of({make_matrix({{1, 0}, {0, 1}}), make_vector({1, 0})}) == ErrorCode::IndefiniteNorm);
    CHECK(code_of({make_matrix({{4, 0}, {0, 12}}), make_vector({2.5, 0})}) == ErrorCode::IndefiniteNorm);
    CHECK(code_of({make_matrix({{1, 0.5}, {0, 1}}), make_vector({0, 0})}) == ErrorCode::IndefiniteNorm);
    CHECK(code_of({make_matrix({{-1, 0}, {0, 1}}), make_vector({0, 0})}) == ErrorCode::IndefiniteNorm);
  }

  TEST_CASE("randers positive homogeneity and definiteness") {
    const MinkowskiNorm f = randers_norm({make_matrix({{2, 0.3, 0}, {0.3, 1, 0.1}, {0, 0.1, 3}}), make_vector({0.2, -0.1, 0.4})});
    CHECK(is_definite(f, sphere_samples(3, 200)));
    for (const auto& v : sphere_samples(3, 100))
      for (double lambda : {1e-3, 0.5, 7.0, 1e3})
        CHECK(std::abs(f(lambda * v) - lambda * f(v)) <= 1e-12 * std::max(1.0, lambda));
  }

  TEST_CASE("randers gradient matches central differences") {
    const MinkowskiNorm f = randers_norm({make_matrix({{4, 1}, {1, 12}}), make_vector({-1, 0.5})});
    Rng rng(7, 0);
    const double h = 1e-6;
    for (int i = 0; i < 100; ++i) {
      const Vector v = rng.unit_vector(2);
      const Vector g = f.gradient(v);
      for (int k = 0; k < 2; ++k) {
        Vector dv = Vector::Zero(2);
        dv[k] = h;
        const double fd = (f(v + dv) - f(v - dv)) / (2 * h);
        CHECK(std::abs(fd - g[k]) <= 1e-6 * std::max(1.0, std::abs(g[k])));
      }
    }
  }

  TEST_CASE("custom expression norm evaluates and differentiates") {
    const MinkowskiNorm f =
        MinkowskiNorm::from_expression(2, Expression::parse("sqrt(4*a^2+12*b^2)-a", component_names(2)));
    const MinkowskiNorm g = section5_f();
    for (const auto& v : sphere_samples(2, 50)) {
      CHECK(f(v) == doctest::Approx(g(v)).epsilon(1e-14));
      CHECK((f.gradient(v) - g.gradient(v)).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }

  TEST_CASE("is_isometry examples") {
    const MinkowskiNorm f = section5_f();
    const auto samples = sphere_samples(2, 360);
    CHECK(is_isometry(f, Matrix::Identity(2, 2), samples).is_isometry);
    CHECK(is_isometry(f, make_matrix({{1, 0}, {0, -1}}), samples).is_isometry);
    const IsometryCheck r = is_isometry(f, rot(std::numbers::pi / 2), samples);
    CHECK_FALSE(r.is_isometry);
    CHECK(r.max_deviation >= std::sqrt(12.0) - 1 - 1e-12);
    CHECK_FALSE(is_isometry(f, make_matrix({{1, 0}, {0, 0}}), samples).is_isometry);
  }

  TEST_CASE("isometry group of the example norm matches both oracles") {
    const IsometryGroup g = isometry_group_2x2(section5_f());
    CHECK_FALSE(g.continuous_family);
    REQUIRE(g.elements.size() == 2);
    const std::vector<oracle::M2> expected{oracle::M2::Identity(), oracle::M2(Eigen::Vector2d(1, -1).asDiagonal())};
    CHECK(oracle::set_distance(to_m2(g.elements), expected) <= 1e-6);
    CHECK(oracle::set_distance(oracle::brute_force_isometries(oracle::model_norm), expected) <= 1e-6);
  }

  TEST_CASE("euclidean isometries form a continuous family") {
    const IsometryGroup g = isometry_group_2x2(MinkowskiNorm::euclidean(2));
    CHECK(g.continuous_family);
  }

  TEST_CASE("generic randers norms have exactly two isometries") {
    // For beta != 0 the group is {I, the Q-orthogonal reflection fixing Q^-1 beta}.
    struct Case {
      Matrix q;
      Vector beta;
    };
    const std::vector<Case> cases{
        {make_matrix({{1, 0}, {0, 2}}), make_vector({0.3, 0.3})},
        {make_matrix({{3, 1}, {1, 2}}), make_vector({-0.4, 0.9})},
        {make_matrix({{1, -0.2}, {-0.2, 5}}), make_vector({0.1, -1.5})},
    };
    for (const auto& c : cases) {
      const MinkowskiNorm f = randers_norm({c.q, c.beta});
      const IsometryGroup g = isometry_group_2x2(f);
      const auto expected = oracle::randers_isometries(c.q, c.beta);
      CHECK_FALSE(g.continuous_family);
      CHECK(g.elements.size() == 2);
      CHECK(oracle::set_distance(to_m2(g.elements), expected) <= 1e-6);
      CHECK(oracle::set_distance(oracle::brute_force_isometries(as_fn(f)), expected) <= 1e-6);
      for (const auto& m : expected) CHECK(oracle::circle_deviation(as_fn(f), m) <= 1e-12);
    }
  }

  TEST_CASE("group closure under products and inverses") {
    for (const MinkowskiNorm& f : {section5_f(), randers_norm({make_matrix({{3, 1}, {1, 2}}), make_vector({-0.4, 0.9})})}) {
      const auto samples = sphere_samples(2, 720);
      const auto els = isometry_group_2x2(f).elements;
      for (const auto& a : els) {
        CHECK(is_isometry(f, a, samples, kIsometryTolerance).is_isometry);
        CHECK(is_isometry(f, a.inverse(), samples, kDerivedIsometryTolerance).is_isometry);
        for (const auto& b : els) CHECK(is_isometry(f, a * b, samples, kDerivedIsometryTolerance).is_isometry);
      }
    }
    // Rotations for the Euclidean norm.
    const MinkowskiNorm e = MinkowskiNorm::euclidean(2);
    const auto samples = sphere_samples(2, 720);
    CHECK(is_isometry(e, rot(0.3) * rot(1.1), samples, kDerivedIsometryTolerance).is_isometry);
    CHECK(is_isometry(e, rot(0.3).inverse(), samples, kDerivedIsometryTolerance).is_isometry);
  }

  TEST_CASE("limit closure") {
    const MinkowskiNorm f = section5_f();
    const auto samples = sphere_samples(2, 720);
    const Matrix reflection = make_matrix({{1, 0}, {0, -1}});
    for (int k = 0; k < 30; ++k) CHECK(is_isometry(f, reflection * Matrix::Identity(2, 2), samples).is_isometry);
    const MinkowskiNorm e = MinkowskiNorm::euclidean(2);
    for (int k = 1; k <= 40; ++k) CHECK(is_isometry(e, rot(0.7 + std::ldexp(1.0, -k)), samples).is_isometry);
    CHECK(is_isometry(e, rot(0.7), samples).is_isometry);
  }

  TEST_CASE("lie algebra membership") {
    const MinkowskiNorm e = MinkowskiNorm::euclidean(2);
    const Matrix skew = make_matrix({{0, -2}, {2, 0}});
    CHECK(lie_algebra_member(section5_f(), Matrix::Zero(2, 2)).member);
    CHECK(lie_algebra_member(e, skew).member);
    CHECK(lie_algebra_member(MinkowskiNorm::euclidean(3), make_matrix({{0, 1, -2}, {-1, 0, 3}, {2, -3, 0}})).member);
    CHECK_FALSE(lie_algebra_member(e, make_matrix({{1, 0}, {0, 1}})).member);
    // Trivial Lie algebra for the example norm: every nonzero grid matrix fails, also by the secant test.
    const MinkowskiNorm f = section5_f();
    for (double a : {-1.0, 0.0, 0.5})
      for (double b : {-0.3, 0.0, 1.0})
        for (double c : {0.0, 0.2})
          for (double d : {-1.0, 0.0}) {
            const Matrix m = make_matrix({{a, b}, {c, d}});
            if (max_abs(m) == 0.0) continue;
            CHECK_FALSE(lie_algebra_member(f, m).member);
            CHECK_FALSE(lie_algebra_member_secant(f, m).member);
          }
  }

  TEST_CASE("secant fallback for a non-smooth norm") {
    const MinkowskiNorm l1 = MinkowskiNorm::from_expression(
        2, Expression::parse("sqrt(a^2)+sqrt(b^2)", component_names(2)));
    const LieAlgebraCheck zero = lie_algebra_member(l1, Matrix::Zero(2, 2));
    CHECK(zero.member);
    const LieAlgebraCheck rotation = lie_algebra_member(l1, make_matrix({{0, -1}, {1, 0}}));
    CHECK_FALSE(rotation.member);
    const LieAlgebraCheck s = lie_algebra_member_secant(MinkowskiNorm::euclidean(2), make_matrix({{0, -1}, {1, 0}}));
    CHECK(s.member);
    CHECK(s.used_secant);
    CHECK(s.tolerance == kSecantTolerance);
  }

  TEST_CASE("norm fields: pullback and scaling") {
    const Fixture fx = section5_example();
    Rng rng(8, 0);
    for (int i = 0; i < 50; ++i) {
      const Vector p = rng.in_box(fx.region);
      const Vector v = rng.unit_vector(2) * rng.uniform(0.1, 3);
      CHECK(fx.norm(p, v) == doctest::Approx(oracle::section5_norm(p[0], v[0], v[1])).epsilon(1e-13));
      CHECK(fx.norm(p, Vector::Zero(2)) == 0.0);
    }
    const NormField scaled = scaled_norm(NormField::uniform(MinkowskiNorm::euclidean(2)),
                                         ScalarField(2, [](JetArgs x) { return exp(x[0]); }));
    CHECK(scaled(make_vector({1, 0}), make_vector({0, 2})) == doctest::Approx(2 * std::exp(1.0)));
    CHECK(is_definite(scaled.at({make_vector({-1, 2})}), sphere_samples(2, 72)));
  }
}
