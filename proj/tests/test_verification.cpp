#include "doctest.h"

#include "holo/fixtures.hpp"
#include "holo/verification.hpp"

using namespace holo;

namespace {

Connection gamma_xx() {
  return Connection::coordinate(2, [](const Vector&) {
    Christoffel g(2);
    g(0, 0, 0) = 1.0;
    return g;
  }, Box::whole(2));
}

bool same_report(const CheckReport& a, const CheckReport& b) {
  return a.check == b.check && a.samples == b.samples && a.max_abs_error == b.max_abs_error &&
         a.max_rel_error == b.max_rel_error && a.pass == b.pass && a.witness.values == b.witness.values &&
         a.witness.labels == b.witness.labels;
}

}  // namespace

TEST_SUITE("verification") {
  TEST_CASE("curve generator: regular curves inside the region") {
    const Box box = Box::cube(2, 1.5);
    for (auto family : {CurveFamily::Segments, CurveFamily::Circles, CurveFamily::Sinusoids, CurveFamily::Bezier,
                        CurveFamily::Mixed}) {
      const auto curves = CurveGenerator{50, family, 25, box, {}}.generate();
      CHECK(curves.size() == 25);
      for (const auto& c : curves)
        for (int i = 0; i <= 20; ++i) {
          CHECK(box.contains(c.position(i / 20.0)));
          CHECK(c.velocity(i / 20.0).norm() > 1e-6);
        }
      CHECK(curve_family_from_string(to_string(family)) == family);
    }
    CHECK_THROWS_AS(curve_family_from_string("spirals"), Error);
  }

  TEST_CASE("sample vectors start with the axes and are unit length") {
    Rng rng(51, 0);
    const auto vs = sample_vectors(3, 20, rng);
    CHECK(vs.size() == 20);
    CHECK(vs[0] == make_vector({1, 0, 0}));
    CHECK(vs[1] == make_vector({-1, 0, 0}));
    for (const auto& v : vs) CHECK(v.norm() == doctest::Approx(1.0));
  }

  TEST_CASE("holonomy invariance: example, flat and Gamma_xx") {
    const Fixture fx = section5_example();
    const CurveGenerator gen{52, CurveFamily::Mixed, 20, Box::cube(2, 2), {}};
    const CheckReport ok = check_holonomy_invariance(fx.norm, fx.connection, gen, 1e-6);
    CHECK(ok.pass);
    CHECK(ok.samples == 20 * 10 * 20);
    CHECK(ok.pass == (ok.max_rel_error <= ok.tolerance));

    const Fixture flat = euclidean_flat();
    const CheckReport f = check_holonomy_invariance(flat.norm, flat.connection, gen, 1e-6);
    CHECK(f.pass);
    CHECK(f.max_abs_error <= 1e-12);

    const CurveGenerator x_segment{53, CurveFamily::Segments, 1, Box::cube(2, 2),
                                   {Curve::segment(make_vector({0, 0}), make_vector({1, 0}))}};
    InvarianceOptions at_end;
    at_end.ts = {1.0};
    const CheckReport bad = check_holonomy_invariance(flat.norm, gamma_xx(), x_segment, 1e-6, at_end);
    CHECK_FALSE(bad.pass);
    CHECK(bad.witness.values.at("ratio").front() == doctest::Approx(std::exp(-1.0)).epsilon(1e-10));
    CHECK(bad.witness.values.at("vector") == std::vector<double>{1.0, 0.0});
  }

  TEST_CASE("parallelism compatibility") {
    const Fixture fx = section5_example();
    const CheckReport ok = check_parallelism_compat(fx.norm, fx.parallelism, {54, 100, fx.region, 20, {}}, 1e-9);
    CHECK(ok.pass);
    const Vector p = make_vector({0.3, -0.8});
    const Fixture scaled = scaled_euclidean_incompatible();
    CHECK(check_parallelism_compat(scaled.norm, scaled.parallelism, {55, 1, fx.region, 20, {{p, p}}}, 1e-12).pass);
    const CheckReport bad = check_parallelism_compat(
        scaled.norm, scaled.parallelism, {56, 1, fx.region, 20, {{make_vector({0, 0}), make_vector({1, 0})}}}, 1e-6);
    CHECK_FALSE(bad.pass);
    CHECK(bad.witness.values.at("ratio").front() == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
  }

  TEST_CASE("compalg criterion") {
    const Fixture fx = section5_example();
    CHECK(check_compalg_criterion(fx.norm, fx.parallelism, fx.connection, {57, 100, fx.region}).pass);
    const Fixture blend = rotated_blend();
    CHECK(check_compalg_criterion(blend.norm, blend.parallelism, blend.connection, {58, 50, blend.region}).pass);
    const Connection perturbed(fx.frame, [](const Vector&) {
      Christoffel g(2);
      g(0, 0, 0) = 1.0;
      return g;
    }, Box::whole(2));
    const CheckReport bad = check_compalg_criterion(fx.norm, fx.parallelism, perturbed, {59, 100, fx.region});
    CHECK_FALSE(bad.pass);
  }

  TEST_CASE("berwald obstruction") {
    const Fixture fx = section5_example();
    const auto pts = grid_points(fx.region, 4);
    CHECK(berwald_obstruction(fx.connection, pts) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(berwald_obstruction(Connection::flat(2), pts) == 0.0);
    const Fixture blend = rotated_blend();
    CHECK(berwald_obstruction(blend.connection, grid_points(blend.region, 5)) > 1e-3);
  }

  TEST_CASE("uniqueness") {
    const Fixture fx = section5_example();
    const CurveGenerator gen{60, CurveFamily::Mixed, 10, Box::cube(2, 2), {}};
    const CheckReport self = check_uniqueness(fx.norm, fx.connection, fx.connection, gen, 1e-6);
    CHECK(self.pass);
    CHECK(self.max_abs_error == 0.0);
    CHECK(check_uniqueness(fx.norm, fx.connection, connection_from_covering_parallelism(*fx.cover), gen, 1e-6).pass);

    const Fixture blend = rotated_blend();
    try {
      check_uniqueness(blend.norm, Connection::flat(2), blend.connection, gen, 1e-6);
      FAIL("expected a precondition failure");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Precondition);
    }
    try {
      check_uniqueness(fx.norm, fx.connection, Connection::flat(2), gen, 1e-6);
      FAIL("expected a precondition failure");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Precondition);
    }
  }

  TEST_CASE("generalized Berwald verdicts") {
    VerdictOptions o;
    o.curves = 20;
    const Fixture fx = section5_example();
    const Verdict v = generalized_berwald_verdict(fx.norm, *fx.cover, o);
    CHECK(v.certified);
    CHECK(v.verdict == "generalized Berwald (certified)");
    CHECK(v.torsion_max == doctest::Approx(1.0));
    CHECK(v.berwald_note.rfind("not Berwald", 0) == 0);

    const Fixture flat = euclidean_flat();
    const Verdict f = generalized_berwald_verdict(flat.norm, *flat.cover, o);
    CHECK(f.certified);
    CHECK(f.torsion_max == 0.0);
    CHECK(f.berwald_note.rfind("Berwald", 0) == 0);

    const Fixture scaled = scaled_euclidean_incompatible();
    const Verdict s = generalized_berwald_verdict(scaled.norm, *scaled.cover, o);
    CHECK_FALSE(s.certified);
    CHECK(s.verdict == "not certified");
    bool has_failed_compat = false;
    for (const auto& r : s.reports)
      if (r.check.rfind("parallelism_compat", 0) == 0 && !r.pass) has_failed_compat = !r.witness.values.empty();
    CHECK(has_failed_compat);

    o.curves = 4;
    o.pairs = 10;
    o.invariance.vectors = 4;
    o.invariance.step = 2e-2;
    o.cells_per_axis = 1;
    const Verdict forward = generalized_berwald_verdict(fx.norm, fx.connection, Box::cube(2, 1), o);
    CHECK(forward.certified);
  }

  TEST_CASE("invariant connection and compatible parallelism at fixture scale") {
    // Part 1 direction: invariant connection -> compatible parallelism.
    const Fixture fx = rotated_blend();
    const Box box = Box::cube(2, 0.8);
    const CurveGenerator gen{61, CurveFamily::Mixed, 10, box.shrunk(0.1), {}};
    REQUIRE(check_holonomy_invariance(fx.norm, fx.connection, gen, 1e-6).pass);
    const Parallelism par = parallelism_from_connection(fx.connection, {{box.center()}, box}, 1e-2);
    CHECK(check_parallelism_compat(fx.norm, par, {62, 30, box.shrunk(0.05), 10, {}}, 1e-6).pass);
  }

  TEST_CASE("piecewise gluing bound") {
    const Fixture fx = section5_example();
    const Curve a = Curve::circle(make_vector({0, 0}), make_vector({1, 0}), make_vector({0, 1}), 1.0, 0.0, 2.0);
    const Curve b = Curve::segment(a.position(1.0), make_vector({-1.5, 1.5}));
    InvarianceOptions at_end;
    at_end.ts = {1.0};
    auto err = [&](const Curve& c) {
      return check_holonomy_invariance(fx.norm, fx.connection, {63, CurveFamily::Mixed, 1, Box::cube(2, 2), {c}}, 1e-6,
                                       at_end)
          .max_rel_error;
    };
    CHECK(err(a.followed_by(b)) <= err(a) + err(b) + 1e-9);
  }

  TEST_CASE("reports are deterministic") {
    const Fixture fx = section5_example();
    const CurveGenerator gen{64, CurveFamily::Mixed, 10, Box::cube(2, 2), {}};
    CHECK(same_report(check_holonomy_invariance(fx.norm, fx.connection, gen, 1e-6),
                      check_holonomy_invariance(fx.norm, fx.connection, gen, 1e-6)));
    Rng a(1, 2), b(1, 2), c(1, 3);
    CHECK(a.uniform() == b.uniform());
    CHECK(a.normal() == b.normal());
    CHECK(Rng(1, 2).uniform() != c.uniform());
  }
}
