#include "doctest.h"

#include "holo/runner.hpp"
#include "json.hpp"

using namespace holo;
using nlohmann::json;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

json first_check(const RunResult& r) { return json::parse(r.json)["checks"][0]; }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("box, norm and frame specs") {
    const Box b = parse_box(json::parse(R"({"lower":[-1,null],"upper":[2,3]})"), 2);
    CHECK(b.lower[0] == -1);
    CHECK(std::isinf(b.lower[1]));
    CHECK(b.upper[1] == 3);
    CHECK(code_of([] { parse_box(json::parse(R"({"lower":[1,0],"upper":[0,1]})"), 2); }) == ErrorCode::Config);
    CHECK(code_of([] { parse_box(json::parse(R"({"lower":[0,0],"side":1})"), 2); }) == ErrorCode::Config);

    const MinkowskiNorm r = parse_norm_spec(json::parse(R"({"type":"randers","Q":[[4,0],[0,12]],"beta":[-1,0]})"), 2);
    CHECK(r(make_vector({0, 1})) == doctest::Approx(std::sqrt(12.0)));
    const MinkowskiNorm c = parse_norm_spec(json::parse(R"({"type":"custom","expr":"sqrt(4*a^2+12*b^2)-a"})"), 2);
    CHECK(c(make_vector({1, 0})) == doctest::Approx(1.0));
    CHECK(code_of([] { parse_norm_spec(json::parse(R"({"type":"custom","expr":"a"})"), 2); }) == ErrorCode::Config);
    CHECK(code_of([] { parse_norm_spec(json::parse(R"({"type":"randers","Q":[[1,0],[0,1]],"beta":[2,0]})"), 2); }) ==
          ErrorCode::IndefiniteNorm);
    CHECK(code_of([] { parse_norm_spec(json::parse(R"({"type":"finsler"})"), 2); }) == ErrorCode::Config);
    CHECK(code_of([] { parse_norm_spec(json::parse(R"({"type":"euclidean","extra":1})"), 2); }) == ErrorCode::Config);

    const Frame f = parse_frame(json::parse(R"([["x","1"],["-1",0]])"), 2, Box::whole(2));
    CHECK(max_abs(f.matrix({make_vector({2, 0})}) - make_matrix({{2, -1}, {1, 0}})) == 0.0);
  }

  TEST_CASE("check config: inline example manifold") {
    const std::string cfg = R"({
      "manifold": {
        "dimension": 2,
        "region": {"lower": [-2, -2], "upper": [2, 2]},
        "frame": [["x", "1"], ["-1", "0"]],
        "norm": {"type": "custom", "expr": "sqrt(4*a^2+12*b^2)-a"},
        "connection": {"type": "frame_flat"},
        "alternate_connection": {"type": "coordinate",
          "christoffel": [[[0, -1], [0, 0]], [[0, 0], [0, 0]]]}
      },
      "checks": ["holonomy_invariance", "parallelism_compat", "compalg_criterion", "isometry_group",
                 "berwald_obstruction", "uniqueness"],
      "curves": 10, "vectors": 5, "seed": 7
    })";
    const RunResult r = run_check(cfg, {});
    CHECK(r.pass);
    const json doc = json::parse(r.json);
    CHECK(doc["checks"].size() == 6);
    CHECK(doc["summary"]["torsion_max"].get<double>() == doctest::Approx(1.0));
    for (const auto& c : doc["checks"]) {
      CHECK(c.contains("max_rel_error"));
      CHECK(c["seed"] == 7);
    }
    CHECK(run_check(cfg, {}).json == r.json);
  }

  TEST_CASE("check config: fixture with overrides and failing invariance") {
    RunOverrides o;
    o.curves = 5;
    const RunResult r = run_check(R"({"fixture":"euclidean_gamma_xx","check":"holonomy_invariance"})", o);
    CHECK_FALSE(r.pass);
    CHECK(first_check(r)["samples"] == 5 * 10 * 20);
    const RunResult g = run_check(R"({"fixture":"scaled_euclidean_incompatible","check":"generalized_berwald",
                                      "curves": 5, "output": "report.json"})", {});
    CHECK_FALSE(g.pass);
    CHECK(g.output_path == "report.json");
    CHECK(json::parse(g.json)["summary"]["verdict"] == "not certified");
  }

  TEST_CASE("check config errors") {
    const auto bad = [](const std::string& text) { return code_of([&] { run_check(text, {}); }); };
    CHECK(bad("{") == ErrorCode::Config);
    CHECK(bad(R"({"fixture":"section5","check":"torsion","bogus":1})") == ErrorCode::Config);
    CHECK(bad(R"({"fixture":"section5","check":"no_such_check"})") == ErrorCode::Config);
    CHECK(bad(R"({"fixture":"nope","check":"holonomy_invariance"})") == ErrorCode::Config);
    CHECK(bad(R"({"fixture":"section5"})") == ErrorCode::Config);
    CHECK(bad(R"({"check":"holonomy_invariance"})") == ErrorCode::Config);
    CHECK(bad(R"({"fixture":"section5","check":"holonomy_invariance","step":-1})") == ErrorCode::Config);
    CHECK(bad(R"({"manifold":{"dimension":2,"norm":{"type":"euclidean"},"colour":1},"check":"holonomy_invariance"})") ==
          ErrorCode::Config);
    CHECK(bad(R"({"manifold":{"dimension":2,"norm":{"type":"euclidean"},
                  "connection":{"type":"coordinate","christoffel":[[0]]}},"check":"holonomy_invariance"})") ==
          ErrorCode::Config);
    CHECK(bad(R"({"manifold":{"dimension":2,"norm":{"type":"euclidean"}},"check":"uniqueness"})") ==
          ErrorCode::Config);
  }

  TEST_CASE("three-dimensional inline manifold") {
    const RunResult r = run_check(R"({
      "manifold": {"dimension": 3, "norm": {"type": "randers", "Q": [[2,0,0],[0,1,0],[0,0,3]], "beta": [0.1,0.2,-0.3]},
                   "frame": [["1","0","0"],["z","1","0"],["0","0","1"]]},
      "checks": ["holonomy_invariance", "parallelism_compat"], "curves": 5, "vectors": 6})", {});
    CHECK(r.pass);
  }

  TEST_CASE("synthesize") {
    const std::string cfg = R"cfg({
      "dimension": 2,
      "region": {"lower": [-2, -2], "upper": [2, 2]},
      "cover": [{"domain": {"lower": [null, null], "upper": [1, null]}},
                {"domain": {"lower": [-1, null], "upper": [null, null]},
                 "frame": [["cos(pi/6*(1+tanh(2*x)))", "sin(pi/6*(1+tanh(2*x)))"],
                           ["-sin(pi/6*(1+tanh(2*x)))", "cos(pi/6*(1+tanh(2*x)))"]]}],
      "grid": 3,
      "norm": {"type": "euclidean"},
      "curves": 10
    })cfg";
    const RunResult r = run_synthesize(cfg, {});
    CHECK(r.pass);
    const json doc = json::parse(r.json);
    CHECK(doc["connection"]["points"].size() == 9);
    CHECK(doc["connection"]["christoffel"][0].size() == 2);
    CHECK(doc["torsion_max"].get<double>() > 0.0);
    CHECK(run_synthesize(cfg, {}).json == r.json);
    CHECK(code_of([] {
            run_synthesize(R"({"dimension":2,"region":{"lower":[-2,-2],"upper":[2,2]},
                               "cover":[{"domain":{"lower":[-3,-3],"upper":[0,3]}}]})", {});
          }) == ErrorCode::CoverageGap);
    CHECK(code_of([] { run_synthesize(R"({"dimension":2,"region":{"lower":[-1,-1],"upper":[1,1]},"cover":[]})", {}); }) ==
          ErrorCode::Config);
  }

  TEST_CASE("isometry-group command") {
    const json ex = json::parse(run_isometry_group(R"({"type":"custom","expr":"sqrt(4*a^2+12*b^2)-a"})").json);
    CHECK(ex["count"] == 2);
    CHECK(ex["continuous_family"] == false);
    CHECK(ex["matrices"][1][1][1].get<double>() == doctest::Approx(-1.0));
    const json eu = json::parse(run_isometry_group(R"({"type":"euclidean"})").json);
    CHECK(eu["continuous_family"] == true);
  }

  TEST_CASE("verify reports follow the schema and are reproducible") {
    RunOptions o;
    o.curves = 10;
    const RunResult a = run_verify("section5", o);
    CHECK(a.pass);
    CHECK(run_verify("section5", o).json == a.json);
    const json doc = json::parse(a.json);
    CHECK(doc["summary"]["torsion_max"].get<double>() == 1.0);
    CHECK(doc["summary"]["isometry_count"] == 2);
    CHECK(doc["summary"]["invariance_max_rel"].get<double>() <= 1e-6);
    std::string previous;
    for (const auto& c : doc["checks"]) {
      for (const char* key : {"check", "samples", "max_abs_error", "max_rel_error", "tolerance", "pass", "witness",
                              "seed", "step"})
        CHECK(c.contains(key));
      CHECK(c["check"].get<std::string>() >= previous);
      previous = c["check"].get<std::string>();
    }
    CHECK(a.json.find("1.0000000000000000") == std::string::npos);
    CHECK(code_of([] { run_verify("nope", {}); }) == ErrorCode::Config);
  }
}
