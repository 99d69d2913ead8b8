#pragma once

// Command implementations behind the C API: fixture verification suites,
// config-driven checks, connection synthesis and isometry-group queries.
// Every command returns a deterministic JSON document.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "holo/verification.hpp"

namespace holo {

struct RunOptions {
  double step = kDefaultStep;
  double tolerance = 1e-6;
  int curves = 100;
  int vectors = 20;
  std::uint64_t seed = 42;
};

// Explicitly given command-line values; they take precedence over config files.
struct RunOverrides {
  std::optional<double> step;
  std::optional<double> tolerance;
  std::optional<int> curves;
  std::optional<int> vectors;
  std::optional<std::uint64_t> seed;

  RunOptions apply(RunOptions base) const;
};

struct RunResult {
  bool pass = false;
  std::string json;
  std::string output_path;  // from the config's "output" key, if any
};

nlohmann::ordered_json report_to_json(const CheckReport& report);

// Throws Error(Config) for unknown fixtures.
RunResult run_verify(std::string_view fixture, const RunOptions& options);
// Throws Error(Config) for malformed or schema-invalid configs.
RunResult run_check(std::string_view config_json, const RunOverrides& overrides);
RunResult run_synthesize(std::string_view config_json, const RunOverrides& overrides);
RunResult run_isometry_group(std::string_view norm_spec_json);

// Config building blocks, exposed for tests.
MinkowskiNorm parse_norm_spec(const nlohmann::json& spec, int dimension_hint);
Frame parse_frame(const nlohmann::json& spec, int dimension, const Box& domain);
Box parse_box(const nlohmann::json& spec, int dimension);

}  // namespace holo
