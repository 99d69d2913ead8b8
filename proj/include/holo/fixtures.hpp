#pragma once

// Built-in manifolds: the planar Randers example with its frame parallelism,
// plus control cases used across the property and acceptance suites.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "holo/connections.hpp"
#include "holo/norms.hpp"
#include "holo/parallelism.hpp"

namespace holo {

// Where an expected value comes from: a published closed form, an
// independent hand or oracle derivation, or an identity of the construction.
enum class Origin { Reference, Derived, Identity };

const char* to_string(Origin origin);

struct ExpectedValue {
  std::string key;
  Origin origin;
  std::vector<double> value;
  double tolerance;
};

struct Fixture {
  std::string name;
  std::string description;
  Box region;  // sampling region inside the chart
  Frame frame;
  MinkowskiNorm model_norm;  // f on R^n, F = f o coframe
  NormField norm;
  Connection connection;
  Parallelism parallelism;
  std::optional<CoveringParallelism> cover;
  bool expect_holonomy_invariant = true;
  bool expect_compatible = true;
  std::vector<ExpectedValue> expected;

  int dimension() const { return frame.dimension(); }
  const ExpectedValue& expectation(std::string_view key) const;
};

// E_1 = x d/dx + d/dy, E_2 = -d/dx on R^2, f = sqrt(4a^2 + 12b^2) - a,
// F = f o (E^1, E^2), nabla E_1 = nabla E_2 = 0.
Fixture section5_example();
Fixture euclidean_flat();
// F_p(v) = e^x |v| with the translation parallelism: incompatible.
Fixture scaled_euclidean_incompatible();
// Euclidean norm; translation parallelism on x < 1 and a frame rotated by
// theta(x) = (pi/3) (1 + tanh 2x) / 2 on x > -1, blended by a partition of unity.
Fixture rotated_blend();
// Euclidean norm with the coordinate connection Gamma^x_{xx} = 1.
Fixture euclidean_gamma_xx();

std::vector<std::string> fixture_names();
// Throws Error(Config) for unknown names.
Fixture fixture_by_name(std::string_view name);

// Frame/coframe duality, definiteness of F at sampled points, declared
// frame symbols; throws Error(InvalidArgument) on failure.
void validate_fixture(const Fixture& fixture);

// The rotated frame used by rotated_blend.
Frame rotated_frame(double max_angle);

}  // namespace holo
