#pragma once

// Sampled numerical certification of holonomy invariance, parallelism
// compatibility, the Lie-algebra criterion for (nabla P)_v, torsion,
// uniqueness of the compatible connection and generalized Berwald verdicts.

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "holo/connections.hpp"
#include "holo/constructions.hpp"
#include "holo/norms.hpp"
#include "holo/parallelism.hpp"
#include "holo/transport.hpp"

namespace holo {

struct Witness {
  std::map<std::string, std::vector<double>> values;
  std::map<std::string, std::string> labels;
};

struct CheckReport {
  std::string check;
  int samples = 0;
  double max_abs_error = 0.0;
  double max_rel_error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  Witness witness;
  std::uint64_t seed = 0;
  double step = 0.0;

  void finalize() { pass = max_rel_error <= tolerance; }
};

// Deterministic generator: mt19937_64 with explicit conversions so that
// streams do not depend on the standard library's distributions.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream);
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  Vector unit_vector(int n);
  Vector in_box(const Box& box);

 private:
  std::mt19937_64 engine_;
};

enum class CurveFamily { Segments, Circles, Sinusoids, Bezier, Mixed };

const char* to_string(CurveFamily family);
CurveFamily curve_family_from_string(const std::string& name);

struct CurveGenerator {
  std::uint64_t seed = 42;
  CurveFamily family = CurveFamily::Mixed;
  int count = 100;
  Box region;
  // When non-empty these curves are used instead of random ones.
  std::vector<Curve> fixed;

  std::vector<Curve> generate() const;
};

// Unit vectors: the +-coordinate axes first, then random directions.
std::vector<Vector> sample_vectors(int n, int count, Rng& rng);

inline constexpr double kRelativeFloor = 1e-12;

struct InvarianceOptions {
  int vectors = 20;
  double step = kDefaultStep;
  std::vector<double> ts = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
};

// max |F(P_gamma^t v) - F(v)| / max(F(v), 1e-12) over curves, t and vectors.
CheckReport check_holonomy_invariance(const NormField& norm, const Connection& conn, const CurveGenerator& gen,
                                      double tol, const InvarianceOptions& options = {});

struct PairSampler {
  std::uint64_t seed = 42;
  int count = 100;
  Box region;
  int vectors = 20;
  std::vector<std::pair<Vector, Vector>> fixed;

  std::vector<std::pair<Vector, Vector>> generate() const;
};

// max |F_q(P(p, q) v) - F_p(v)| / max(F_p(v), 1e-12); the witness carries
// the ratio F_q(P v) / F_p(v) at the worst sample.
CheckReport check_parallelism_compat(const NormField& norm, const Parallelism& parallelism,
                                     const PairSampler& pairs, double tol);

struct TangentSampler {
  std::uint64_t seed = 42;
  int count = 100;
  Box region;
};

// Runs lie_algebra_member(F_p, (nabla P)_v) over sampled v; tolerance is the
// membership tolerance used (1e-8, or 1e-6 when the secant test was needed).
CheckReport check_compalg_criterion(const NormField& norm, const Parallelism& parallelism, const Connection& conn,
                                    const TangentSampler& samples);

// Max coordinate sup-norm of T(E_i, E_j) over points and pairs of the
// connection's frame.
double berwald_obstruction(const Connection& conn, const std::vector<Vector>& points);

// Entrywise max |P_gamma^t - Pbar_gamma^t|. Requires a planar norm with a
// finite isometry group at the first curve's start and both connections
// passing holonomy invariance; otherwise throws Error(Precondition).
CheckReport check_uniqueness(const NormField& norm, const Connection& first, const Connection& second,
                             const CurveGenerator& gen, double tol, const InvarianceOptions& options = {});

struct Verdict {
  bool certified = false;
  std::string verdict;
  std::string berwald_note;
  double torsion_max = 0.0;
  std::vector<CheckReport> reports;
};

struct VerdictOptions {
  double tol = 1e-6;
  std::uint64_t seed = 42;
  int curves = 100;
  int pairs = 50;
  InvarianceOptions invariance;
  int cells_per_axis = 2;
};

Verdict generalized_berwald_verdict(const NormField& norm, const CoveringParallelism& cover,
                                    const VerdictOptions& options = {});
Verdict generalized_berwald_verdict(const NormField& norm, const Connection& conn, const Box& region,
                                    const VerdictOptions& options = {});

}  // namespace holo
