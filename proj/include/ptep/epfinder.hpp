#pragma once

// Exceptional points of order N by characteristic-polynomial matching.
//
// The N - 1 real unknowns follow the resonator order of the independent
// half of the array: b_1, a_2, b_2, ..., a_n, b_n and, for odd N, the centre
// a_{n+1}. a_1 is fixed by the mode (0 leading, 1 full) and
// gamma = (1/N) sum a_i. For N = 4 this is (b_1, c_1, d_1).
//
// Newton runs in double precision; converged points are polished in
// 50-digit arithmetic, where residuals and kernel dimensions are judged.
// An N-fold root moves by (perturbation)^(1/N), so double-precision
// parameters only certify the coalescence to about 1e-16^(1/N).

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ptep/linalg.hpp"
#include "ptep/model.hpp"

namespace ptep::epfinder {

using model::Mode;

struct EpProblem {
  int order = 2;
  Mode mode = Mode::leading;
  double epsilon = 0.0;  // full mode only
};

/// Throws InvalidInput for order < 2 or epsilon outside [0, 1) in full mode.
void validate_problem(const EpProblem& problem);

std::size_t unknown_count(int order);

/// Expands unknowns into the full PT-symmetric profile.
template <class R>
model::BasicProfile<R> profile_from_unknowns(const EpProblem& problem, std::span<const R> unknowns);

/// Inverse of profile_from_unknowns. Throws ValidationError if the profile
/// is not PT-symmetric with the mode's a_1.
std::vector<double> unknowns_from_profile(const EpProblem& problem, const model::GainLossProfile& p);

/// Flips every b. The residual is invariant under this map.
template <class R>
std::vector<R> negate_gain_loss(int order, std::span<const R> unknowns);

/// Canonical representative: the first b with |b| > 1e-12 is positive.
template <class R>
std::vector<R> canonicalize(int order, std::span<const R> unknowns);

/// Ordering key of a family: the a-components, then the b-components.
std::vector<double> family_key(int order, std::span<const double> unknowns);

struct ResidualEvaluation {
  std::vector<double> values;  // Re of coefficient differences, x^0 .. x^(N-2)
  double gamma = 0.0;
  double imaginary_defect = 0.0;  // max |Im| of the same differences
  bool consistent = true;         // imaginary_defect <= 1e-10 (1 + max |coeff|)
};

ResidualEvaluation evaluate_residual(const EpProblem& problem, std::span<const double> unknowns);
std::vector<double> residual(const EpProblem& problem, std::span<const double> unknowns);

/// Same residual in 50-digit arithmetic.
std::vector<ExtReal> residual_ext(const EpProblem& problem, std::span<const ExtReal> unknowns);

struct SolverConfig {
  int max_iterations = 200;
  double step_tolerance = 1e-14;
  double residual_tolerance = 1e-12;
  double backtrack = 0.5;
  double min_step = 1e-6;
  int starts = 500;
  double seed_box = 3.0;
  std::uint64_t rng_seed = 1;
  double dedupe_distance = 1e-6;
  int threads = 1;  // 0 = hardware concurrency
  /// Rerun a failed start fully in 50-digit arithmetic (slow; for large N).
  bool extended_fallback = false;
};

/// Throws InvalidInput for non-positive settings.
void validate_config(const SolverConfig& cfg);

struct EpSolution {
  int order = 0;
  Mode mode = Mode::leading;
  double epsilon = 0.0;
  model::GainLossProfile profile;
  double gamma = 0.0;
  double residual_norm = 0.0;
  int kernel_dim = 0;
  int family_id = -1;
  /// 50-digit unknowns behind `profile`; empty when only doubles are known.
  std::vector<ExtReal> unknowns;
  int iterations = 0;
};

struct NonConvergence {
  std::vector<double> last_iterate;
  double residual_norm = 0.0;
  int iterations = 0;
  std::string reason;
};

using NewtonResult = std::variant<EpSolution, NonConvergence>;

/// Damped Newton with forward-difference Jacobian, then 50-digit polish.
/// Returns an EpSolution when the polished residual is below
/// cfg.residual_tolerance; the kernel dimension is reported, not required.
NewtonResult newton_solve(const EpProblem& problem, std::span<const double> start, const SolverConfig& cfg = {});

/// Multi-start search. Keeps converged solutions with kernel dimension 1,
/// merges those closer than cfg.dedupe_distance (max norm) and numbers the
/// families by family_key. Deterministic for fixed rng_seed and any
/// thread count.
std::vector<EpSolution> enumerate_families(const EpProblem& problem, const SolverConfig& cfg);

/// Continues a leading-mode solution to a full-mode one at epsilon, seeded
/// at (1 + epsilon a_i1, epsilon b_i1). Falls back to smaller epsilon steps
/// when the direct solve fails. epsilon = 0 returns the decoupled array.
NewtonResult refine_full(const EpSolution& leading, double epsilon, const SolverConfig& cfg = {});

/// Closed-form first-order unknowns: order 2 -> {1}; order 3 -> (b_1, c_1)
/// from the cubic c^3 + 27/4 c - 27/8 = 0; order 4 -> the four published
/// (b_1, c_1, d_1) triples to three figures.
std::vector<std::vector<double>> analytic_seed(int order);

/// Real root of c^3 + 27/4 c - 27/8, bracketed by bisection.
double third_order_c1();

enum class Pattern { monotone, alternating, other };

std::string to_string(Pattern p);

/// monotone: the outer half of b has one sign and |b| strictly grows toward
/// the edge. alternating: consecutive b (centre skipped for odd N) differ in
/// sign.
Pattern classify(const model::GainLossProfile& p);

/// Seed for a larger array from a leading-mode solution: half-profiles are
/// interpolated on normalized positions, with the outermost slope
/// extrapolated for non-alternating profiles. b is multiplied by b_scale.
std::vector<double> extend_seed(const EpSolution& from, int target_order, double b_scale = 1.0);

/// Solves at target_order from extend_seed over a few b scales and returns
/// the first accepted solution with the same Pattern as `from`. Steps
/// through intermediate orders when the direct jump fails.
std::optional<EpSolution> continue_family(const EpSolution& from, int target_order, const SolverConfig& cfg = {});

/// 50-digit view of a solution: the stored unknowns if present, else the
/// double profile.
model::ExtProfile exact_profile(const EpSolution& s);
ExtReal exact_gamma(const EpSolution& s);
linalg::ExtComplexMatrix exact_matrix(const EpSolution& s);

double kernel_tolerance(Mode mode);

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<Check> checks;
  bool passed() const;
};

/// Re-derives everything a stored solution claims from its a, b and gamma:
/// coefficient match, trace rule, kernel dimension, PT symmetry, canonical
/// sign and agreement with the stored unknowns.
VerifyReport verify(const EpSolution& s);

}  // namespace ptep::epfinder
