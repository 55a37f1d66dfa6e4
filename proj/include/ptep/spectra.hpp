#pragma once

// Eigenvalue paths under gain/loss scaling and the map from capacitance
// eigenvalues to resonant frequencies.

#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "ptep/fit.hpp"
#include "ptep/model.hpp"

namespace ptep::spectra {

struct Trajectory {
  std::vector<double> taus;
  std::vector<std::vector<Complex>> eigenvalues;  // [step][path]
  std::vector<double> coalescence_gap;            // spectral diameter per step
  std::vector<bool> converged;

  std::size_t order() const { return eigenvalues.empty() ? 0 : eigenvalues.front().size(); }
};

/// steps points from tau_min to tau_max inclusive; one point when steps = 1.
std::vector<double> tau_grid(double tau_min, double tau_max, int steps);

/// Spectrum of the matrix of scale_gain_loss(profile, tau) for every tau,
/// paths matched between steps by greedy nearest pairing. Arithmetic is
/// 50-digit; pass an ExtProfile to keep an exceptional point exact.
/// epsilon is ignored in leading mode.
Trajectory sweep(const model::ExtProfile& profile, model::Mode mode, double epsilon, std::span<const double> taus,
                 int threads = 1);
Trajectory sweep(const model::GainLossProfile& profile, model::Mode mode, double epsilon,
                 std::span<const double> taus, int threads = 1);

/// Greedy bijection: result[i] is the index in `next` paired with prev[i].
std::vector<std::size_t> match_paths(std::span<const Complex> prev, std::span<const Complex> next);

inline constexpr double kFitNear = 0.01;
inline constexpr double kFitFar = 0.1;

/// log(gap) against log|tau - 1| over near <= |tau - 1| <= far.
/// Throws InsufficientData with fewer than four usable points.
LineFit coalescence_fit(const Trajectory& traj, double near = kFitNear, double far = kFitFar);
double coalescence_exponent(const Trajectory& traj, int order, double near = kFitNear, double far = kFitFar);

struct FrequencyMap {
  std::vector<Complex> gammas;
  std::vector<Complex> omegas;
  std::vector<bool> resonant;  // false where gamma = 0
  model::PhysicalConstants constants;
};

/// omega = sqrt(4 pi a_scale delta gamma / volume), principal branch.
FrequencyMap to_frequencies(std::span<const Complex> gammas, const model::PhysicalConstants& c);

/// Capacitance eigenvalues of the full array from first-order ones:
/// 1 + epsilon * lambda.
std::vector<Complex> full_from_leading(std::span<const Complex> lambdas, double epsilon);

struct CsvFrequencies {
  model::PhysicalConstants constants;
  /// Set for leading-mode trajectories to map through full_from_leading.
  std::optional<double> leading_epsilon;
};

/// Header tau,re_1,im_1,...,re_N,im_N,gap (plus omega columns when
/// requested), 12 significant digits.
void write_csv(std::ostream& os, const Trajectory& traj, const std::optional<CsvFrequencies>& freq = std::nullopt);

}  // namespace ptep::spectra
