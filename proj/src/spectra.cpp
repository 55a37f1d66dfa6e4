#include "ptep/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include "ptep/capacitance.hpp"
#include "ptep/errors.hpp"
#include "ptep/parallel.hpp"

namespace ptep::spectra {

std::vector<double> tau_grid(double tau_min, double tau_max, int steps) {
  if (steps < 1) throw InvalidInput("steps must be >= 1");
  if (!std::isfinite(tau_min) || !std::isfinite(tau_max) || tau_min > tau_max) {
    throw InvalidInput("need finite tau_min <= tau_max");
  }
  if (steps == 1) return {tau_min};
  std::vector<double> out;
  for (int k = 0; k < steps; ++k) {
    out.push_back(tau_min + (tau_max - tau_min) * static_cast<double>(k) / static_cast<double>(steps - 1));
  }
  out.back() = tau_max;
  return out;
}

std::vector<std::size_t> match_paths(std::span<const Complex> prev, std::span<const Complex> next) {
  const std::size_t n = prev.size();
  if (next.size() != n) throw InvalidInput("match_paths: sizes differ");
  struct Pair {
    double dist;
    std::size_t i;
    std::size_t j;
  };
  std::vector<Pair> pairs;
  pairs.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) pairs.push_back({std::abs(prev[i] - next[j]), i, j});
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) {
    if (x.dist != y.dist) return x.dist < y.dist;
    if (x.i != y.i) return x.i < y.i;
    return x.j < y.j;
  });
  std::vector<std::size_t> out(n, n);
  std::vector<bool> used(n, false);
  std::size_t assigned = 0;
  for (const auto& p : pairs) {
    if (assigned == n) break;
    if (out[p.i] != n || used[p.j]) continue;
    out[p.i] = p.j;
    used[p.j] = true;
    ++assigned;
  }
  return out;
}

Trajectory sweep(const model::ExtProfile& profile, model::Mode mode, double epsilon, std::span<const double> taus,
                 int threads) {
  model::require_valid(model::to_double(profile), std::nullopt);
  if (taus.empty()) throw InvalidInput("sweep needs at least one tau");
  for (std::size_t k = 0; k < taus.size(); ++k) {
    if (!std::isfinite(taus[k])) throw InvalidInput("tau values must be finite");
    if (k > 0 && taus[k] < taus[k - 1]) throw InvalidInput("tau values must be sorted ascending");
  }
  if (mode == model::Mode::full && !(epsilon >= 0.0 && epsilon < 1.0)) {
    throw InvalidInput("epsilon must lie in [0, 1)");
  }

  Trajectory traj;
  traj.taus.assign(taus.begin(), taus.end());
  traj.eigenvalues.resize(taus.size());
  traj.coalescence_gap.resize(taus.size());
  std::vector<char> converged(taus.size(), 0);
  parallel_for(taus.size(), threads, [&](std::size_t k) {
    const auto scaled = model::scale_gain_loss(profile, ExtReal(taus[k]));
    const auto m = capacitance::assemble<ExtComplex>(mode, scaled, ExtReal(epsilon));
    const auto spec = linalg::eigenvalues(m);
    traj.coalescence_gap[k] = to_double(linalg::spectral_diameter<ExtComplex>(spec.eigenvalues));
    for (const auto& z : spec.eigenvalues) traj.eigenvalues[k].push_back(to_complex(z));
    converged[k] = spec.converged ? 1 : 0;
  });
  traj.converged.assign(converged.begin(), converged.end());

  for (std::size_t k = 1; k < taus.size(); ++k) {
    const auto perm = match_paths(traj.eigenvalues[k - 1], traj.eigenvalues[k]);
    std::vector<Complex> ordered;
    for (std::size_t i : perm) ordered.push_back(traj.eigenvalues[k][i]);
    traj.eigenvalues[k] = std::move(ordered);
  }
  return traj;
}

Trajectory sweep(const model::GainLossProfile& profile, model::Mode mode, double epsilon,
                 std::span<const double> taus, int threads) {
  return sweep(model::to_ext(profile), mode, epsilon, taus, threads);
}

LineFit coalescence_fit(const Trajectory& traj, double near, double far) {
  if (!(near > 0.0) || !(far > near)) throw InvalidInput("need 0 < near < far");
  if (traj.taus.empty() || traj.taus.front() > 1.0 || traj.taus.back() < 1.0) {
    throw InsufficientData("trajectory does not bracket tau = 1");
  }
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t k = 0; k < traj.taus.size(); ++k) {
    const double d = std::abs(traj.taus[k] - 1.0);
    if (d < near * (1.0 - 1e-9) || d > far * (1.0 + 1e-9)) continue;
    const double gap = traj.coalescence_gap[k];
    if (!(gap > 0.0) || !std::isfinite(gap)) continue;
    x.push_back(std::log(d));
    y.push_back(std::log(gap));
  }
  if (x.size() < 4) {
    std::ostringstream msg;
    msg << "need at least 4 sweep points with " << near << " <= |tau - 1| <= " << far << ", found " << x.size();
    throw InsufficientData(msg.str());
  }
  return fit_line(x, y);
}

double coalescence_exponent(const Trajectory& traj, int order, double near, double far) {
  if (order < 2) throw InvalidInput("order must be >= 2");
  if (traj.order() != static_cast<std::size_t>(order)) throw InvalidInput("trajectory order differs from order");
  return coalescence_fit(traj, near, far).slope;
}

FrequencyMap to_frequencies(std::span<const Complex> gammas, const model::PhysicalConstants& c) {
  auto violations = model::validate_constants(c);
  if (!violations.empty()) throw ValidationError(std::move(violations));
  FrequencyMap out;
  out.constants = c;
  const double scale = 4.0 * std::numbers::pi * c.a_scale * c.delta / c.volume;
  for (const auto& g : gammas) {
    if (!std::isfinite(g.real()) || !std::isfinite(g.imag())) throw InvalidInput("gamma must be finite");
    out.gammas.push_back(g);
    out.omegas.push_back(std::sqrt(scale * g));
    out.resonant.push_back(g != Complex(0.0, 0.0));
  }
  return out;
}

std::vector<Complex> full_from_leading(std::span<const Complex> lambdas, double epsilon) {
  std::vector<Complex> out;
  for (const auto& l : lambdas) out.push_back(1.0 + epsilon * l);
  return out;
}

void write_csv(std::ostream& os, const Trajectory& traj, const std::optional<CsvFrequencies>& freq) {
  const std::size_t n = traj.order();
  os << "tau";
  for (std::size_t i = 1; i <= n; ++i) os << ",re_" << i << ",im_" << i;
  os << ",gap";
  if (freq) {
    for (std::size_t i = 1; i <= n; ++i) os << ",omega_re_" << i << ",omega_im_" << i;
  }
  os << '\n';
  const auto old_flags = os.flags();
  const auto old_precision = os.precision(12);
  os.unsetf(std::ios::floatfield);
  for (std::size_t k = 0; k < traj.taus.size(); ++k) {
    os << traj.taus[k];
    for (const auto& z : traj.eigenvalues[k]) os << ',' << z.real() << ',' << z.imag();
    os << ',' << traj.coalescence_gap[k];
    if (freq) {
      const auto gammas = freq->leading_epsilon ? full_from_leading(traj.eigenvalues[k], *freq->leading_epsilon)
                                                : traj.eigenvalues[k];
      const auto fm = to_frequencies(gammas, freq->constants);
      for (const auto& w : fm.omegas) os << ',' << w.real() << ',' << w.imag();
    }
    os << '\n';
  }
  os.precision(old_precision);
  os.flags(old_flags);
}

}  // namespace ptep::spectra
