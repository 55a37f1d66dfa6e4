#include "ptep/capacitance.hpp"

#include <cmath>
#include <numbers>

#include "ptep/errors.hpp"

namespace ptep::capacitance {

linalg::ComplexMatrix build_dilute(const model::GainLossProfile& p, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw InvalidInput("epsilon must lie in [0, 1)");
  model::require_valid(p, std::nullopt);
  return assemble_dilute<Complex>(p.a, p.b, epsilon);
}

linalg::ComplexMatrix build_dilute_general(const model::GainLossProfile& p, const model::ArrayGeometry& g,
                                           double delta, double a_scale) {
  model::require_valid(p, std::nullopt);
  auto violations = model::validate_geometry(g);
  if (!(delta > 0.0)) violations.emplace_back("delta must be positive");
  if (a_scale == 0.0 || !std::isfinite(a_scale)) violations.emplace_back("a_scale must be nonzero");
  if (g.size() != p.size()) {
    violations.push_back("geometry has " + std::to_string(g.size()) + " resonators, profile has " +
                         std::to_string(p.size()));
  }
  if (!violations.empty()) throw ValidationError(std::move(violations));

  const std::size_t n = p.size();
  const double coupling = g.epsilon * g.cap_b / (4.0 * std::numbers::pi);
  linalg::ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Complex w(p.a[i], p.b[i]);
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) {
        m(i, j) = w;
        continue;
      }
      // Scaled separation |z_i - z_j| with z = epsilon * centre.
      double dist_sq = 0.0;
      for (int k = 0; k < 3; ++k) {
        const double d = g.positions[i][k] - g.positions[j][k];
        dist_sq += d * d;
      }
      const double z_dist = g.epsilon * std::sqrt(dist_sq);
      m(i, j) = -w * (coupling / z_dist);
    }
  }
  return m;
}

linalg::ComplexMatrix build_leading_order(std::span<const Complex> first_order) {
  model::GainLossProfile p;
  for (const auto& z : first_order) {
    p.a.push_back(z.real());
    p.b.push_back(z.imag());
  }
  return build_leading_order(p);
}

linalg::ComplexMatrix build_leading_order(const model::GainLossProfile& first_order) {
  model::require_valid(first_order, std::nullopt);
  return assemble_leading<Complex>(first_order.a, first_order.b);
}

}  // namespace ptep::capacitance
