#include "ptep/model.hpp"

#include <cmath>

#include "ptep/errors.hpp"

namespace ptep::model {

namespace {

constexpr double kTol = 1e-12;

bool near(double x, double y) { return std::abs(x - y) <= kTol * (1.0 + std::max(std::abs(x), std::abs(y))); }

std::string site_pair(std::size_t i, std::size_t j) {
  return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

}  // namespace

std::string to_string(Mode mode) { return mode == Mode::leading ? "leading" : "full"; }

Mode parse_mode(std::string_view text) {
  if (text == "leading") return Mode::leading;
  if (text == "full") return Mode::full;
  throw InvalidInput("mode must be 'leading' or 'full', got '" + std::string(text) + "'");
}

double first_a(Mode mode) { return mode == Mode::leading ? 0.0 : 1.0; }

std::vector<std::string> validate_profile(const GainLossProfile& p, std::optional<double> first) {
  std::vector<std::string> out;
  const std::size_t n = p.a.size();
  if (n == 0) out.emplace_back("profile is empty");
  if (p.b.size() != n) {
    out.push_back("a has " + std::to_string(n) + " entries but b has " + std::to_string(p.b.size()));
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(p.a[i]) || !std::isfinite(p.b[i])) {
      out.push_back("non-finite entry at site " + std::to_string(i + 1));
    }
  }
  if (!out.empty()) return out;

  for (std::size_t i = 0; i < n / 2; ++i) {
    const std::size_t j = n - 1 - i;
    if (!near(p.a[i], p.a[j])) out.push_back("symmetry violation in a at " + site_pair(i, j));
    if (!near(p.b[i], -p.b[j])) out.push_back("antisymmetry violation in b at " + site_pair(i, j));
  }
  if (n % 2 == 1 && std::abs(p.b[n / 2]) > kTol) out.emplace_back("centre gain/loss nonzero");
  if (first && !near(p.a[0], *first)) {
    out.push_back("normalization violated: a_1 = " + std::to_string(p.a[0]) + ", expected " + std::to_string(*first));
  }
  return out;
}

void require_valid(const GainLossProfile& p, std::optional<double> first) {
  auto violations = validate_profile(p, first);
  if (!violations.empty()) throw ValidationError(std::move(violations));
}

GainLossProfile to_double(const ExtProfile& p) {
  GainLossProfile out;
  for (const auto& v : p.a) out.a.push_back(ptep::to_double(v));
  for (const auto& v : p.b) out.b.push_back(ptep::to_double(v));
  return out;
}

ExtProfile to_ext(const GainLossProfile& p) {
  ExtProfile out;
  for (double v : p.a) out.a.emplace_back(v);
  for (double v : p.b) out.b.emplace_back(v);
  return out;
}

ArrayGeometry ArrayGeometry::equispaced(std::size_t n, double epsilon, double cap_b) {
  if (n == 0) throw InvalidInput("geometry needs at least one resonator");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidInput("epsilon must lie in (0, 1)");
  ArrayGeometry g;
  g.epsilon = epsilon;
  g.cap_b = cap_b;
  const double centre = (static_cast<double>(n) + 1.0) / 2.0;
  for (std::size_t i = 1; i <= n; ++i) g.positions.push_back({(static_cast<double>(i) - centre) / epsilon, 0.0, 0.0});
  return g;
}

std::vector<std::string> validate_geometry(const ArrayGeometry& g) {
  std::vector<std::string> out;
  if (g.positions.empty()) out.emplace_back("geometry has no resonators");
  if (!(g.epsilon > 0.0 && g.epsilon < 1.0)) out.emplace_back("epsilon must lie in (0, 1)");
  if (!(g.cap_b > 0.0) || !std::isfinite(g.cap_b)) out.emplace_back("cap_b must be positive");
  for (std::size_t i = 0; i < g.positions.size(); ++i) {
    for (double x : g.positions[i]) {
      if (!std::isfinite(x)) {
        out.push_back("non-finite position at site " + std::to_string(i + 1));
        break;
      }
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (g.positions[i] == g.positions[j]) out.push_back("coincident positions at " + site_pair(j, i));
    }
  }
  return out;
}

std::vector<std::string> validate_constants(const PhysicalConstants& c) {
  std::vector<std::string> out;
  if (!(c.delta > 0.0) || !std::isfinite(c.delta)) out.emplace_back("delta must be positive");
  if (c.a_scale == 0.0 || !std::isfinite(c.a_scale)) out.emplace_back("a_scale must be nonzero");
  if (!(c.volume > 0.0) || !std::isfinite(c.volume)) out.emplace_back("volume must be positive");
  return out;
}

std::vector<std::string> constants_warnings(const PhysicalConstants& c) {
  std::vector<std::string> out;
  if (c.delta > 0.1) out.emplace_back("delta > 0.1: the subwavelength asymptotics assume a small contrast");
  return out;
}

}  // namespace ptep::model
