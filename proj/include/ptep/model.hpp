#pragma once

// Value types for PT-symmetric resonator arrays.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ptep/precision.hpp"

namespace ptep::model {

/// leading: first-order coefficients of the dilute expansion (a_1 = 0).
/// full: material parameters at a finite diluteness epsilon (a_1 = 1).
enum class Mode { leading, full };

std::string to_string(Mode mode);
Mode parse_mode(std::string_view text);

/// Normalization of the first real part for a mode: 0 (leading) or 1 (full).
double first_a(Mode mode);

/// Per-resonator material parameters a_i + i b_i, all n entries stored.
template <class R>
struct BasicProfile {
  std::vector<R> a;
  std::vector<R> b;

  std::size_t size() const { return a.size(); }
};

using GainLossProfile = BasicProfile<double>;
using ExtProfile = BasicProfile<ExtReal>;

/// Violations of PT symmetry, centre condition and, when given, the
/// normalization a_1 = first. Empty iff the profile is valid (tolerance 1e-12).
std::vector<std::string> validate_profile(const GainLossProfile& p, std::optional<double> first = 1.0);

/// Throws ValidationError when validate_profile reports anything.
void require_valid(const GainLossProfile& p, std::optional<double> first = 1.0);

template <class R>
BasicProfile<R> scale_gain_loss(const BasicProfile<R>& p, const R& tau) {
  BasicProfile<R> out = p;
  for (auto& v : out.b) v *= tau;
  return out;
}

GainLossProfile to_double(const ExtProfile& p);
ExtProfile to_ext(const GainLossProfile& p);

using Point = std::array<double, 3>;

struct ArrayGeometry {
  std::vector<Point> positions;  // resonator centres, physical units
  double epsilon = 0.1;
  double cap_b = kDefaultCapB;

  static constexpr double kDefaultCapB = 12.566370614359172;  // 4 pi

  std::size_t size() const { return positions.size(); }

  /// Centres at ((i - (n+1)/2) / epsilon, 0, 0), i = 1..n.
  static ArrayGeometry equispaced(std::size_t n, double epsilon, double cap_b = kDefaultCapB);
};

std::vector<std::string> validate_geometry(const ArrayGeometry& g);

struct PhysicalConstants {
  double delta = 1.0 / 5000.0;
  double a_scale = 1.0;
  double volume = 4.18879020478639098;  // unit sphere
};

std::vector<std::string> validate_constants(const PhysicalConstants& c);

/// Non-fatal remarks, e.g. a contrast too large for the asymptotics.
std::vector<std::string> constants_warnings(const PhysicalConstants& c);

}  // namespace ptep::model
