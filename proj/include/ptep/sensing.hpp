#pragma once

// Eigenvalue splitting under small perturbations of a matrix at an
// exceptional point. All eigenvalue work is done in 50-digit arithmetic so
// the measured shifts are not swamped by root-finder noise near the EP.

#include <cstddef>
#include <optional>
#include <ostream>
#include <vector>

#include "ptep/fit.hpp"
#include "ptep/linalg.hpp"

namespace ptep::sensing {

struct PerturbationSpec {
  enum class Kind { diagonal_site, full_matrix };

  Kind kind = Kind::diagonal_site;
  std::size_t site = 1;                          // 1-based, diagonal_site only
  std::optional<linalg::ComplexMatrix> direction;  // unit Frobenius norm, full_matrix only
  std::vector<double> sizes;                     // strictly decreasing

  static PerturbationSpec diagonal(std::size_t site, std::vector<double> sizes);
  static PerturbationSpec full(linalg::ComplexMatrix direction, std::vector<double> sizes);
};

/// points sizes log-spaced from s_max down to s_min.
std::vector<double> log_grid(double s_min, double s_max, int points);

/// Empty iff spec is usable on an n x n matrix: sizes positive, strictly
/// decreasing and spanning at least three decades, site in range, direction
/// of unit norm.
std::vector<std::string> validate_spec(const PerturbationSpec& spec, std::size_t n);

inline constexpr double kShiftFloor = 1e-12;

struct SplittingFit {
  std::vector<double> sizes;
  std::vector<double> max_shift;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t used_points = 0;
};

/// For each size s, perturbs the matrix and records the largest eigenvalue
/// displacement: max |lambda - gamma| when gamma is given, otherwise the
/// largest move of a matched unperturbed eigenvalue (regular points).
/// Shifts below kShiftFloor are left out of the log-log fit; fewer than four
/// remaining points raise InsufficientData.
SplittingFit split(const linalg::ExtComplexMatrix& m, const std::optional<ExtComplex>& gamma,
                   const PerturbationSpec& spec, int threads = 1);
SplittingFit split(const linalg::ComplexMatrix& m, std::optional<double> gamma, const PerturbationSpec& spec,
                   int threads = 1);

struct SiteSplitting {
  std::size_t site = 0;  // 1-based
  double constant = 0.0;
};

inline constexpr double kRankingSize = 1e-6;

/// max_shift / s^(1/order) at s = kRankingSize for every diagonal site,
/// sorted by descending constant (ties by site).
std::vector<SiteSplitting> site_ranking(const linalg::ExtComplexMatrix& m, const ExtComplex& gamma, int order);
std::vector<SiteSplitting> site_ranking(const linalg::ComplexMatrix& m, double gamma, int order);

/// s,max_shift rows (17 significant digits) and a final comment line
/// holding the JSON summary {slope, intercept, r_squared, order}.
void write_csv(std::ostream& os, const SplittingFit& fit, int order);

}  // namespace ptep::sensing
