#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "ptep/epfinder.hpp"
#include "ptep/linalg.hpp"
#include "ptep/model.hpp"

namespace testing {

using ptep::Complex;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  Complex complex(double half_width) { return {uniform(-half_width, half_width), uniform(-half_width, half_width)}; }

  Complex in_unit_disc() {
    const double r = std::sqrt(uniform(0.0, 1.0));
    const double t = uniform(0.0, 2.0 * M_PI);
    return std::polar(r, t);
  }

  ptep::linalg::ComplexMatrix matrix(std::size_t n, double half_width = 1.0) {
    std::vector<Complex> e(n * n);
    for (auto& z : e) z = complex(half_width);
    return ptep::linalg::ComplexMatrix(n, std::move(e));
  }

  /// PT-symmetric profile with a_1 = first and entries in a modest box.
  ptep::model::GainLossProfile profile(std::size_t n, double first = 1.0) {
    ptep::model::GainLossProfile p;
    p.a.assign(n, 0.0);
    p.b.assign(n, 0.0);
    for (std::size_t i = 0; i < n / 2; ++i) {
      const double a = i == 0 ? first : uniform(0.5, 2.0);
      const double b = uniform(-1.0, 1.0);
      p.a[i] = a;
      p.a[n - 1 - i] = a;
      p.b[i] = b;
      p.b[n - 1 - i] = -b;
    }
    if (n % 2 == 1) p.a[n / 2] = n == 1 ? first : uniform(0.5, 2.0);
    return p;
  }

 private:
  std::mt19937_64 rng_;
};

/// Largest distance under greedy nearest pairing of two multisets.
inline double matched_distance(std::vector<Complex> x, std::vector<Complex> y) {
  double worst = 0.0;
  while (!x.empty()) {
    std::size_t bi = 0;
    std::size_t bj = 0;
    double best = std::abs(x[0] - y[0]);
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (std::size_t j = 0; j < y.size(); ++j) {
        if (std::abs(x[i] - y[j]) < best) {
          best = std::abs(x[i] - y[j]);
          bi = i;
          bj = j;
        }
      }
    }
    worst = std::max(worst, best);
    x.erase(x.begin() + static_cast<long>(bi));
    y.erase(y.begin() + static_cast<long>(bj));
  }
  return worst;
}

inline std::vector<Complex> to_complex(const std::vector<ptep::ExtComplex>& v) {
  std::vector<Complex> out;
  for (const auto& z : v) out.push_back(ptep::to_complex(z));
  return out;
}

inline const std::vector<ptep::epfinder::EpSolution>& leading_families(int order) {
  static std::vector<std::vector<ptep::epfinder::EpSolution>> cache(9);
  auto& slot = cache.at(static_cast<std::size_t>(order));
  if (slot.empty()) {
    ptep::epfinder::SolverConfig cfg;
    cfg.threads = 0;
    slot = ptep::epfinder::enumerate_families({order, ptep::model::Mode::leading, 0.0}, cfg);
  }
  return slot;
}

/// Family whose (b1, c1, d1) is closest to the given triple.
inline const ptep::epfinder::EpSolution& quad_family(double b1, double c1, double d1) {
  const auto& all = leading_families(4);
  const ptep::epfinder::EpSolution* best = &all.front();
  double dist = 1e300;
  for (const auto& s : all) {
    const double dd = std::abs(s.profile.b[0] - b1) + std::abs(s.profile.a[1] - c1) + std::abs(s.profile.b[1] - d1);
    if (dd < dist) {
      dist = dd;
      best = &s;
    }
  }
  return *best;
}

}  // namespace testing
