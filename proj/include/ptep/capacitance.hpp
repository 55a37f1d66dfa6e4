#pragma once

// Weighted capacitance matrices of a dilute resonator array.

#include <cstdlib>
#include <span>

#include "ptep/linalg.hpp"
#include "ptep/model.hpp"

namespace ptep::capacitance {

/// (i,i) = a_i + i b_i, (i,j) = -(a_i + i b_i) epsilon / |i - j|.
/// Profile must be PT-symmetric; any a_1 is accepted.
linalg::ComplexMatrix build_dilute(const model::GainLossProfile& p, double epsilon);

/// Lemma-level capacitance for arbitrary centres: diagonal cap_b,
/// off-diagonal -cap_b^2 / (4 pi |x_i - x_j|), weighted by a_i + i b_i and
/// divided by cap_b. Contrast and a_scale enter the weights only through
/// their ratio, so they cancel; both are still validated.
linalg::ComplexMatrix build_dilute_general(const model::GainLossProfile& p, const model::ArrayGeometry& g,
                                           double delta, double a_scale);

/// Diagonal first_order, off-diagonal -1/|i - j|.
linalg::ComplexMatrix build_leading_order(std::span<const Complex> first_order);
linalg::ComplexMatrix build_leading_order(const model::GainLossProfile& first_order);

/// Unchecked assemblers shared by the builders and the solver.
template <class C>
linalg::BasicMatrix<C> assemble_dilute(std::span<const real_t<C>> a, std::span<const real_t<C>> b,
                                       const real_t<C>& epsilon) {
  using R = real_t<C>;
  const std::size_t n = a.size();
  linalg::BasicMatrix<C> m(n);
  for (std::size_t i = 0; i < n; ++i) {
    const C w(a[i], b[i]);
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) {
        m(i, j) = w;
      } else {
        const int d = std::abs(static_cast<int>(i) - static_cast<int>(j));
        m(i, j) = -w * C(epsilon / R(d));
      }
    }
  }
  return m;
}

template <class C>
linalg::BasicMatrix<C> assemble_leading(std::span<const real_t<C>> a, std::span<const real_t<C>> b) {
  using R = real_t<C>;
  const std::size_t n = a.size();
  linalg::BasicMatrix<C> m(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) {
        m(i, j) = C(a[i], b[i]);
      } else {
        const int d = std::abs(static_cast<int>(i) - static_cast<int>(j));
        m(i, j) = C(R(-1) / R(d));
      }
    }
  }
  return m;
}

/// Matrix of a profile in the given mode: leading -> assemble_leading,
/// full -> assemble_dilute at epsilon.
template <class C>
linalg::BasicMatrix<C> assemble(model::Mode mode, const model::BasicProfile<real_t<C>>& p,
                                const real_t<C>& epsilon) {
  if (mode == model::Mode::leading) return assemble_leading<C>(p.a, p.b);
  return assemble_dilute<C>(p.a, p.b, epsilon);
}

}  // namespace ptep::capacitance
