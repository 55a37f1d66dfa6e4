#pragma once

// Dense complex linear algebra for the small matrices of the resonator
// model (N <= 32). Eigenvalues come from the characteristic polynomial,
// which the exceptional-point search needs anyway.
//
// Every routine is a template over the complex scalar and is instantiated
// for Complex (double) and ExtComplex (50 digits).

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ptep/errors.hpp"
#include "ptep/precision.hpp"

namespace ptep::linalg {

/// Square n x n matrix, row-major, n >= 1.
template <class C>
class BasicMatrix {
 public:
  using value_type = C;

  explicit BasicMatrix(std::size_t n) : n_(n), entries_(n * n, C(0)) {
    if (n == 0) throw InvalidInput("matrix dimension must be at least 1");
  }

  BasicMatrix(std::size_t n, std::vector<C> entries) : n_(n), entries_(std::move(entries)) {
    if (n == 0) throw InvalidInput("matrix dimension must be at least 1");
    if (entries_.size() != n * n) {
      throw InvalidInput("matrix needs " + std::to_string(n * n) + " entries, got " +
                         std::to_string(entries_.size()));
    }
    if (!all_finite()) throw InvalidInput("matrix has non-finite entries");
  }

  static BasicMatrix identity(std::size_t n) {
    BasicMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = C(1);
    return m;
  }

  std::size_t size() const noexcept { return n_; }

  C& operator()(std::size_t i, std::size_t j) { return entries_[i * n_ + j]; }
  const C& operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }

  std::span<const C> entries() const noexcept { return entries_; }

  C trace() const {
    C t(0);
    for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
  }

  bool all_finite() const {
    for (const auto& z : entries_) {
      if (!is_finite_complex(z)) return false;
    }
    return true;
  }

  /// this - shift * I
  BasicMatrix shifted(const C& shift) const {
    BasicMatrix m = *this;
    for (std::size_t i = 0; i < n_; ++i) m(i, i) -= shift;
    return m;
  }

 private:
  std::size_t n_;
  std::vector<C> entries_;
};

template <class C>
BasicMatrix<C> operator*(const BasicMatrix<C>& x, const BasicMatrix<C>& y);

/// Polynomial with coefficients in ascending degree order.
template <class C>
struct BasicPolynomial {
  std::vector<C> coeffs;

  std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
  C operator()(const C& x) const;

  /// prod_i (x - roots[i]), monic.
  static BasicPolynomial from_roots(std::span<const C> roots);
};

template <class C>
struct BasicSpectrum {
  std::vector<C> eigenvalues;
  bool converged = false;
  int iterations = 0;
};

using ComplexMatrix = BasicMatrix<Complex>;
using ExtComplexMatrix = BasicMatrix<ExtComplex>;
using Polynomial = BasicPolynomial<Complex>;
using ExtPolynomial = BasicPolynomial<ExtComplex>;
using Spectrum = BasicSpectrum<Complex>;
using ExtSpectrum = BasicSpectrum<ExtComplex>;

inline constexpr int kRootIterationCap = 500;

/// Coefficients of det(m - xI) in ascending order via the Faddeev-LeVerrier
/// recursion. The leading coefficient is exactly (-1)^n.
template <class C>
BasicPolynomial<C> char_poly(const BasicMatrix<C>& m);

/// All roots by Aberth-Ehrlich simultaneous iteration. A root stops moving
/// once |p(z)| is within the rounding bound of Horner evaluation at z;
/// `converged` is false if the iteration cap is reached first.
/// Throws InvalidInput for the zero polynomial or a constant.
template <class C>
BasicSpectrum<C> poly_roots(const BasicPolynomial<C>& p, int max_iterations = kRootIterationCap);

template <class C>
BasicSpectrum<C> eigenvalues(const BasicMatrix<C>& m);

/// n - rank(m - shift I), rank from Householder QR with column pivoting.
/// A pivot counts as zero when |pivot| < rel_tol * |first pivot|.
template <class C>
int kernel_dimension(const BasicMatrix<C>& m, const C& shift, double rel_tol = 1e-8);

/// LU with partial pivoting.
template <class C>
C determinant(const BasicMatrix<C>& m);

template <class To, class From>
BasicMatrix<To> convert(const BasicMatrix<From>& m) {
  std::vector<To> out;
  out.reserve(m.entries().size());
  for (const auto& z : m.entries()) {
    if constexpr (std::is_same_v<To, From>) {
      out.push_back(z);
    } else if constexpr (std::is_same_v<To, Complex>) {
      out.push_back(to_complex(z));
    } else {
      out.push_back(from_complex<To>(z));
    }
  }
  return BasicMatrix<To>(m.size(), std::move(out));
}

/// Groups roots lying within tol * (1 + |root|) of each other (single
/// linkage). Each group lists indices into `roots`, ascending.
std::vector<std::vector<std::size_t>> root_clusters(std::span<const Complex> roots, double tol = 1e-4);

/// Largest pairwise distance within a set of eigenvalues.
template <class C>
real_t<C> spectral_diameter(std::span<const C> values);

}  // namespace ptep::linalg
