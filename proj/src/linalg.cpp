#include "ptep/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/constants/constants.hpp>

namespace ptep::linalg {

namespace {

template <class C>
real_t<C> modulus(const C& z) {
  using std::abs;
  return abs(z);
}

template <class C>
real_t<C> modulus_sq(const C& z) {
  return z.real() * z.real() + z.imag() * z.imag();
}

template <class C>
bool lexicographic_less(const C& x, const C& y) {
  if (x.real() != y.real()) return x.real() < y.real();
  return x.imag() < y.imag();
}

// Value, derivative and a running bound for sum |c_k| |z|^k.
template <class C>
void horner(std::span<const C> c, const C& z, C& value, C& derivative, real_t<C>& magnitude) {
  const std::size_t n = c.size() - 1;
  const real_t<C> az = modulus(z);
  value = c[n];
  derivative = C(0);
  magnitude = modulus(c[n]);
  for (std::size_t k = n; k-- > 0;) {
    derivative = derivative * z + value;
    value = value * z + c[k];
    magnitude = magnitude * az + modulus(c[k]);
  }
}

}  // namespace

template <class C>
BasicMatrix<C> operator*(const BasicMatrix<C>& x, const BasicMatrix<C>& y) {
  const std::size_t n = x.size();
  if (y.size() != n) throw InvalidInput("matrix dimensions differ");
  BasicMatrix<C> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const C xik = x(i, k);
      if (xik == C(0)) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += xik * y(k, j);
    }
  }
  return out;
}

template <class C>
C BasicPolynomial<C>::operator()(const C& x) const {
  C acc(0);
  for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * x + coeffs[k];
  return acc;
}

template <class C>
BasicPolynomial<C> BasicPolynomial<C>::from_roots(std::span<const C> roots) {
  std::vector<C> c{C(1)};
  for (const auto& r : roots) {
    std::vector<C> next(c.size() + 1, C(0));
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k + 1] += c[k];
      next[k] -= r * c[k];
    }
    c = std::move(next);
  }
  return {std::move(c)};
}

template <class C>
BasicPolynomial<C> char_poly(const BasicMatrix<C>& m) {
  using R = real_t<C>;
  if (!m.all_finite()) throw InvalidInput("char_poly: matrix has non-finite entries");
  const std::size_t n = m.size();

  // c[k] are the coefficients of det(xI - A); c[n] = 1.
  std::vector<C> c(n + 1, C(0));
  c[n] = C(1);
  BasicMatrix<C> am(n);  // A * M_k, starts at A * 0
  for (std::size_t k = 1; k <= n; ++k) {
    BasicMatrix<C> mk = am;
    for (std::size_t i = 0; i < n; ++i) mk(i, i) += c[n - k + 1];
    am = m * mk;
    c[n - k] = -am.trace() / C(R(static_cast<int>(k)));
  }
  if (n % 2 == 1) {
    for (auto& ck : c) ck = -ck;
  }
  return {std::move(c)};
}

template <class C>
BasicSpectrum<C> poly_roots(const BasicPolynomial<C>& p, int max_iterations) {
  using R = real_t<C>;
  using std::cos;
  using std::pow;
  using std::sin;

  std::vector<C> c = p.coeffs;
  for (const auto& ck : c) {
    if (!is_finite_complex(ck)) throw InvalidInput("poly_roots: non-finite coefficient");
  }
  while (!c.empty() && c.back() == C(0)) c.pop_back();
  if (c.empty()) throw InvalidInput("poly_roots: zero polynomial");
  if (c.size() == 1) throw InvalidInput("poly_roots: constant polynomial has no roots");

  BasicSpectrum<C> out;
  // Exact zero roots.
  std::size_t zeros = 0;
  while (c[zeros] == C(0)) ++zeros;
  out.eigenvalues.assign(zeros, C(0));
  c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(zeros));

  const std::size_t n = c.size() - 1;
  if (n == 0) {
    out.converged = true;
    return out;
  }
  const C lead = c[n];
  for (auto& ck : c) ck /= lead;

  // Start on a circle around the centroid, radius from the shifted
  // polynomial so a tight cluster gets a tight start.
  const C centroid = -c[n - 1] / C(R(static_cast<int>(n)));
  std::vector<C> shifted = c;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = n; j-- > i;) shifted[j] += centroid * shifted[j + 1];
  }
  R radius(0);
  for (std::size_t k = 0; k < n; ++k) {
    const R mag = modulus(shifted[k]);
    if (mag == R(0)) continue;
    const R r = pow(mag, R(1) / R(static_cast<int>(n - k)));
    if (r > radius) radius = r;
  }

  std::vector<C> z(n, centroid);
  if (radius == R(0)) {
    out.eigenvalues.insert(out.eigenvalues.end(), z.begin(), z.end());
    out.converged = true;
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), lexicographic_less<C>);
    return out;
  }
  const R two_pi = R(2) * boost::math::constants::pi<R>();
  for (std::size_t j = 0; j < n; ++j) {
    const R theta = two_pi * R(static_cast<int>(j)) / R(static_cast<int>(n)) + R(0.7);
    z[j] = centroid + C(radius * cos(theta), radius * sin(theta));
  }

  const R eps = machine_epsilon<R>();
  const R bound_factor = R(4 * static_cast<int>(n + 1)) * eps;
  std::vector<bool> done(n, false);
  std::size_t remaining = n;
  int it = 0;
  while (remaining > 0 && it < max_iterations) {
    ++it;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i]) continue;
      C value, deriv;
      R magnitude;
      horner<C>(c, z[i], value, deriv, magnitude);
      if (modulus(value) <= bound_factor * magnitude) {
        done[i] = true;
        --remaining;
        continue;
      }
      C repulsion(0);
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const C diff = z[i] - z[j];
        if (diff == C(0)) continue;
        repulsion += C(1) / diff;
      }
      C step;
      if (deriv == C(0)) {
        // Stationary point of p: nudge off it.
        step = C(-radius * eps * R(16), radius * eps * R(16));
      } else {
        const C ratio = value / deriv;
        const C denom = C(1) - ratio * repulsion;
        step = denom == C(0) ? ratio : ratio / denom;
      }
      z[i] -= step;
      if (modulus(step) <= eps * modulus(z[i])) {
        done[i] = true;
        --remaining;
      }
    }
  }
  out.converged = remaining == 0;
  out.iterations = it;
  out.eigenvalues.insert(out.eigenvalues.end(), z.begin(), z.end());
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), lexicographic_less<C>);
  return out;
}

template <class C>
BasicSpectrum<C> eigenvalues(const BasicMatrix<C>& m) {
  return poly_roots(char_poly(m));
}

template <class C>
int kernel_dimension(const BasicMatrix<C>& m, const C& shift, double rel_tol) {
  using R = real_t<C>;
  using std::sqrt;
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw InvalidInput("kernel_dimension: rel_tol must lie in (0, 1)");
  const std::size_t n = m.size();
  BasicMatrix<C> a = m.shifted(shift);
  if (!a.all_finite()) throw InvalidInput("kernel_dimension: non-finite entries");

  R reference(0);
  int rank = 0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    R best(-1);
    for (std::size_t j = k; j < n; ++j) {
      R norm_sq(0);
      for (std::size_t i = k; i < n; ++i) norm_sq += modulus_sq(a(i, j));
      if (norm_sq > best) {
        best = norm_sq;
        pivot = j;
      }
    }
    if (pivot != k) {
      for (std::size_t i = 0; i < n; ++i) std::swap(a(i, k), a(i, pivot));
    }
    const R norm = sqrt(best);
    if (k == 0) {
      reference = norm;
      if (reference == R(0)) return static_cast<int>(n);
    }
    if (norm < R(rel_tol) * reference) break;
    ++rank;

    // Householder reflector mapping a(k:, k) onto alpha e_1.
    const C x0 = a(k, k);
    const R ax0 = modulus(x0);
    const C phase = ax0 == R(0) ? C(1) : x0 / C(ax0);
    const C alpha = -phase * C(norm);
    std::vector<C> v(n - k);
    for (std::size_t i = k; i < n; ++i) v[i - k] = a(i, k);
    v[0] -= alpha;
    R v_norm_sq(0);
    for (const auto& vi : v) v_norm_sq += modulus_sq(vi);
    if (v_norm_sq == R(0)) continue;
    for (std::size_t j = k; j < n; ++j) {
      C s(0);
      for (std::size_t i = k; i < n; ++i) s += conj(v[i - k]) * a(i, j);
      s *= C(R(2) / v_norm_sq);
      for (std::size_t i = k; i < n; ++i) a(i, j) -= s * v[i - k];
    }
  }
  return static_cast<int>(n) - rank;
}

template <class C>
C determinant(const BasicMatrix<C>& m) {
  using R = real_t<C>;
  const std::size_t n = m.size();
  BasicMatrix<C> a = m;
  C det(1);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    R best = modulus(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const R mag = modulus(a(i, k));
      if (mag > best) {
        best = mag;
        pivot = i;
      }
    }
    if (best == R(0)) return C(0);
    if (pivot != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(pivot, j));
      det = -det;
    }
    det *= a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const C f = a(i, k) / a(k, k);
      if (f == C(0)) continue;
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return det;
}

std::vector<std::vector<std::size_t>> root_clusters(std::span<const Complex> roots, double tol) {
  const std::size_t n = roots.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double scale = 1.0 + std::max(std::abs(roots[i]), std::abs(roots[j]));
      if (std::abs(roots[i] - roots[j]) <= tol * scale) parent[find(j)] = find(i);
    }
  }
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> slot(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    if (slot[r] == n) {
      slot[r] = groups.size();
      groups.emplace_back();
    }
    groups[slot[r]].push_back(i);
  }
  return groups;
}

template <class C>
real_t<C> spectral_diameter(std::span<const C> values) {
  real_t<C> best(0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = i + 1; j < values.size(); ++j) {
      const real_t<C> d = modulus(C(values[i] - values[j]));
      if (d > best) best = d;
    }
  }
  return best;
}

#define PTEP_INSTANTIATE_LINALG(C)                                                    \
  template BasicMatrix<C> operator*(const BasicMatrix<C>&, const BasicMatrix<C>&);    \
  template struct BasicPolynomial<C>;                                                 \
  template BasicPolynomial<C> char_poly(const BasicMatrix<C>&);                       \
  template BasicSpectrum<C> poly_roots(const BasicPolynomial<C>&, int);               \
  template BasicSpectrum<C> eigenvalues(const BasicMatrix<C>&);                       \
  template int kernel_dimension(const BasicMatrix<C>&, const C&, double);             \
  template C determinant(const BasicMatrix<C>&);                                      \
  template real_t<C> spectral_diameter(std::span<const C>);

PTEP_INSTANTIATE_LINALG(Complex)
PTEP_INSTANTIATE_LINALG(ExtComplex)

#undef PTEP_INSTANTIATE_LINALG

}  // namespace ptep::linalg
