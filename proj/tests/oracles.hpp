#pragma once

// Closed forms transcribed by hand for use as test oracles. Nothing here
// calls into the library.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using Mat3 = std::array<std::array<cplx, 3>, 3>;

/// Root of f in [lo, hi] by bisection; f(lo) and f(hi) must differ in sign.
inline double bisect(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-13) {
  double flo = f(lo);
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if ((fmid < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// ---- two resonators -------------------------------------------------------

/// Gain/loss at the second-order point of the full array.
inline double pair_gain_loss(double eps) { return eps / std::sqrt(1.0 - eps * eps); }

/// x^2 - 2x + (1 + b^2)(1 - eps^2), ascending.
inline std::vector<double> pair_poly(double b, double eps) {
  return {(1.0 + b * b) * (1.0 - eps * eps), -2.0, 1.0};
}

/// Eigenvalues of [[a+ib, -(a+ib)eps], [-(a-ib)eps, a-ib]].
inline std::array<cplx, 2> pair_eigenvalues(double a, double b, double eps) {
  const cplx disc = cplx(a * a - (a * a + b * b) * (1.0 - eps * eps), 0.0);
  const cplx root = std::sqrt(disc);
  return {a + root, a - root};
}

// ---- three resonators, profile (1+ib, c, 1-ib) ------------------------------

/// det(xI - C), ascending.
inline std::vector<double> triple_poly(double b, double c, double eps) {
  const double e2 = eps * eps;
  const double e3 = e2 * eps;
  return {-c * (1.0 + b * b) * (1.0 - 2.25 * e2 - e3),
          1.0 + b * b + 2.0 * c - e2 / 4.0 * (1.0 + b * b + 8.0 * c), -(c + 2.0), 1.0};
}

/// Coefficient-matching equations with gamma = (c + 2)/3: the quadratic and
/// the constant term, as lhs - rhs.
inline std::array<double, 2> triple_equations(double b, double c, double eps) {
  const double g = (c + 2.0) / 3.0;
  const double e2 = eps * eps;
  return {3.0 * g * g - (1.0 + b * b + 2.0 * c - e2 / 4.0 * (1.0 + b * b + 8.0 * c)),
          g * g * g - c * (1.0 + b * b) * (1.0 - 2.25 * e2 - eps * e2)};
}

/// Real root of c^3 + 27/4 c - 27/8.
inline double triple_c1() {
  return bisect([](double c) { return c * c * c + 6.75 * c - 3.375; }, 0.0, 1.0, 1e-14);
}

inline double triple_b1(double c1) { return std::sqrt(2.25 + c1 * c1 / 3.0); }

/// Limit of (C - gamma I)/eps at the third-order point.
inline Mat3 triple_shifted(double b1, double c1) {
  return Mat3{{{cplx(-c1 / 3.0, b1), -1.0, -0.5},
               {-1.0, cplx(2.0 * c1 / 3.0, 0.0), -1.0},
               {-0.5, -1.0, cplx(-c1 / 3.0, -b1)}}};
}

// ---- four resonators, profile (1+ib, c+id, c-id, 1-ib) ----------------------

/// det(C - xI), ascending.
inline std::vector<double> quad_poly(double b, double c, double d, double eps) {
  const double e2 = eps * eps;
  const double e3 = e2 * eps;
  const double bb = 1.0 + b * b;
  const double cd = c * c + d * d;
  return {bb * cd * (144.0 - e2 * (520.0 + 384.0 * eps + 23.0 * e2)) / 144.0,
          (9.0 * cd * (-4.0 + 9.0 * e2 + 4.0 * e3) + c * bb * (-36.0 + e2 * (49.0 + 12.0 * eps))) / 18.0,
          bb + c * (4.0 + c) + d * d -
              e2 / 18.0 * (2.0 + 2.0 * b * b + 9.0 * c * (5.0 + 2.0 * c) - 27.0 * b * d + 18.0 * d * d),
          -2.0 * (c + 1.0), 1.0};
}

/// The three matching equations with gamma = (c + 1)/2, lhs - rhs.
inline std::array<double, 3> quad_equations(double b, double c, double d, double eps) {
  const auto p = quad_poly(b, c, d, eps);
  const double s = c + 1.0;
  return {1.5 * s * s - p[2], 0.5 * s * s * s + p[1], s * s * s * s / 16.0 - p[0]};
}

/// First-order reduced system of the four-resonator problem.
inline std::array<double, 3> quad_first_order(double b1, double c1, double d1) {
  const double c2 = c1 * c1;
  return {c2 - 2.0 * (b1 * b1 + d1 * d1) + 65.0 / 9.0, c2 * c1 + c1 * (49.0 / 9.0 - 4.0 * b1 * b1) + 16.0 / 3.0,
          c2 * c2 - 16.0 * (c2 + d1 * d1) * (b1 * b1 - 1.0 / 9.0) + 32.0 / 3.0 * c1 + 16.0 * b1 * b1 -
              24.0 * b1 * d1 + 23.0 / 9.0};
}

/// Closed form of the determinant of the rows 1-3, columns 2-4 block of
/// the shifted first-order four-resonator matrix.
inline double quad_block_det(double c1, double d1) {
  return -((c1 + 3.0) * (c1 + 3.0) + 4.0 * d1 * d1 + 2.0) / 12.0;
}

inline Mat3 quad_block(double c1, double d1) {
  return Mat3{{{-1.0, -0.5, -1.0 / 3.0}, {cplx(c1 / 2.0, d1), -1.0, -0.5}, {-1.0, cplx(c1 / 2.0, -d1), -1.0}}};
}

/// Cofactor expansion.
inline cplx det3(const Mat3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

/// Figure values of the four families, (b1, c1, d1).
inline const std::array<std::array<double, 3>, 4> kQuadFamilies{{
    {1.87, 0.654, 0.56},
    {0.0456, -0.863, 2.00},
    {1.70, 1.07, -1.13},
    {0.734, -1.15, -1.93},
}};

// ---- frequencies --------------------------------------------------------------

inline cplx frequency(cplx gamma, double delta, double a_scale, double volume) {
  return std::sqrt(4.0 * M_PI * a_scale * delta * gamma / volume);
}

}  // namespace oracle
