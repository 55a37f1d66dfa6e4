#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

namespace ptep {

using Real = double;
using Complex = std::complex<double>;

/// 50-digit floating point. Exceptional points split an N-fold root by
/// (coefficient error)^(1/N), so certifying coalescence below 1e-8 for
/// N = 4 needs coefficients good to ~1e-34 or better.
using ExtReal = boost::multiprecision::cpp_bin_float_50;
using ExtComplex = boost::multiprecision::cpp_complex_50;

template <class C>
struct complex_traits;

template <>
struct complex_traits<Complex> {
  using real_type = double;
};

template <>
struct complex_traits<ExtComplex> {
  using real_type = ExtReal;
};

template <class C>
using real_t = typename complex_traits<C>::real_type;

template <class R>
R machine_epsilon() {
  return std::numeric_limits<R>::epsilon();
}

inline double to_double(double x) { return x; }
inline double to_double(const ExtReal& x) { return x.convert_to<double>(); }

inline Complex to_complex(const Complex& z) { return z; }
inline Complex to_complex(const ExtComplex& z) {
  return {to_double(z.real()), to_double(z.imag())};
}

template <class C>
C from_complex(const Complex& z) {
  using R = real_t<C>;
  return C(R(z.real()), R(z.imag()));
}

inline bool is_finite(double x) { return std::isfinite(x); }
inline bool is_finite(const ExtReal& x) { return boost::multiprecision::isfinite(x); }

template <class C>
bool is_finite_complex(const C& z) {
  return is_finite(z.real()) && is_finite(z.imag());
}

/// Decimal text with every significant digit of the type.
std::string to_decimal(const ExtReal& x);
ExtReal ext_from_decimal(const std::string& text);

}  // namespace ptep
