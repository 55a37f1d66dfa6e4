#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "oracles.hpp"
#include "ptep/capacitance.hpp"

using namespace ptep;
using model::GainLossProfile;

namespace {

double max_diff(const linalg::ComplexMatrix& x, const linalg::ComplexMatrix& y) {
  REQUIRE(x.size() == y.size());
  double worst = 0.0;
  for (std::size_t k = 0; k < x.entries().size(); ++k) worst = std::max(worst, std::abs(x.entries()[k] - y.entries()[k]));
  return worst;
}

}  // namespace

TEST_SUITE("capacitance") {
  TEST_CASE("build_dilute of a pair") {
    const double b = 0.3;
    const double eps = 0.1;
    const auto m = capacitance::build_dilute({{1, 1}, {b, -b}}, eps);
    const Complex w(1.0, b);
    const linalg::ComplexMatrix want(2, {w, -w * eps, -std::conj(w) * eps, std::conj(w)});
    CHECK(max_diff(m, want) == 0.0);
  }

  TEST_CASE("build_dilute decouples at epsilon = 0") {
    const double b = 0.4;
    const double c = 1.2;
    const auto m = capacitance::build_dilute({{1, c, 1}, {b, 0, -b}}, 0.0);
    const linalg::ComplexMatrix want(3, {Complex(1, b), 0, 0, 0, c, 0, 0, 0, Complex(1, -b)});
    CHECK(max_diff(m, want) == 0.0);
  }

  TEST_CASE("build_dilute matches the displayed four-resonator matrix") {
    const double b = 0.2, c = 1.05, d = -0.07, eps = 0.1;
    const auto m = capacitance::build_dilute({{1, c, c, 1}, {b, d, -d, -b}}, eps);
    const Complex p(1, b), q(c, d), qc(c, -d), pc(1, -b);
    const linalg::ComplexMatrix want(4, {p,              -p * eps,       -p * eps / 2.0, -p * eps / 3.0,
                                         -q * eps,       q,              -q * eps,       -q * eps / 2.0,
                                         -qc * eps / 2.0, -qc * eps,     qc,             -qc * eps,
                                         -pc * eps / 3.0, -pc * eps / 2.0, -pc * eps,    pc});
    CHECK(max_diff(m, want) < 1e-16);
  }

  TEST_CASE("build_dilute validates its input") {
    CHECK_THROWS_AS(capacitance::build_dilute({{1, 1}, {0.1, 0.1}}, 0.1), ValidationError);
    CHECK_THROWS_AS(capacitance::build_dilute({{1, 1}, {0.1, -0.1}}, 1.0), InvalidInput);
    CHECK_THROWS_AS(capacitance::build_dilute({{1, 1}, {0.1, -0.1}}, -0.1), InvalidInput);
  }

  TEST_CASE("build_dilute_general on the default layout equals build_dilute") {
    testing::Gen g(3);
    for (std::size_t n = 2; n <= 8; ++n) {
      const auto p = g.profile(n);
      const double eps = g.uniform(0.01, 0.9);
      const auto geo = model::ArrayGeometry::equispaced(n, eps);
      CHECK(max_diff(capacitance::build_dilute_general(p, geo, 1.0 / 5000, 1.0), capacitance::build_dilute(p, eps)) <
            1e-14);
    }
  }

  TEST_CASE("build_dilute_general at separation 2/epsilon") {
    const double eps = 0.2;
    model::ArrayGeometry geo;
    geo.epsilon = eps;
    geo.positions = {{0, 0, 0}, {0, 2.0 / eps, 0}};
    const auto m = capacitance::build_dilute_general({{1, 1}, {0, 0}}, geo, 1e-3, 1.0);
    CHECK(std::abs(m(0, 1)) == doctest::Approx(eps / 2.0).epsilon(1e-14));
    CHECK(std::abs(m(1, 0)) == doctest::Approx(eps / 2.0).epsilon(1e-14));
  }

  TEST_CASE("build_dilute_general approaches the diagonal as epsilon shrinks") {
    const GainLossProfile p{{1, 0.8, 1}, {0.5, 0, -0.5}};
    const auto m = capacitance::build_dilute_general(p, model::ArrayGeometry::equispaced(3, 1e-9), 1e-3, 1.0);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(m(i, i) == Complex(p.a[i], p.b[i]));
      for (std::size_t j = 0; j < 3; ++j) {
        if (i != j) CHECK(std::abs(m(i, j)) < 1e-8);
      }
    }
  }

  TEST_CASE("build_dilute_general rejects bad geometry") {
    model::ArrayGeometry geo;
    geo.epsilon = 0.1;
    geo.positions = {{0, 0, 0}, {0, 0, 0}};
    CHECK_THROWS_AS(capacitance::build_dilute_general({{1, 1}, {0, 0}}, geo, 1e-3, 1.0), ValidationError);
    CHECK_THROWS_AS(capacitance::build_dilute_general({{1, 1, 1}, {0, 0, 0}}, model::ArrayGeometry::equispaced(2, 0.1),
                                                      1e-3, 1.0),
                    ValidationError);
    CHECK_THROWS_AS(
        capacitance::build_dilute_general({{1, 1}, {0, 0}}, model::ArrayGeometry::equispaced(2, 0.1), 0.0, 1.0),
        ValidationError);
  }

  TEST_CASE("build_leading_order of a pair") {
    const std::vector<Complex> first{Complex(0, 1), Complex(0, -1)};
    const auto m = capacitance::build_leading_order(first);
    const linalg::ComplexMatrix want(2, {Complex(0, 1), -1.0, -1.0, Complex(0, -1)});
    CHECK(max_diff(m, want) == 0.0);
    const std::vector<Complex> broken{Complex(0, 1), Complex(0, 1)};
    CHECK_THROWS_AS(capacitance::build_leading_order(broken), ValidationError);
  }

  TEST_CASE("build_leading_order reproduces the shifted third-order matrix") {
    const double c1 = oracle::triple_c1();
    const double b1 = oracle::triple_b1(c1);
    // Shift a_1 = 0 to zero trace: diagonal (-c1/3 + i b1, 2 c1/3, -c1/3 - i b1).
    const std::vector<Complex> first{Complex(-c1 / 3, b1), Complex(2 * c1 / 3, 0), Complex(-c1 / 3, -b1)};
    const auto m = capacitance::build_leading_order(first);
    const auto want = oracle::triple_shifted(b1, c1);
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(m(i, j) - want[i][j]) < 1e-15);
    }
  }

  TEST_CASE("build_leading_order at a fourth-order family has a one-dimensional kernel") {
    const auto& s = testing::quad_family(1.87, 0.654, 0.56);
    const auto m = capacitance::build_leading_order(s.profile);
    CHECK(linalg::kernel_dimension(m, Complex(s.gamma), 1e-6) == 1);
  }

  TEST_CASE("assemble agrees with the checked builders") {
    const GainLossProfile p{{1, 0.9, 0.9, 1}, {0.3, -0.1, 0.1, -0.3}};
    CHECK(max_diff(capacitance::assemble<Complex>(model::Mode::full, p, 0.1), capacitance::build_dilute(p, 0.1)) ==
          0.0);
    CHECK(max_diff(capacitance::assemble<Complex>(model::Mode::leading, p, 0.1),
                   capacitance::build_leading_order(p)) == 0.0);
  }
}
