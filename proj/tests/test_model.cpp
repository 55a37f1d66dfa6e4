#include <doctest.h>

#include <cmath>

#include "ptep/errors.hpp"
#include "ptep/model.hpp"

using namespace ptep;
using model::GainLossProfile;

TEST_SUITE("model") {
  TEST_CASE("validate_profile accepts a symmetric three-resonator profile") {
    CHECK(model::validate_profile({{1, 1, 1}, {0.153, 0, -0.153}}).empty());
  }

  TEST_CASE("validate_profile reports antisymmetry violations") {
    const auto v = model::validate_profile({{1, 1}, {0.1, 0.1}});
    REQUIRE(v.size() == 1);
    CHECK(v[0] == "antisymmetry violation in b at (1,2)");
  }

  TEST_CASE("validate_profile reports a lossy centre") {
    const auto v = model::validate_profile({{1, 1, 1}, {0.1, 0.05, -0.1}});
    REQUIRE(v.size() == 1);
    CHECK(v[0] == "centre gain/loss nonzero");
  }

  TEST_CASE("validate_profile collects every violation") {
    const auto v = model::validate_profile({{2, 1, 1.5}, {0.1, 0.05, 0.1}});
    CHECK(v.size() == 4);
  }

  TEST_CASE("validate_profile normalization is optional") {
    const GainLossProfile leading{{0, 0.5, 0}, {1.5, 0, -1.5}};
    CHECK_FALSE(model::validate_profile(leading).empty());
    CHECK(model::validate_profile(leading, 0.0).empty());
    CHECK(model::validate_profile(leading, std::nullopt).empty());
  }

  TEST_CASE("validate_profile rejects malformed profiles") {
    CHECK_FALSE(model::validate_profile({{}, {}}).empty());
    CHECK_FALSE(model::validate_profile({{1, 1}, {0.1}}).empty());
    CHECK_FALSE(model::validate_profile({{1, 1}, {NAN, 0.0}}).empty());
  }

  TEST_CASE("require_valid throws with all violations") {
    try {
      model::require_valid({{1, 2}, {0.1, 0.1}});
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(e.violations().size() == 2);
    }
  }

  TEST_CASE("scale_gain_loss") {
    const GainLossProfile p{{1, 1, 1}, {0.153, 0, -0.153}};
    const auto zero = model::scale_gain_loss(p, 0.0);
    for (double b : zero.b) CHECK(b == 0.0);
    CHECK(zero.a == p.a);
    const auto same = model::scale_gain_loss(p, 1.0);
    CHECK(same.a == p.a);
    CHECK(same.b == p.b);
    const auto twice = model::scale_gain_loss(p, 2.0);
    CHECK(twice.b[0] == doctest::Approx(0.306));
    CHECK(twice.b[1] == 0.0);
    CHECK(twice.b[2] == doctest::Approx(-0.306));
  }

  TEST_CASE("mode strings") {
    CHECK(model::parse_mode("leading") == model::Mode::leading);
    CHECK(model::parse_mode("full") == model::Mode::full);
    CHECK(model::to_string(model::Mode::full) == "full");
    CHECK_THROWS_AS(model::parse_mode("exact"), InvalidInput);
    CHECK(model::first_a(model::Mode::leading) == 0.0);
    CHECK(model::first_a(model::Mode::full) == 1.0);
  }

  TEST_CASE("equispaced geometry") {
    const auto g = model::ArrayGeometry::equispaced(3, 0.1);
    REQUIRE(g.size() == 3);
    CHECK(g.positions[0][0] == doctest::Approx(-10.0));
    CHECK(g.positions[1][0] == doctest::Approx(0.0));
    CHECK(g.positions[2][0] == doctest::Approx(10.0));
    CHECK(g.cap_b == doctest::Approx(4.0 * M_PI));
    CHECK(model::validate_geometry(g).empty());
    CHECK_THROWS_AS(model::ArrayGeometry::equispaced(2, 1.5), InvalidInput);
  }

  TEST_CASE("validate_geometry finds coincident centres") {
    model::ArrayGeometry g;
    g.positions = {{0, 0, 0}, {1, 0, 0}, {0, 0, 0}};
    const auto v = model::validate_geometry(g);
    REQUIRE(v.size() == 1);
    CHECK(v[0] == "coincident positions at (1,3)");
  }

  TEST_CASE("physical constants") {
    model::PhysicalConstants c;
    CHECK(c.volume == doctest::Approx(4.0 * M_PI / 3.0));
    CHECK(model::validate_constants(c).empty());
    CHECK(model::constants_warnings(c).empty());
    c.delta = 0.5;
    CHECK(model::validate_constants(c).empty());
    CHECK(model::constants_warnings(c).size() == 1);
    c.delta = 0.0;
    c.a_scale = 0.0;
    c.volume = -1.0;
    CHECK(model::validate_constants(c).size() == 3);
  }
}
