#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "cwae/special_fn.hpp"
#include "oracles.hpp"

using namespace cwae;

namespace {
double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

const oracle_ref::QuadratureRule& big_rule() {
  static const auto rule = oracle_ref::gauss_legendre(10000);
  return rule;
}
}  // namespace

TEST_CASE("test oracles reproduce reference values") {
  // 1F1(1/2; 1; -1) and 1F1(1/2; 5/2; -3) at 30 digits.
  CHECK(rel(oracle_ref::phi2_by_bessel_series(1.0), 0.645035270449150068) < 1e-15);
  CHECK(rel(oracle_ref::phi_by_quadrature(5, 3.0, big_rule()), 0.642876217381264495) < 1e-13);
}

TEST_CASE("phi_exact") {
  SUBCASE("zero argument gives one") { CHECK(phi_exact(20, 0.0) == 1.0); }

  SUBCASE("D = 2 matches the Bessel-series oracle") {
    CHECK(rel(phi_exact(2, 1.0), oracle_ref::phi2_by_bessel_series(1.0)) < 1e-10);
    CHECK(rel(phi_exact(2, 1.0), 0.645035270449150068) < 1e-10);
  }

  SUBCASE("D = 5 matches 10^4-node quadrature") {
    CHECK(rel(phi_exact(5, 3.0), oracle_ref::phi_by_quadrature(5, 3.0, big_rule())) < 1e-10);
  }

  SUBCASE("series and quadrature agree across the switch") {
    for (int d : {2, 3, 5, 8, 20, 64}) {
      for (double s : {1.0, 10.0, 39.5, 40.0, 40.5}) {
        CAPTURE(d);
        CAPTURE(s);
        CHECK(rel(detail::phi_series(d, s), detail::phi_quadrature(d, s)) < 1e-10);
      }
    }
  }

  SUBCASE("large-argument expansion agrees with quadrature where it applies") {
    int used = 0;
    for (int d : {2, 3, 4, 5, 8, 20, 33, 64, 200}) {
      for (double s = 40.5; s < 3000.0; s *= 1.37) {
        if (auto v = detail::phi_large_s(d, s)) {
          ++used;
          CAPTURE(d);
          CAPTURE(s);
          CHECK(rel(*v, detail::phi_quadrature(d, s)) < 1e-12);
        }
      }
    }
    CHECK(used > 40);
    CHECK_FALSE(detail::phi_large_s(200, 41.0).has_value());
  }

  SUBCASE("large arguments against independent values") {
    // mpmath hyp1f1 references.
    CHECK(rel(phi_exact(20, 50.0), 0.397335840839113703) < 1e-10);
    CHECK(rel(phi_exact(5, 100.0), 0.132269368623824134) < 1e-10);
    CHECK(rel(phi_exact(64, 1000.0), 0.174141898767766107) < 1e-10);
    CHECK(rel(phi_exact(2, 40.0), 0.0897803118848260216) < 1e-10);
    CHECK(rel(phi_exact(3, 41.0), 0.138405392834930468) < 1e-10);
  }

  SUBCASE("quadrature oracle agrees on a grid") {
    for (int d : {3, 5, 7, 20}) {
      for (double s = 0.0; s <= 120.0; s += 7.5) {
        CAPTURE(d);
        CAPTURE(s);
        CHECK(rel(phi_exact(d, s), oracle_ref::phi_by_quadrature(d, s, big_rule())) < 1e-10);
      }
    }
  }

  SUBCASE("domain errors") {
    CHECK_THROWS_AS(phi_exact(1, 1.0), std::domain_error);
    CHECK_THROWS_AS(phi_exact(5, -0.1), std::domain_error);
    CHECK_THROWS_AS(phi_exact(5, std::nan("")), std::domain_error);
  }
}

TEST_CASE("phi_asymptotic") {
  CHECK(phi_asymptotic(20, 0.0) == 1.0);
  CHECK(phi_asymptotic(20, 9.25) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(rel(phi_asymptotic(20, 50.0), phi_exact(20, 50.0)) < 1e-2);
  CHECK_THROWS_AS(phi_asymptotic(1, 1.0), std::domain_error);
  CHECK_THROWS_AS(phi_asymptotic(20, -1.0), std::domain_error);
}

TEST_CASE("phi_asymptotic departs from phi_exact by about one percent at D = 20") {
  // Characterizes the approximation rather than asserting a bound: the peak
  // relative gap sits near s = 9.75 and is 1.0302e-2 (mpmath).
  double worst = 0.0;
  double where = 0.0;
  for (double s = 0.0; s <= 200.0; s += 0.25) {
    const double r = rel(phi_asymptotic(20, s), phi_exact(20, s));
    if (r > worst) {
      worst = r;
      where = s;
    }
  }
  CHECK(worst == doctest::Approx(1.0302e-2).epsilon(1e-3));
  CHECK(where == doctest::Approx(9.75).epsilon(0.05));
  // D = 5 is visibly worse.
  double worst5 = 0.0;
  for (double s = 0.0; s <= 200.0; s += 0.25) worst5 = std::max(worst5, rel(phi_asymptotic(5, s), phi_exact(5, s)));
  CHECK(worst5 > 5 * worst);
}

TEST_CASE("phi_bessel_d2") {
  CHECK(phi_bessel_d2(0.0) == 1.0);
  const double lo = detail::phi_bessel_d2_small(7.5);
  const double hi = detail::phi_bessel_d2_large(7.5);
  CHECK(rel(lo, hi) < 1e-6);
  CHECK(rel(phi_bessel_d2(4.0), 0.308508322553671040) < 1e-6);
  CHECK(rel(phi_bessel_d2(4.0), oracle_ref::phi2_by_bessel_series(4.0)) < 1e-6);
  for (double s = 0.0; s <= 50.0; s += 0.125) {
    CAPTURE(s);
    CHECK(rel(phi_bessel_d2(s), oracle_ref::phi2_by_bessel_series(s)) < 1e-5);
    CHECK(rel(phi_exact(2, s), phi_bessel_d2(s)) < 1e-5);
  }
  CHECK_THROWS_AS(phi_bessel_d2(-1.0), std::domain_error);
}

TEST_CASE("phi dispatcher") {
  CHECK(resolve_phi_mode(2) == PhiMode::BesselD2);
  CHECK(resolve_phi_mode(3) == PhiMode::ExactSeries);
  CHECK(resolve_phi_mode(19) == PhiMode::ExactSeries);
  CHECK(resolve_phi_mode(20) == PhiMode::AsymptoticLargeD);
  CHECK(phi(64, 0.0) == 1.0);
  CHECK(phi(2, 1.0) == phi_bessel_d2(1.0));
  CHECK(phi(20, 9.25) == doctest::Approx(0.70710678).epsilon(1e-8));
  CHECK(phi(20, 9.25, PhiMode::ExactSeries) == phi_exact(20, 9.25));
  CHECK_THROWS_AS(phi(5, 1.0, PhiMode::BesselD2), std::domain_error);
  CHECK_THROWS_AS(resolve_phi_mode(1), std::domain_error);
}

TEST_CASE("phi_asymptotic_derivative") {
  CHECK(phi_asymptotic_derivative(20, 0.0) == doctest::Approx(-2.0 / 37.0).epsilon(1e-15));
  CHECK(phi_asymptotic_derivative(20, 9.25) == doctest::Approx(-(2.0 / 37.0) * std::pow(2.0, -1.5)).epsilon(1e-15));
  for (int d : {2, 5, 20, 64}) {
    for (double s : {0.5, 5.0, 50.0}) {
      const double h = 1e-5;
      const double fd = (phi_asymptotic(d, s + h) - phi_asymptotic(d, s - h)) / (2 * h);
      CAPTURE(d);
      CAPTURE(s);
      CHECK(rel(phi_asymptotic_derivative(d, s), fd) < 1e-6);
      CHECK(phi_asymptotic_derivative(d, s) < 0.0);
    }
  }
}

TEST_CASE("phi is in (0, 1] and strictly decreasing") {
  for (int d : {2, 3, 5, 10, 20, 64}) {
    for (auto mode : {PhiMode::ExactSeries, PhiMode::AsymptoticLargeD, PhiMode::BesselD2}) {
      if (mode == PhiMode::BesselD2 && d != 2) continue;
      double prev = phi(d, 0.0, mode);
      CHECK(prev == 1.0);
      for (double s = 0.5; s <= 300.0; s *= 1.3) {
        const double v = phi(d, s, mode);
        CAPTURE(d);
        CAPTURE(s);
        CHECK(v > 0.0);
        CHECK(v < prev);
        prev = v;
      }
    }
  }
}
