#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "cwae/cw_core.hpp"
#include "cwae/parallel.hpp"
#include "oracles.hpp"

using namespace cwae;

namespace {
double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

Sample one_point(std::vector<double> p) {
  const std::size_t d = p.size();
  return Sample(Matrix(1, d, std::move(p)));
}

Sample zeros(std::size_t n, std::size_t d) { return Sample(Matrix(n, d, 0.0)); }

// Prior distance of a single point at the origin, gamma = 1, any D.
constexpr double kOriginValue = 0.0209070660128138434;
}  // namespace

TEST_CASE("silverman_gamma") {
  CHECK(rel(silverman_gamma(1).value(), 1.12195514544619949) < 1e-15);
  CHECK(rel(silverman_gamma(100).value(), 0.177817907226439984) < 1e-15);
  for (std::size_t n = 1; n < 5000; n = n * 3 + 1) CHECK(silverman_gamma(n + 1).value() < silverman_gamma(n).value());
  CHECK_THROWS_AS(silverman_gamma(0), std::domain_error);
}

TEST_CASE("Bandwidth rejects non-positive values") {
  CHECK_THROWS(Bandwidth(0.0));
  CHECK_THROWS(Bandwidth(-1.0));
  CHECK_THROWS(Bandwidth(std::nan("")));
  CHECK_THROWS(Bandwidth(INFINITY));
  CHECK(Bandwidth(0.5).value() == 0.5);
}

TEST_CASE("Sample validation") {
  CHECK_THROWS(Sample(Matrix()));
  CHECK_THROWS(Sample(Matrix(2, 2, {1.0, NAN, 0.0, 0.0})));
  CHECK_THROWS(Sample(Matrix(2, 2, {1.0, INFINITY, 0.0, 0.0})));
}

TEST_CASE("cw2_sample_sample basics") {
  const auto x = oracle_ref::gaussian_sample(40, 5, 11);
  const auto y = oracle_ref::gaussian_sample(40, 5, 12, 0.3, 1.2);

  SUBCASE("identity") {
    for (int d : {2, 5, 20, 64}) {
      const auto s = oracle_ref::gaussian_sample(50, d, 100 + d);
      const auto r = cw2_sample_sample(s, s);
      CAPTURE(d);
      CHECK(r.squared_distance <= 1e-10);
      CHECK(std::fabs(r.pre_clamp) <= 1e-10);
    }
  }

  SUBCASE("bit-for-bit symmetry") {
    for (int d : {2, 5, 20}) {
      const auto a = oracle_ref::gaussian_sample(33, d, 1);
      const auto b = oracle_ref::gaussian_sample(21, d, 2, 0.5);
      CHECK(cw2_sample_sample(a, b).pre_clamp == cw2_sample_sample(b, a).pre_clamp);
      CHECK(cw2_sample_sample(a, b, Bandwidth(0.3), PhiMode::ExactSeries).pre_clamp ==
            cw2_sample_sample(b, a, Bandwidth(0.3), PhiMode::ExactSeries).pre_clamp);
    }
  }

  SUBCASE("report fields") {
    const auto r = cw2_sample_sample(x, y);
    CHECK(r.n == 40);
    CHECK(r.k == 40);
    CHECK(r.dim == 5);
    CHECK(r.mode == PhiMode::ExactSeries);
    CHECK(r.gamma == silverman_gamma(40));
    CHECK(r.squared_distance > 0.0);
    CHECK(r.squared_distance == r.pre_clamp);
    const auto small = oracle_ref::gaussian_sample(10, 5, 13);
    CHECK(cw2_sample_sample(x, small).gamma == silverman_gamma(10));
    CHECK(cw2_sample_sample(x, y, Bandwidth(0.7)).gamma.value() == 0.7);
    CHECK(cw2_sample_sample(x, y, std::nullopt, PhiMode::AsymptoticLargeD).mode == PhiMode::AsymptoticLargeD);
  }

  SUBCASE("single points") {
    for (int d : {2, 3, 5, 20}) {
      std::vector<double> p(d, 0.0), q(d, 0.0);
      p[0] = 0.4;
      q[d - 1] = -1.1;
      const double gamma = 0.8;
      const double s = (0.16 + 1.21) / (4 * gamma);
      const double expected = (1.0 - phi(d, s)) / std::sqrt(std::numbers::pi * gamma);
      const auto r = cw2_sample_sample(one_point(p), one_point(q), Bandwidth(gamma));
      CAPTURE(d);
      CHECK(rel(r.squared_distance, expected) < 1e-14);
    }
  }

  SUBCASE("matches the direct triple sum for every mode") {
    for (int d : {2, 5, 20, 64}) {
      const auto a = oracle_ref::gaussian_sample(24, d, 7 * d);
      const auto b = oracle_ref::gaussian_sample(24, d, 7 * d + 1, 0.2, 0.9);
      for (auto mode : {PhiMode::ExactSeries, PhiMode::AsymptoticLargeD, PhiMode::BesselD2}) {
        if (mode == PhiMode::BesselD2 && d != 2) continue;
        const double gamma = 0.4;
        const double ref =
            oracle_ref::cw2_reference(a, b, gamma, [&](double s) { return phi(d, s, mode); });
        CAPTURE(d);
        CAPTURE(to_string(mode));
        CHECK(rel(cw2_sample_sample(a, b, Bandwidth(gamma), mode).pre_clamp, ref) < 1e-11);
      }
    }
  }

  SUBCASE("unequal sizes use 1/n^2, 1/k^2, 2/(nk)") {
    const auto a = oracle_ref::gaussian_sample(17, 5, 3);
    const auto b = oracle_ref::gaussian_sample(29, 5, 4, 1.0);
    const double gamma = silverman_gamma(17).value();
    const double ref = oracle_ref::cw2_reference(a, b, gamma, [](double s) { return phi_exact(5, s); });
    CHECK(rel(cw2_sample_sample(a, b).pre_clamp, ref) < 1e-11);
  }

  SUBCASE("a duplicated sample is the same distribution") {
    Matrix doubled(80, 5);
    for (std::size_t i = 0; i < 80; ++i)
      for (std::size_t c = 0; c < 5; ++c) doubled(i, c) = x.points()(i % 40, c);
    CHECK(cw2_sample_sample(x, Sample(doubled), Bandwidth(0.5)).squared_distance <= 1e-12);
  }

  SUBCASE("orthogonal invariance") {
    for (int d : {2, 5, 20}) {
      const auto a = oracle_ref::gaussian_sample(30, d, 50 + d);
      const auto b = oracle_ref::gaussian_sample(30, d, 60 + d, 0.5);
      const auto q = oracle_ref::random_orthogonal(d, 70 + d);
      const double before = cw2_sample_sample(a, b).pre_clamp;
      const double after = cw2_sample_sample(oracle_ref::rotate(a, q), oracle_ref::rotate(b, q)).pre_clamp;
      CAPTURE(d);
      CHECK(std::fabs(before - after) <= 1e-10);
    }
  }

  SUBCASE("errors") {
    CHECK_THROWS_AS(cw2_sample_sample(x, oracle_ref::gaussian_sample(4, 3, 1)), std::invalid_argument);
    CHECK_THROWS(cw2_sample_sample(zeros(2, 1), zeros(2, 1)));
    CHECK_THROWS_AS(cw2_sample_sample(x, y, std::nullopt, PhiMode::BesselD2), std::domain_error);
  }
}

TEST_CASE("cw2_sample_normal") {
  SUBCASE("single point at the origin") {
    for (auto mode : {PhiMode::ExactSeries, PhiMode::AsymptoticLargeD}) {
      const auto r = cw2_sample_normal(zeros(1, 20), Bandwidth(1.0), mode);
      CHECK(rel(r.squared_distance, kOriginValue) < 1e-14);
    }
  }

  SUBCASE("four points at the origin share the single-point value") {
    const auto r = cw2_sample_normal(zeros(4, 20), Bandwidth(1.0));
    CHECK(rel(r.squared_distance, kOriginValue) < 1e-14);
    CHECK(r.n == 4);
    CHECK(r.k == 0);
  }

  SUBCASE("single point off the origin") {
    const double g = 0.6;
    std::vector<double> p{0.5, -1.0, 2.0, 0.0, 0.25};
    double sq = 0.0;
    for (double v : p) sq += v * v;
    const double expected =
        (1.0 / (2.0 * std::sqrt(std::numbers::pi))) *
        (1.0 / std::sqrt(g) + 1.0 / std::sqrt(1.0 + g) - 2.0 / std::sqrt(g + 0.5) * phi_exact(5, sq / (2 + 4 * g)));
    CHECK(rel(cw2_sample_normal(one_point(p), Bandwidth(g)).squared_distance, expected) < 1e-14);
  }

  SUBCASE("matches the direct evaluation") {
    for (int d : {2, 5, 20, 64}) {
      const auto a = oracle_ref::gaussian_sample(30, d, 90 + d, 0.1, 1.1);
      for (auto mode : {PhiMode::ExactSeries, PhiMode::AsymptoticLargeD}) {
        const double gamma = 0.35;
        const double ref = oracle_ref::cw2_normal_reference(a, gamma, [&](double s) { return phi(d, s, mode); });
        CAPTURE(d);
        CHECK(rel(cw2_sample_normal(a, Bandwidth(gamma), mode).pre_clamp, ref) < 1e-11);
      }
    }
  }

  SUBCASE("asymptotic mode equals the cost expansion") {
    // 2 sqrt(pi) d^2 ~ 1/n^2 sum (g + (d_ij^2)/(2D-3))^(-1/2) + 1/sqrt(1+g)
    //                  - 2/n sum (g + 1/2 + |x_i|^2/(2D-3))^(-1/2)
    const int d = 8;
    const auto a = oracle_ref::gaussian_sample(12, d, 5, 0.4);
    const double g = silverman_gamma(12).value();
    const double den = 2.0 * d - 3.0;
    const std::size_t n = a.size();
    double pair = 0.0;
    double single = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) pair += 1.0 / std::sqrt(g + squared_distance(a.point(i), a.point(j)) / den);
      single += 1.0 / std::sqrt(g + 0.5 + squared_norm(a.point(i)) / den);
    }
    const double expansion = (pair / (n * n) + 1.0 / std::sqrt(1.0 + g) - 2.0 * single / n) / (2.0 * std::sqrt(std::numbers::pi));
    CHECK(rel(cw2_sample_normal(a, std::nullopt, PhiMode::AsymptoticLargeD).pre_clamp, expansion) < 1e-12);
  }

  SUBCASE("orthogonal invariance") {
    for (int d : {2, 5, 20}) {
      const auto a = oracle_ref::gaussian_sample(40, d, 30 + d, 0.3);
      const auto q = oracle_ref::random_orthogonal(d, 40 + d);
      CAPTURE(d);
      CHECK(std::fabs(cw2_sample_normal(a).pre_clamp - cw2_sample_normal(oracle_ref::rotate(a, q)).pre_clamp) <= 1e-10);
    }
  }

  SUBCASE("shift increases the distance") {
    const auto a = oracle_ref::gaussian_sample(64, 5, 3);
    const auto b = oracle_ref::gaussian_sample(64, 5, 3, 2.0);
    CHECK(cw2_sample_normal(b).squared_distance > cw2_sample_normal(a).squared_distance);
  }

  SUBCASE("default gamma and mode") {
    const auto r = cw2_sample_normal(oracle_ref::gaussian_sample(10, 20, 3));
    CHECK(r.gamma == silverman_gamma(10));
    CHECK(r.mode == PhiMode::AsymptoticLargeD);
    CHECK(cw2_sample_normal(oracle_ref::gaussian_sample(10, 2, 3)).mode == PhiMode::BesselD2);
  }
}

TEST_CASE("cw2_sample_normal at n = 2000 agrees with an independent two-sample estimate") {
  // Both values estimate the distance between N(0, I) and itself. With the
  // diagonal terms included, E d2(X, N) = E||k - mu||^2 / n while
  // E d2(X, Y) = 2 E||k - mu||^2 / n, so the two-sample value is halved.
  const int d = 20;
  const std::size_t n = 2000;
  const int seeds = 20;
  std::vector<double> prior, pair;
  for (int s = 0; s < seeds; ++s) {
    const auto a = oracle_ref::gaussian_sample(n, d, 1000 + s);
    const auto b = oracle_ref::gaussian_sample(n, d, 5000 + s);
    prior.push_back(cw2_sample_normal(a, std::nullopt, PhiMode::ExactSeries).pre_clamp);
    pair.push_back(0.5 * cw2_sample_sample(a, b, std::nullopt, PhiMode::ExactSeries).pre_clamp);
  }
  auto mean = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    return m / v.size();
  };
  const double mp = mean(prior);
  const double mq = mean(pair);
  double var = 0.0;
  for (double v : pair) var += (v - mq) * (v - mq);
  const double sd = std::sqrt(var / (seeds - 1));
  CAPTURE(mp);
  CAPTURE(mq);
  CAPTURE(sd);
  CHECK(std::fabs(mp - mq) <= 3 * sd);
  CHECK(mp > 0.0);
}

TEST_CASE("cw2_sample_normal_gradient") {
  for (int d : {2, 5, 20}) {
    const auto x = oracle_ref::gaussian_sample(9, d, 400 + d, 0.3, 1.4);
    const Bandwidth g = silverman_gamma(9);
    const auto res = cw2_sample_normal_gradient(x, g);
    CHECK(res.report.pre_clamp == cw2_sample_normal(x, g, PhiMode::AsymptoticLargeD).pre_clamp);
    CHECK(res.gradient.rows() == 9);
    CHECK(res.gradient.cols() == static_cast<std::size_t>(d));
    const double h = 1e-5;
    for (std::size_t i = 0; i < 9; i += 4) {
      for (int c = 0; c < d; c += 3) {
        Matrix plus = x.points();
        Matrix minus = x.points();
        plus(i, c) += h;
        minus(i, c) -= h;
        const double fd = (cw2_sample_normal(Sample(plus), g, PhiMode::AsymptoticLargeD).pre_clamp -
                           cw2_sample_normal(Sample(minus), g, PhiMode::AsymptoticLargeD).pre_clamp) /
                          (2 * h);
        CAPTURE(d);
        CAPTURE(i);
        CAPTURE(c);
        CHECK(res.gradient(i, c) == doctest::Approx(fd).epsilon(1e-6).scale(1e-9));
      }
    }
  }
}

TEST_CASE("cw_scalar_product_radial") {
  const Bandwidth g(0.5);
  RadialGaussian a{{0.1, 0.2, -0.3}, 0.4};
  RadialGaussian b = a;

  SUBCASE("equal Gaussians") {
    CHECK(rel(cw_scalar_product_radial(a, b, g), 1.0 / std::sqrt(2 * std::numbers::pi * (0.8 + 1.0))) < 1e-15);
  }

  SUBCASE("point masses reproduce the pairwise terms") {
    RadialGaussian p{{1.0, 0.0, 0.5}, 0.0};
    RadialGaussian q{{0.0, -1.0, 0.5}, 0.0};
    const double expected = phi_exact(3, 2.0 / (4 * 0.5)) / std::sqrt(4 * std::numbers::pi * 0.5);
    CHECK(rel(cw_scalar_product_radial(p, q, g), expected) < 1e-14);
  }

  SUBCASE("Monte-Carlo over the sphere at D = 20") {
    const int d = 20;
    std::mt19937_64 gen(77);
    std::normal_distribution<double> nd;
    RadialGaussian p{std::vector<double>(d), 0.3};
    RadialGaussian q{std::vector<double>(d), 0.7};
    for (int c = 0; c < d; ++c) {
      p.mean[c] = 0.5 * nd(gen);
      q.mean[c] = 0.5 * nd(gen);
    }
    const double total = 0.3 + 0.7 + 2 * 0.5;
    const int dirs = 200000;
    double sum = 0.0, sumsq = 0.0;
    std::vector<double> v(d);
    for (int k = 0; k < dirs; ++k) {
      double nn = 0.0;
      for (auto& e : v) {
        e = nd(gen);
        nn += e * e;
      }
      double proj = 0.0;
      for (int c = 0; c < d; ++c) proj += v[c] * (p.mean[c] - q.mean[c]);
      proj /= std::sqrt(nn);
      const double val = std::exp(-proj * proj / (2 * total)) / std::sqrt(2 * std::numbers::pi * total);
      sum += val;
      sumsq += val * val;
    }
    const double mean = sum / dirs;
    const double se = std::sqrt((sumsq / dirs - mean * mean) / (dirs - 1));
    const double closed = cw_scalar_product_radial(p, q, g, PhiMode::ExactSeries);
    CHECK(std::fabs(closed - mean) <= 4 * se);
  }

  SUBCASE("errors") {
    RadialGaussian c{{0.0, 0.0}, 0.1};
    CHECK_THROWS_AS(cw_scalar_product_radial(a, c, g), std::invalid_argument);
    RadialGaussian neg{{0.0, 0.0, 0.0}, -1.0};
    CHECK_THROWS(cw_scalar_product_radial(a, neg, g));
  }
}

TEST_CASE("results do not depend on the thread count") {
  const auto a = oracle_ref::gaussian_sample(301, 7, 8);
  const auto b = oracle_ref::gaussian_sample(257, 7, 9, 0.2);
  set_thread_count(1);
  const double s1 = cw2_sample_sample(a, b).pre_clamp;
  const double n1 = cw2_sample_normal(a).pre_clamp;
  set_thread_count(5);
  CHECK(cw2_sample_sample(a, b).pre_clamp == s1);
  CHECK(cw2_sample_normal(a).pre_clamp == n1);
  set_thread_count(1);
}
