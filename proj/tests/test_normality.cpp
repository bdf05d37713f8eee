#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "cwae/normality.hpp"
#include "oracles.hpp"

using namespace cwae;

TEST_CASE("mardia on hand-built samples") {
  SUBCASE("antipodal pair") {
    for (std::size_t d : {1u, 2u, 5u, 20u}) {
      Matrix m(2, d, 0.0);
      m(0, 0) = 1.0;
      m(1, 0) = -1.0;
      const auto st = mardia(Sample(m));
      CHECK(st.skewness == 0.0);
      CHECK(st.kurtosis == 1.0);
      CHECK(st.normalized_kurtosis == 1.0 - double(d * (d + 2)));
      CHECK(st.n == 2);
      CHECK(st.dim == d);
    }
  }

  SUBCASE("origin") {
    const auto st = mardia(Sample(Matrix(1, 4, 0.0)));
    CHECK(st.skewness == 0.0);
    CHECK(st.kurtosis == 0.0);
    CHECK(st.normalized_kurtosis == -24.0);
  }

  SUBCASE("single point") {
    // b1 = |x|^6, b2 = |x|^4
    const auto st = mardia(Sample(Matrix{{1.0, 2.0}}));
    CHECK(st.skewness == doctest::Approx(125.0));
    CHECK(st.kurtosis == doctest::Approx(25.0));
  }
}

TEST_CASE("both skewness routes agree with the definition") {
  for (std::size_t d : {1u, 2u, 3u, 7u, 20u}) {
    const auto x = oracle_ref::gaussian_sample(57, d, 10 + d, 0.3, 1.2);
    double direct = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j)
      for (std::size_t k = 0; k < x.size(); ++k) direct += std::pow(dot(x.point(j), x.point(k)), 3);
    direct /= double(x.size() * x.size());
    CAPTURE(d);
    CHECK(detail::skewness_pairwise(x) == doctest::Approx(direct).epsilon(1e-12));
    CHECK(detail::skewness_tensor(x) == doctest::Approx(direct).epsilon(1e-10));
    CHECK(mardia(x).skewness == doctest::Approx(direct).epsilon(1e-10));
  }
}

TEST_CASE("mardia invariances") {
  SUBCASE("orthogonal transform") {
    for (std::size_t d : {2u, 5u, 20u}) {
      const auto x = oracle_ref::gaussian_sample(200, d, d, 0.4, 1.1);
      const auto q = oracle_ref::random_orthogonal(d, 99 + d);
      const auto a = mardia(x);
      const auto b = mardia(oracle_ref::rotate(x, q));
      CAPTURE(d);
      CHECK(std::fabs(a.skewness - b.skewness) <= 1e-9 * std::max(1.0, a.skewness));
      CHECK(std::fabs(a.kurtosis - b.kurtosis) <= 1e-9 * std::max(1.0, a.kurtosis));
    }
  }

  SUBCASE("symmetric sample has zero skewness") {
    const auto x = oracle_ref::gaussian_sample(40, 6, 3);
    Matrix m(80, 6);
    for (std::size_t i = 0; i < 40; ++i)
      for (std::size_t c = 0; c < 6; ++c) {
        m(i, c) = x.points()(i, c);
        m(i + 40, c) = -x.points()(i, c);
      }
    CHECK(std::fabs(mardia(Sample(m)).skewness) <= 1e-9);
    CHECK(std::fabs(detail::skewness_tensor(Sample(m))) <= 1e-9);
  }

  SUBCASE("kurtosis scales as c^4") {
    const auto x = oracle_ref::gaussian_sample(64, 3, 5);
    Matrix m = x.points();
    for (double& v : m.values()) v *= 2.0;
    CHECK(mardia(Sample(m)).kurtosis == 16.0 * mardia(x).kurtosis);
  }
}

TEST_CASE("mardia on N(0, I) is near its finite-sample expected values") {
  // E b2 = D(D + 2) exactly, with variance (E|x|^8 - (E|x|^4)^2) / n. The diagonal j = k terms give E b1 = E|x|^6 / n =
  // D(D + 2)(D + 4) / n; the off-diagonal part has mean 0 and standard
  // deviation sqrt(30 D(D + 2)(D + 4)) / n.
  const std::size_t d = 20;
  const double n = 10000;
  const auto st = mardia(oracle_ref::gaussian_sample(10000, d, 2024));
  const double dd = d;
  const double kurt_sd = std::sqrt((dd * (dd + 2) * (dd + 4) * (dd + 6) - dd * dd * (dd + 2) * (dd + 2)) / n);
  const double skew_mean = d * (d + 2.0) * (d + 4.0) / n;
  const double skew_sd = std::sqrt(30.0 * d * (d + 2) * (d + 4)) / n;
  CHECK(std::fabs(st.normalized_kurtosis) < 4 * kurt_sd);
  CHECK(std::fabs(st.skewness - skew_mean) < 4 * skew_sd);
}
