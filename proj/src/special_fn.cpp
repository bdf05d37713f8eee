#include "cwae/special_fn.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace cwae {
namespace {

void check_args(int dim, double s) {
  if (dim < 2) throw std::domain_error("phi: dimension must be >= 2, got " + std::to_string(dim));
  if (!(s >= 0.0)) throw std::domain_error("phi: argument must be >= 0");
}

constexpr int kQuadratureNodes = 200;

struct GaussLegendre {
  std::array<double, kQuadratureNodes> nodes{};
  std::array<double, kQuadratureNodes> weights{};

  GaussLegendre() {
    constexpr int n = kQuadratureNodes;
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::fabs(dx) < 1e-16) break;
      }
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      nodes[i] = -x;
      nodes[n - 1 - i] = x;
      weights[i] = w;
      weights[n - 1 - i] = w;
    }
  }
};

const GaussLegendre& gauss_legendre() {
  static const GaussLegendre rule;
  return rule;
}

}  // namespace

std::string_view to_string(PhiMode mode) noexcept {
  switch (mode) {
    case PhiMode::ExactSeries:
      return "exact";
    case PhiMode::AsymptoticLargeD:
      return "asymptotic";
    case PhiMode::BesselD2:
      return "bessel2";
  }
  return "unknown";
}

PhiMode resolve_phi_mode(int dim, std::optional<PhiMode> requested) {
  if (dim < 2) throw std::domain_error("phi: dimension must be >= 2, got " + std::to_string(dim));
  if (requested) {
    if (*requested == PhiMode::BesselD2 && dim != 2) {
      throw std::domain_error("phi: bessel2 mode requires D = 2, got D = " + std::to_string(dim));
    }
    return *requested;
  }
  if (dim == 2) return PhiMode::BesselD2;
  if (dim >= 20) return PhiMode::AsymptoticLargeD;
  return PhiMode::ExactSeries;
}

namespace detail {

// Kummer's transformation 1F1(a; b; -s) = e^{-s} 1F1(b - a; b; s) turns the
// alternating series into one with positive terms.
double phi_series(int dim, double s) {
  const double b = 0.5 * dim;
  const double c = b - 0.5;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < 10000; ++k) {
    term *= (c + k) / (b + k) * s / (k + 1.0);
    sum += term;
    if (term < 1e-16 * sum) break;
  }
  return std::exp(-s) * sum;
}

// phi_D(s) = C_D * 2 * int_0^{pi/2} exp(-s sin^2 t) cos^{D-2} t dt, obtained from
// the integral representation over [-1, 1] with x = sin t. The integrand is
// bounded by exp(-(s + (D-2)/2) sin^2 t), so the range is cut where it drops
// below e^-745.
double phi_quadrature(int dim, double s) {
  const double decay = s + 0.5 * (dim - 2);
  double upper = std::numbers::pi / 2.0;
  if (decay > 745.0) upper = std::asin(std::sqrt(745.0 / decay));
  const double log_norm = std::lgamma(0.5 * dim) - std::lgamma(0.5) - std::lgamma(0.5 * (dim - 1));
  const auto& rule = gauss_legendre();
  const double half = 0.5 * upper;
  double sum = 0.0;
  for (int i = 0; i < kQuadratureNodes; ++i) {
    const double t = half * (rule.nodes[i] + 1.0);
    const double st = std::sin(t);
    const double ct = std::cos(t);
    const double log_f = -s * st * st + (dim - 2) * std::log(ct);
    sum += rule.weights[i] * std::exp(log_f);
  }
  return 2.0 * std::exp(log_norm) * half * sum;
}

// Large-argument expansion
//   1F1(a; b; -s) ~ Gamma(b)/Gamma(b - a) s^-a sum_k (a)_k (a - b + 1)_k / (k! s^k),
// used only when the neglected e^-s part is below double precision and the
// series reaches 1e-17 before its terms start to grow.
std::optional<double> phi_large_s(int dim, double s) {
  constexpr int kMaxTerms = 400;
  struct Constants {
    int dim = 0;
    double prefactor = 0.0;  // Gamma(b) / Gamma(b - a)
    double min_s = 0.0;      // e^-s part is negligible for s >= min_s
    std::vector<double> coeff;  // (a)_k (a - b + 1)_k / k!
  };
  thread_local Constants c;
  const double a = 0.5;
  const double b = 0.5 * dim;
  if (c.dim != dim) {
    c.dim = dim;
    c.prefactor = std::exp(std::lgamma(b) - std::lgamma(b - a));
    const double log_ratio = std::lgamma(b - a) - std::lgamma(a);
    auto tail = [&](double t) { return -t + (2.0 * a - b) * std::log(t) + log_ratio; };
    double lo = std::max(1.0, b);
    double hi = lo + 64.0;
    while (tail(hi) > -40.0) hi *= 2.0;
    for (int i = 0; i < 60; ++i) {
      const double mid = 0.5 * (lo + hi);
      (tail(mid) > -40.0 ? lo : hi) = mid;
    }
    c.min_s = hi;
    c.coeff.assign(kMaxTerms + 1, 0.0);
    c.coeff[0] = 1.0;
    for (int k = 0; k < kMaxTerms; ++k) c.coeff[k + 1] = c.coeff[k] * (a + k) * (a - b + 1.0 + k) / (k + 1.0);
  }
  if (s < c.min_s) return std::nullopt;
  const double inv_s = 1.0 / s;
  double power = 1.0;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k <= kMaxTerms; ++k) {
    power *= inv_s;
    const double next = c.coeff[k] * power;
    if (next == 0.0) return c.prefactor * sum / std::sqrt(s);
    if (std::fabs(next) >= std::fabs(term)) return std::nullopt;
    sum += next;
    term = next;
    if (std::fabs(term) < 1e-17 * std::fabs(sum)) return c.prefactor * sum / std::sqrt(s);
  }
  return std::nullopt;
}

double phi_bessel_d2_small(double s) {
  const double t = s / 7.5;
  const double t2 = t * t;
  const double poly =
      1.0 +
      t2 * (3.5156229 +
            t2 * (3.0899424 + t2 * (1.2067492 + t2 * (0.2659732 + t2 * (0.0360768 + t2 * 0.0045813)))));
  return std::exp(-0.5 * s) * poly;
}

double phi_bessel_d2_large(double s) {
  const double u = 7.5 / s;  // 1/t
  const double poly =
      0.39894228 +
      u * (0.01328592 +
           u * (0.00225319 +
                u * (-0.00157565 +
                     u * (0.0091628 +
                          u * (-0.02057706 + u * (0.02635537 + u * (-0.01647633 + u * 0.00392377)))))));
  return std::sqrt(2.0 / s) * poly;
}

}  // namespace detail

double phi_exact(int dim, double s) {
  check_args(dim, s);
  if (s == 0.0) return 1.0;
  if (s <= kPhiSeriesSwitch) return detail::phi_series(dim, s);
  if (auto v = detail::phi_large_s(dim, s)) return *v;
  return detail::phi_quadrature(dim, s);
}

double phi_asymptotic(int dim, double s) {
  check_args(dim, s);
  return 1.0 / std::sqrt(1.0 + 4.0 * s / (2.0 * dim - 3.0));
}

double phi_asymptotic_derivative(int dim, double s) {
  check_args(dim, s);
  const double denom = 2.0 * dim - 3.0;
  const double base = 1.0 + 4.0 * s / denom;
  return -(2.0 / denom) / (base * std::sqrt(base));
}

double phi_bessel_d2(double s) {
  if (!(s >= 0.0)) throw std::domain_error("phi: argument must be >= 0");
  return s <= 7.5 ? detail::phi_bessel_d2_small(s) : detail::phi_bessel_d2_large(s);
}

double phi(int dim, double s, std::optional<PhiMode> mode) {
  switch (resolve_phi_mode(dim, mode)) {
    case PhiMode::ExactSeries:
      return phi_exact(dim, s);
    case PhiMode::AsymptoticLargeD:
      return phi_asymptotic(dim, s);
    case PhiMode::BesselD2:
      return phi_bessel_d2(s);
  }
  throw std::logic_error("phi: unhandled mode");
}

}  // namespace cwae
