#pragma once

// Test-only reference implementations. None of these call into the code paths
// they are used to check.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "cwae/matrix.hpp"
#include "cwae/mlp.hpp"
#include "cwae/sample.hpp"

namespace oracle_ref {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1] (Newton iteration on P_n).
QuadratureRule gauss_legendre(int n);

/// phi_D(s) from Gauss-Legendre quadrature of the integral representation
/// Gamma(D/2)/(Gamma(1/2)Gamma((D-1)/2)) * int_{-1}^{1} e^{-s x^2} (1-x^2)^{(D-3)/2} dx.
double phi_by_quadrature(int dim, double s, const QuadratureRule& rule);

/// I0(x) from its power series sum (x^2/4)^k / (k!)^2.
double bessel_i0_series(double x, int terms = 50);

/// e^{-s/2} I0(s/2), i.e. 1F1(1/2; 1; -s).
double phi2_by_bessel_series(double s);

/// Direct triple-sum evaluation of the two-sample closed form with weights
/// 1/n^2, 1/k^2, 2/(nk), using the supplied phi.
double cw2_reference(const cwae::Sample& x, const cwae::Sample& y, double gamma,
                     const std::function<double(double)>& phi);

/// Direct evaluation of the closed form against N(0, I) with the supplied phi.
double cw2_normal_reference(const cwae::Sample& x, double gamma, const std::function<double(double)>& phi);

/// Trapezoid rule for int |lambda_gamma(a) - lambda_gamma(b)|^2 on [lo, hi].
double l2_smoothed_trapezoid(std::span<const double> a, std::span<const double> b, double gamma, double lo,
                             double hi, std::size_t points);

/// Forward pass written independently of cwae::nn::forward (per-point loops).
std::vector<double> reference_reconstruct(const cwae::nn::MlpParams& params, std::span<const double> x);

/// Random orthogonal matrix (QR of a Gaussian matrix via Gram-Schmidt).
cwae::Matrix random_orthogonal(std::size_t dim, std::uint64_t seed);

/// Rows of x multiplied by q (x * q).
cwae::Sample rotate(const cwae::Sample& x, const cwae::Matrix& q);

/// Gaussian sample from std::mt19937_64, independent of the library's generator.
cwae::Sample gaussian_sample(std::size_t n, std::size_t dim, std::uint64_t seed, double mean = 0.0,
                             double sd = 1.0);

}  // namespace oracle_ref
