#pragma once

#include <optional>
#include <string_view>

namespace cwae {

/// Evaluation regime for phi_D(s) = 1F1(1/2; D/2; -s).
enum class PhiMode {
  ExactSeries,       ///< power series, quadrature beyond kPhiSeriesSwitch
  AsymptoticLargeD,  ///< (1 + 4s/(2D-3))^(-1/2)
  BesselD2,          ///< polynomial approximation of e^(-s/2) I0(s/2), D = 2 only
};

std::string_view to_string(PhiMode mode) noexcept;

/// Above this argument the series path hands over to quadrature.
inline constexpr double kPhiSeriesSwitch = 40.0;

/// Default policy: D = 2 -> BesselD2, D >= 20 -> AsymptoticLargeD, otherwise
/// ExactSeries. An explicit mode is validated against D and returned as is.
/// Throws std::domain_error for D < 2 or BesselD2 with D != 2.
PhiMode resolve_phi_mode(int dim, std::optional<PhiMode> requested = std::nullopt);

/// 1F1(1/2; D/2; -s) to ~1e-14 relative accuracy.
double phi_exact(int dim, double s);

/// (1 + 4s/(2D-3))^(-1/2).
double phi_asymptotic(int dim, double s);

/// d/ds of phi_asymptotic; strictly negative.
double phi_asymptotic_derivative(int dim, double s);

/// Two-branch Abramowitz-Stegun polynomial for phi_2, branching at s = 7.5.
double phi_bessel_d2(double s);

/// Dispatches on the resolved mode.
double phi(int dim, double s, std::optional<PhiMode> mode = std::nullopt);

namespace detail {
// Exposed for tests that compare the two branches at the switch point.
double phi_bessel_d2_small(double s);
double phi_bessel_d2_large(double s);
double phi_series(int dim, double s);
double phi_quadrature(int dim, double s);
/// Empty when the large-argument expansion cannot reach full precision.
std::optional<double> phi_large_s(int dim, double s);
}  // namespace detail

}  // namespace cwae
