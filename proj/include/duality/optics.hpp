#pragma once

#include <iosfwd>
#include <vector>

#include "duality/hilbert.hpp"

namespace duality {

/// Far-field double-slit geometry with a Gaussian intensity envelope.
/// All lengths are in meters.
struct SlitGeometry {
  double slit_separation = 10e-6;
  double wavelength = 500e-9;
  double screen_distance = 1.0;
  double envelope_width = 0.15;  // standard deviation of the intensity envelope

  /// Fringe period on the screen: wavelength * screen_distance / slit_separation.
  double fringe_period() const { return wavelength * screen_distance / slit_separation; }

  /// All lengths positive and envelope_width >= 3 fringe periods. The width
  /// floor keeps the two slit amplitudes numerically orthogonal, so the path
  /// label alone carries the which-way information.
  void validate() const;

  static SlitGeometry desk_default() { return SlitGeometry{}; }
};

/// Default half-width of the observation window (5 envelope widths).
inline constexpr double kDefaultWindow = 0.75;
inline constexpr int kDefaultCurvePoints = 4096;

/// Screen amplitude of one slit at position x:
/// envelope g(x) times a plane-wave phase exp(+-i pi x / period).
/// Path 1 carries the negative phase sign, path 2 the positive one.
Complex slit_amplitude(double x, int path, const SlitGeometry& geometry);

/// g(x)^2: normal density with mean 0 and sigma = envelope_width.
double envelope_intensity(double x, const SlitGeometry& geometry);

/// Probability density at x for a normalized quanton-environment state:
/// sum_{j,k} psi_j(x) conj(psi_k(x)) <chi_k|chi_j>. Real by construction;
/// rounding-level negatives are clamped to zero.
double screen_density(const QuantonEnvironmentState& state, double x,
                      const SlitGeometry& geometry);

struct DensityCurve {
  std::vector<double> grid;    // x positions, meters, ascending and uniform
  std::vector<double> values;  // probability density per meter
  /// Set when the window holds less than 1 - 1e-6 of the total probability.
  bool window_warning = false;

  double integral() const;  // trapezoid rule
};

/// Samples screen_density on a uniform grid over [-x_max, x_max].
/// n_points >= 2; x_max >= 5 envelope widths keeps the warning clear.
DensityCurve density_curve(const QuantonEnvironmentState& state, const SlitGeometry& geometry,
                           double x_max, int n_points);

/// CSV with header "x_m,density_per_m", one row per grid point.
void write_csv(const DensityCurve& curve, std::ostream& out);

}  // namespace duality
