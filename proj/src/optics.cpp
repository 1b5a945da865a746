#include "duality/optics.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "duality/text.hpp"

namespace duality {

namespace {
constexpr double kPi = std::numbers::pi;
}

void SlitGeometry::validate() const {
  if (!(slit_separation > 0.0) || !(wavelength > 0.0) || !(screen_distance > 0.0) ||
      !(envelope_width > 0.0))
    throw std::invalid_argument("SlitGeometry: all lengths must be positive");
  if (envelope_width < 3.0 * fringe_period())
    throw std::invalid_argument(
        "SlitGeometry: envelope_width must cover at least 3 fringe periods");
}

Complex slit_amplitude(double x, int path, const SlitGeometry& geometry) {
  if (path != 1 && path != 2)
    throw std::invalid_argument("slit_amplitude: path must be 1 or 2");
  const double w = geometry.envelope_width;
  const double g =
      std::pow(2.0 * kPi * w * w, -0.25) * std::exp(-x * x / (4.0 * w * w));
  const double sign = (path == 1) ? -1.0 : 1.0;
  return std::polar(g, sign * kPi * x / geometry.fringe_period());
}

double envelope_intensity(double x, const SlitGeometry& geometry) {
  const double w = geometry.envelope_width;
  return std::exp(-x * x / (2.0 * w * w)) / (w * std::sqrt(2.0 * kPi));
}

double screen_density(const QuantonEnvironmentState& state, double x,
                      const SlitGeometry& geometry) {
  if (!state.is_normalized())
    throw std::invalid_argument("screen_density: state is not normalized");
  const Complex psi1 = slit_amplitude(x, 1, geometry);
  const Complex psi2 = slit_amplitude(x, 2, geometry);
  const Complex psi[2] = {psi1, psi2};
  Complex acc(0.0, 0.0);
  for (int j = 1; j <= 2; ++j)
    for (int k = 1; k <= 2; ++k)
      acc += psi[j - 1] * std::conj(psi[k - 1]) * inner(state.chi(k), state.chi(j));
  return std::max(acc.real(), 0.0);
}

double DensityCurve::integral() const {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    total += 0.5 * (values[i] + values[i + 1]) * (grid[i + 1] - grid[i]);
  return total;
}

DensityCurve density_curve(const QuantonEnvironmentState& state, const SlitGeometry& geometry,
                           double x_max, int n_points) {
  geometry.validate();
  if (!(x_max > 0.0)) throw std::invalid_argument("density_curve: x_max must be positive");
  if (n_points < 2) throw std::invalid_argument("density_curve: need at least 2 grid points");

  DensityCurve curve;
  curve.grid.resize(n_points);
  curve.values.resize(n_points);
  const double step = 2.0 * x_max / (n_points - 1);
  for (int i = 0; i < n_points; ++i) {
    const double x = -x_max + step * i;
    curve.grid[i] = x;
    curve.values[i] = screen_density(state, x, geometry);
  }
  curve.window_warning = std::abs(curve.integral() - 1.0) > 1e-6;
  return curve;
}

void write_csv(const DensityCurve& curve, std::ostream& out) {
  out << "x_m,density_per_m\n";
  for (std::size_t i = 0; i < curve.grid.size(); ++i)
    out << format_double(curve.grid[i]) << ',' << format_double(curve.values[i]) << '\n';
}

}  // namespace duality
