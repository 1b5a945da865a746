#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include <doctest.h>

#include "duality/optics.hpp"
#include "testutil.hpp"

using namespace duality;

namespace {

constexpr double kPi = std::numbers::pi;

QuantonEnvironmentState detector_state(double c) {
  const Complex half(1.0 / std::sqrt(2.0), 0.0);
  const ComplexVector d1 = ComplexVector::basis(2, 0);
  const ComplexVector d2{Complex(c, 0.0), Complex(std::sqrt(1.0 - c * c), 0.0)};
  return QuantonEnvironmentState(d1 * half, d2 * half);
}

QuantonEnvironmentState bare_state() {
  const ComplexVector half{Complex(1.0 / std::sqrt(2.0), 0.0)};
  return QuantonEnvironmentState(half, half);
}

}  // namespace

TEST_CASE("slit geometry") {
  const SlitGeometry geom = SlitGeometry::desk_default();
  CHECK(std::abs(geom.fringe_period() - 0.05) <= 1e-15);
  CHECK_NOTHROW(geom.validate());

  SlitGeometry bad = geom;
  bad.wavelength = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  SlitGeometry narrow = geom;
  narrow.envelope_width = 0.1;  // 2 fringe periods only
  CHECK_THROWS_AS(narrow.validate(), std::invalid_argument);
}

TEST_CASE("slit amplitudes") {
  const SlitGeometry geom = SlitGeometry::desk_default();
  const double w = geom.envelope_width;
  const double peak = std::pow(2.0 * kPi * w * w, -0.25);

  CHECK(std::abs(std::abs(slit_amplitude(0.0, 1, geom)) - peak) <= 1e-15);
  CHECK(std::abs(std::abs(slit_amplitude(0.0, 2, geom)) - peak) <= 1e-15);

  // Relative phase between the two paths is 2 pi x / period.
  const double x = 0.01;
  const Complex rel = slit_amplitude(x, 2, geom) * std::conj(slit_amplitude(x, 1, geom));
  CHECK(std::abs(std::arg(rel) - 2.0 * kPi * x / geom.fringe_period()) <= 1e-12);

  // |psi_j|^2 is the envelope intensity for either path.
  for (double xs : {-0.3, -0.01, 0.0, 0.11, 0.6}) {
    CHECK(std::abs(std::norm(slit_amplitude(xs, 1, geom)) - envelope_intensity(xs, geom)) <=
          1e-15);
    CHECK(std::abs(std::norm(slit_amplitude(xs, 2, geom)) - envelope_intensity(xs, geom)) <=
          1e-15);
  }

  CHECK_THROWS_AS(slit_amplitude(0.0, 3, geom), std::invalid_argument);
  CHECK_THROWS_AS(slit_amplitude(0.0, 0, geom), std::invalid_argument);
}

TEST_CASE("envelope normalization") {
  const SlitGeometry geom = SlitGeometry::desk_default();
  // Fine trapezoid over +-10 widths as an independent quadrature.
  const int n = 200001;
  const double x_max = 10.0 * geom.envelope_width;
  const double h = 2.0 * x_max / (n - 1);
  double integral = 0.0;
  for (int i = 0; i < n; ++i) {
    const double weight = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    integral += weight * envelope_intensity(-x_max + h * i, geom) * h;
  }
  CHECK(std::abs(integral - 1.0) <= 1e-9);
}

TEST_CASE("screen density closed forms") {
  const SlitGeometry geom = SlitGeometry::desk_default();
  const double period = geom.fringe_period();

  // Perfect which-path marking: fringe-free envelope.
  const QuantonEnvironmentState sharp = detector_state(0.0);
  for (double x : {-0.2, 0.0, 0.0123, 0.31})
    CHECK(std::abs(screen_density(sharp, x, geom) - envelope_intensity(x, geom)) <= 1e-12);

  // No environment at all: full-contrast fringes envelope * (1 + cos).
  const QuantonEnvironmentState bare = bare_state();
  for (double x : {-0.11, 0.0, 0.0123, 0.25}) {
    const double expected =
        envelope_intensity(x, geom) * (1.0 + std::cos(2.0 * kPi * x / period));
    CHECK(std::abs(screen_density(bare, x, geom) - expected) <= 1e-12);
  }

  // Partial overlap c: contrast c.
  const QuantonEnvironmentState half = detector_state(0.5);
  for (double x : {-0.07, 0.0, 0.02}) {
    const double expected =
        envelope_intensity(x, geom) * (1.0 + 0.5 * std::cos(2.0 * kPi * x / period));
    CHECK(std::abs(screen_density(half, x, geom) - expected) <= 1e-12);
  }

  const QuantonEnvironmentState unnorm(ComplexVector::basis(2, 0),
                                       ComplexVector::basis(2, 1));
  CHECK_THROWS_AS(screen_density(unnorm, 0.0, geom), std::invalid_argument);
}

TEST_CASE("screen density equals the basis-expansion oracle") {
  const SlitGeometry geom = SlitGeometry::desk_default();
  std::mt19937 gen(8201);
  std::uniform_real_distribution<double> xs(-kDefaultWindow, kDefaultWindow);
  const std::size_t dims[3] = {1, 2, 4};
  for (int trial = 0; trial < 1000; ++trial) {
    const QuantonEnvironmentState state = testutil::random_state(gen, dims[trial % 3]);
    const double x = xs(gen);
    CHECK(std::abs(screen_density(state, x, geom) -
                   testutil::brute_force_density(state, x, geom)) <= 1e-12);
  }
}

TEST_CASE("density curves") {
  const SlitGeometry geom = SlitGeometry::desk_default();

  const DensityCurve flat = density_curve(detector_state(0.0), geom, kDefaultWindow, 257);
  CHECK(flat.grid.front() == doctest::Approx(-kDefaultWindow));
  CHECK(flat.grid.back() == doctest::Approx(kDefaultWindow));
  REQUIRE(flat.grid.size() == 257);
  for (std::size_t i = 0; i < flat.grid.size(); ++i)
    CHECK(std::abs(flat.values[i] - envelope_intensity(flat.grid[i], geom)) <= 1e-12);
  CHECK_FALSE(flat.window_warning);

  // Unit mass within 1e-6 on the default window for any overlap.
  for (double c : {0.0, 0.5, 1.0}) {
    const DensityCurve curve =
        density_curve(detector_state(c), geom, kDefaultWindow, kDefaultCurvePoints);
    CHECK(std::abs(curve.integral() - 1.0) <= 1e-6);
    CHECK_FALSE(curve.window_warning);
    for (double v : curve.values) CHECK(v >= 0.0);
  }

  // The full-fringe pattern at 8 widths, denser check from the contract.
  const DensityCurve wide = density_curve(bare_state(), geom, 8.0 * geom.envelope_width, 4096);
  CHECK(std::abs(wide.integral() - 1.0) <= 1e-6);

  // A window of one envelope width captures ~68% of the mass only.
  const DensityCurve clipped = density_curve(detector_state(0.0), geom, 0.15, 64);
  CHECK(clipped.window_warning);

  CHECK_THROWS_AS(density_curve(detector_state(0.0), geom, kDefaultWindow, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(density_curve(detector_state(0.0), geom, -1.0, 64),
                  std::invalid_argument);
}

TEST_CASE("fringe maxima are spaced one period apart") {
  const SlitGeometry geom = SlitGeometry::desk_default();
  const DensityCurve curve = density_curve(bare_state(), geom, 0.12, 4801);
  const double period = geom.fringe_period();
  const double step = curve.grid[1] - curve.grid[0];

  // Divide out the Gaussian envelope first: it pulls raw maxima toward the
  // center by a few 1e-4, which is not a statement about the fringe period.
  std::vector<double> modulation(curve.grid.size());
  for (std::size_t i = 0; i < curve.grid.size(); ++i)
    modulation[i] = curve.values[i] / envelope_intensity(curve.grid[i], geom);

  std::vector<double> peaks;
  for (std::size_t i = 1; i + 1 < modulation.size(); ++i)
    if (modulation[i] > modulation[i - 1] && modulation[i] > modulation[i + 1] &&
        modulation[i] > 1.0)
      peaks.push_back(curve.grid[i]);
  REQUIRE(peaks.size() >= 3);
  for (double peak : peaks) {
    const double nearest = std::round(peak / period) * period;
    CHECK(std::abs(peak - nearest) <= step + 1e-12);
  }
  for (std::size_t i = 0; i + 1 < peaks.size(); ++i)
    CHECK(std::abs((peaks[i + 1] - peaks[i]) - period) <= 2.0 * step + 1e-12);
}

TEST_CASE("orthogonal environment states kill the fringes") {
  const SlitGeometry geom = SlitGeometry::desk_default();
  std::mt19937 gen(8202);
  for (int trial = 0; trial < 20; ++trial) {
    // Random orthonormal chi pair, each carrying half the weight.
    const auto basis = testutil::random_orthonormal(gen, 4, 2);
    const Complex half(1.0 / std::sqrt(2.0), 0.0);
    const QuantonEnvironmentState state(basis[0] * half, basis[1] * half);
    for (double x : {-0.04, 0.013, 0.22})
      CHECK(std::abs(screen_density(state, x, geom) - envelope_intensity(x, geom)) <= 1e-12);
  }
}

TEST_CASE("density curve CSV schema") {
  const SlitGeometry geom = SlitGeometry::desk_default();
  const DensityCurve curve = density_curve(detector_state(0.5), geom, kDefaultWindow, 16);
  std::ostringstream out;
  write_csv(curve, out);
  std::istringstream in(out.str());
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "x_m,density_per_m");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(line.find(',') != std::string::npos);
  }
  CHECK(rows == 16);

  // First row round-trips the leftmost grid point.
  std::istringstream again(out.str());
  std::getline(again, line);
  std::getline(again, line);
  const double x0 = std::stod(line.substr(0, line.find(',')));
  CHECK(x0 == -kDefaultWindow);
}
