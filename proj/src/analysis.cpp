#include "duality/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace duality {

namespace {

constexpr double kPi = std::numbers::pi;

void check_overlap(double overlap, const char* where) {
  if (!(overlap >= 0.0) || !(overlap <= 1.0))
    throw std::invalid_argument(std::string(where) + ": overlap must lie in [0, 1]");
}

// Value of the parabola through three equidistant points at its vertex.
// Falls back to the middle sample when the points are collinear to rounding.
double refine_extremum(double ym, double y0, double yp) {
  const double denom = ym - 2.0 * y0 + yp;
  const double floor = 1e-13 * std::max({std::abs(ym), std::abs(y0), std::abs(yp), 1e-300});
  if (std::abs(denom) <= floor) return y0;
  const double diff = ym - yp;
  return y0 - diff * diff / (8.0 * denom);
}

FringeEstimate from_phasor_mean(Complex mean, std::size_t n) {
  FringeEstimate est;
  est.method = FringeMethod::Phasor;
  est.std_error = std::sqrt(2.0 / static_cast<double>(n));
  double v = 2.0 * std::abs(mean);
  if (v > 1.0) {
    est.overshoot = true;
    v = std::min(v, 1.05);
  }
  est.v_hat = v;
  return est;
}

}  // namespace

double visibility_analytic(double overlap) {
  check_overlap(overlap, "visibility_analytic");
  return overlap;
}

double distinguishability_q(double overlap) {
  check_overlap(overlap, "distinguishability_q");
  return 1.0 - overlap;
}

double englert_d(double overlap) {
  check_overlap(overlap, "englert_d");
  return std::sqrt(1.0 - overlap * overlap);
}

FringeEstimate visibility_born(const DensityCurve& curve, const SlitGeometry& geometry) {
  geometry.validate();
  const std::size_t n = curve.grid.size();
  if (n < 2 || curve.values.size() != n)
    throw std::invalid_argument("visibility_born: malformed curve");
  const double period = geometry.fringe_period();
  const double step = curve.grid[1] - curve.grid[0];
  if (!(step > 0.0)) throw std::invalid_argument("visibility_born: grid must ascend");
  if (step > period / 32.0)
    throw std::runtime_error("visibility_born: insufficient resolution for the fringe period");
  if (curve.grid.front() > -period / 2.0 || curve.grid.back() < period / 2.0)
    throw std::invalid_argument("visibility_born: curve must cover one fringe period around 0");

  // Envelope-normalized values over the central period (one extra point on
  // each side so the parabolic refinement always has neighbors).
  std::vector<double> ratio;
  std::size_t first = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(curve.grid[i]) > period / 2.0 + 1.5 * step) continue;
    if (first == n) first = i;
    ratio.push_back(curve.values[i] / envelope_intensity(curve.grid[i], geometry));
  }

  std::size_t imax = 0, imin = 0;
  for (std::size_t i = 0; i < ratio.size(); ++i) {
    const double x = curve.grid[first + i];
    if (std::abs(x) > period / 2.0 + 0.5 * step) continue;  // refinement margin only
    if (ratio[i] > ratio[imax]) imax = i;
    if (ratio[i] < ratio[imin]) imin = i;
  }

  auto refined = [&](std::size_t i) {
    if (i == 0 || i + 1 >= ratio.size()) return ratio[i];
    return refine_extremum(ratio[i - 1], ratio[i], ratio[i + 1]);
  };
  const double i_max = refined(imax);
  const double i_min = std::max(refined(imin), 0.0);

  FringeEstimate est;
  est.method = FringeMethod::Born;
  const double sum = i_max + i_min;
  est.v_hat = sum > 0.0 ? (i_max - i_min) / sum : 0.0;
  return est;
}

FringeEstimate visibility_phasor(std::span<const double> samples,
                                 const SlitGeometry& geometry) {
  geometry.validate();
  if (samples.size() < 100)
    throw std::invalid_argument("visibility_phasor: need at least 100 samples");
  const double k = 2.0 * kPi / geometry.fringe_period();
  Complex sum(0.0, 0.0);
  for (double x : samples) sum += std::polar(1.0, k * x);
  return from_phasor_mean(sum / static_cast<double>(samples.size()), samples.size());
}

FringeEstimate visibility_phasor(const SubEnsembleHistogram& histogram,
                                 const SlitGeometry& geometry) {
  geometry.validate();
  const std::uint64_t n = histogram.total();
  if (n < 100)
    throw std::invalid_argument("visibility_phasor: need at least 100 samples");
  const double k = 2.0 * kPi / geometry.fringe_period();
  Complex sum(0.0, 0.0);
  for (std::size_t b = 0; b < histogram.counts.size(); ++b) {
    if (histogram.counts[b] == 0) continue;
    const double center = 0.5 * (histogram.bin_edges[b] + histogram.bin_edges[b + 1]);
    sum += static_cast<double>(histogram.counts[b]) * std::polar(1.0, k * center);
  }
  return from_phasor_mean(sum / static_cast<double>(n), n);
}

double curve_phasor_visibility(const DensityCurve& curve, const SlitGeometry& geometry) {
  geometry.validate();
  const std::size_t n = curve.grid.size();
  if (n < 2) throw std::invalid_argument("curve_phasor_visibility: malformed curve");
  const double k = 2.0 * kPi / geometry.fringe_period();
  Complex acc(0.0, 0.0);
  double mass = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double weight =
        (i == 0 ? curve.grid[1] - curve.grid[0]
                : i + 1 == n ? curve.grid[n - 1] - curve.grid[n - 2]
                             : curve.grid[i + 1] - curve.grid[i - 1]) *
        0.5;
    acc += weight * curve.values[i] * std::polar(1.0, k * curve.grid[i]);
    mass += weight * curve.values[i];
  }
  if (!(mass > 0.0)) throw std::invalid_argument("curve_phasor_visibility: empty curve");
  return 2.0 * std::abs(acc) / mass;
}

DualityReport duality_report(double overlap, const DualityMeasurements& measurements) {
  check_overlap(overlap, "duality_report");
  DualityReport r;
  r.c = overlap;
  r.v_analytic = visibility_analytic(overlap);
  r.d_q = distinguishability_q(overlap);
  r.d_englert = englert_d(overlap);
  r.sum_dq_v = r.d_q + r.v_analytic;
  r.sum_v2_d2 = r.v_analytic * r.v_analytic + r.d_englert * r.d_englert;
  r.identity_residual = std::abs(r.sum_dq_v - 1.0);
  r.square_residual = std::abs(r.sum_v2_d2 - 1.0);
  r.pass_identity = r.identity_residual <= tol::kNorm && r.square_residual <= tol::kNorm;
  r.v_all = measurements.all;
  r.v_a1 = measurements.a1;
  r.v_a2 = measurements.a2;

  // The bounds hold for the exact visibility; a measured estimate is allowed
  // to sit up to 5 standard errors above it before the check fails.
  double v_low = r.v_analytic;
  if (r.v_all)
    v_low = std::max(0.0, r.v_all->v_hat - 5.0 * r.v_all->std_error);
  r.pass_inequality = (r.d_q + v_low <= 1.0 + tol::kNorm) &&
                      (v_low * v_low + r.d_englert * r.d_englert <= 1.0 + tol::kNorm);
  return r;
}

std::string report_json(const DualityReport& report) {
  nlohmann::ordered_json j;
  j["c"] = report.c;
  j["v_analytic"] = report.v_analytic;
  auto estimate = [](const std::optional<FringeEstimate>& e) {
    return e ? nlohmann::ordered_json(e->v_hat) : nlohmann::ordered_json(nullptr);
  };
  j["v_all"] = estimate(report.v_all);
  j["v_a1"] = estimate(report.v_a1);
  j["v_a2"] = estimate(report.v_a2);
  j["d_q"] = report.d_q;
  j["d_englert"] = report.d_englert;
  j["sum_dq_v"] = report.sum_dq_v;
  j["sum_v2_d2"] = report.sum_v2_d2;
  j["pass_identity"] = report.pass_identity;
  j["pass_inequality"] = report.pass_inequality;
  return j.dump(2);
}

void write_json(const DualityReport& report, std::ostream& out) {
  out << report_json(report) << '\n';
}

}  // namespace duality
