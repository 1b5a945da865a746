#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>

#include "duality/montecarlo.hpp"
#include "duality/optics.hpp"

namespace duality {

/// Fringe visibility of the fixed-overlap state: V = c.
double visibility_analytic(double overlap);

/// Path distinguishability left by the quantum detector: D_Q = 1 - c.
double distinguishability_q(double overlap);

/// Distinguishability of the detector states themselves: D = sqrt(1 - c^2).
double englert_d(double overlap);

enum class FringeMethod { Born, Phasor };

struct FringeEstimate {
  double v_hat = 0.0;
  double std_error = 0.0;  // zero for noiseless curve input
  FringeMethod method = FringeMethod::Born;
  bool overshoot = false;  // raw estimate exceeded 1 before clamping
};

/// Visibility from a noiseless density curve: divide out the envelope, then
/// locate the extrema over the central fringe period with sub-grid parabolic
/// refinement, and return (max - min) / (max + min). The grid must resolve
/// the period with at least 32 points and cover one full period around 0.
FringeEstimate visibility_born(const DensityCurve& curve, const SlitGeometry& geometry);

/// Visibility from sampled positions: v_hat = 2 |mean of exp(i 2 pi x / period)|,
/// std_error = sqrt(2 / N). Needs at least 100 samples. Estimates above 1 are
/// clamped to 1.05 with the overshoot flag set.
FringeEstimate visibility_phasor(std::span<const double> samples, const SlitGeometry& geometry);

/// Same estimator over binned counts, phasors evaluated at bin centers.
FringeEstimate visibility_phasor(const SubEnsembleHistogram& histogram,
                                 const SlitGeometry& geometry);

/// Phasor visibility of a noiseless curve, trapezoid-weighted.
double curve_phasor_visibility(const DensityCurve& curve, const SlitGeometry& geometry);

/// Measured visibilities attached to a report; any subset may be present.
struct DualityMeasurements {
  std::optional<FringeEstimate> all, a1, a2;
};

struct DualityReport {
  double c = 0.0;
  double v_analytic = 0.0;
  double d_q = 0.0;
  double d_englert = 0.0;
  double sum_dq_v = 0.0;    // D_Q + V, analytic
  double sum_v2_d2 = 0.0;   // V^2 + D^2, analytic
  double identity_residual = 0.0;  // |D_Q + V - 1|
  double square_residual = 0.0;    // |V^2 + D^2 - 1|
  std::optional<FringeEstimate> v_all, v_a1, v_a2;
  bool pass_identity = false;
  bool pass_inequality = false;
};

/// Evaluates both duality relations at the given overlap. The identity checks
/// are analytic (tolerance 1e-12). The inequality checks use the measured
/// all-ensemble visibility when present, allowing it a 5 standard-error band;
/// without measurements they fall back to the analytic value.
DualityReport duality_report(double overlap, const DualityMeasurements& measurements = {});

/// Report as a JSON object with fields c, v_analytic, v_all, v_a1, v_a2,
/// d_q, d_englert, sum_dq_v, sum_v2_d2, pass_identity, pass_inequality
/// (absent estimates serialize as null).
std::string report_json(const DualityReport& report);
void write_json(const DualityReport& report, std::ostream& out);

}  // namespace duality
