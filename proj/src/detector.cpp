#include "duality/detector.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace duality {

namespace {

void check_overlap(double overlap, const char* where) {
  if (!(overlap >= 0.0) || !(overlap <= 1.0))
    throw std::invalid_argument(std::string(where) + ": overlap must lie in [0, 1]");
}

// Exact zero amplitudes pick up O(1e-16) dust from the completed unitary;
// probabilities below this floor are treated as identically zero so branch
// sampling stays exact for any number of trials.
constexpr double kProbFloor = 1e-24;

double snap(double probability) { return probability < kProbFloor ? 0.0 : probability; }

}  // namespace

DetectorPair make_detector_pair(double overlap) {
  check_overlap(overlap, "make_detector_pair");
  ComplexVector d1 = ComplexVector::basis(2, 0);
  ComplexVector d2{Complex(overlap, 0.0), Complex(std::sqrt(1.0 - overlap * overlap), 0.0)};
  return DetectorPair{overlap, std::move(d1), d2.normalized()};
}

QuantonEnvironmentState correlated_state(const DetectorPair& pair, bool with_ancilla) {
  const Complex half(1.0 / std::sqrt(2.0), 0.0);
  if (!with_ancilla)
    return QuantonEnvironmentState::make_normalized(pair.d1 * half, pair.d2 * half);
  const ComplexVector a0 = ComplexVector::basis(2, 0);
  return QuantonEnvironmentState::make_normalized(tensor(pair.d1, a0) * half,
                                                  tensor(pair.d2, a0) * half);
}

UqsdUnitary build_uqsd(double overlap) {
  check_overlap(overlap, "build_uqsd");
  DetectorPair pair = make_detector_pair(overlap);
  const double alpha = std::sqrt(1.0 - overlap);
  const double beta = std::sqrt(overlap);

  ComplexVector p1 = ComplexVector::basis(2, 0);
  ComplexVector p2 = ComplexVector::basis(2, 1);
  ComplexVector q{Complex(1.0 / std::sqrt(2.0), 0.0), Complex(1.0 / std::sqrt(2.0), 0.0)};
  const ComplexVector a0 = ComplexVector::basis(2, 0);
  const ComplexVector a1 = ComplexVector::basis(2, 0);
  const ComplexVector a2 = ComplexVector::basis(2, 1);

  auto image = [&](const ComplexVector& p) {
    return tensor(p, a1) * Complex(alpha, 0.0) + tensor(q, a2) * Complex(beta, 0.0);
  };
  std::vector<std::pair<ComplexVector, ComplexVector>> prescribed;
  prescribed.emplace_back(tensor(pair.d1, a0), image(p1));
  prescribed.emplace_back(tensor(pair.d2, a0), image(p2));

  ComplexMatrix matrix = complete_unitary(prescribed);
  return UqsdUnitary{std::move(pair), alpha,         beta,
                     std::move(matrix), std::move(p1), std::move(p2),
                     std::move(q)};
}

QuantonEnvironmentState apply_uqsd(const QuantonEnvironmentState& state, const UqsdUnitary& u) {
  if (state.env_dim() != 4)
    throw std::invalid_argument("apply_uqsd: dimension mismatch, need detector (x) ancilla");
  return QuantonEnvironmentState::make_normalized(u.matrix.apply(state.chi(1)),
                                                  u.matrix.apply(state.chi(2)));
}

AncillaProjection project_ancilla(const QuantonEnvironmentState& state, AncillaOutcome outcome) {
  if (state.env_dim() != 4)
    throw std::invalid_argument("project_ancilla: dimension mismatch, need detector (x) ancilla");
  const std::size_t a = (outcome == AncillaOutcome::A1) ? 0 : 1;

  ComplexVector chi1(2), chi2(2);
  for (std::size_t i = 0; i < 2; ++i) {
    chi1[i] = state.chi(1)[2 * i + a];
    chi2[i] = state.chi(2)[2 * i + a];
  }
  const double probability = chi1.norm_sq() + chi2.norm_sq();
  if (probability <= 1e-14)
    throw std::runtime_error("project_ancilla: empty branch, outcome has zero probability");
  return AncillaProjection{probability,
                           QuantonEnvironmentState::make_normalized(chi1, chi2)};
}

double uqsd_success_probability(double overlap) {
  check_overlap(overlap, "uqsd_success_probability");
  return 1.0 - overlap;
}

PathVerdict discriminate(int true_path, const UqsdUnitary& u, RandomStream& rng) {
  if (true_path != 1 && true_path != 2)
    throw std::invalid_argument("discriminate: true_path must be 1 or 2");
  const ComplexVector& d = (true_path == 1) ? u.detectors.d1 : u.detectors.d2;
  const ComplexVector out = u.matrix.apply(tensor(d, ComplexVector::basis(2, 0)));

  // Ancilla first (index layout detector * 2 + ancilla).
  const double p_a1 = snap(std::norm(out[0]) + std::norm(out[2]));
  const double p_a2 = snap(std::norm(out[1]) + std::norm(out[3]));
  if (rng.uniform() < p_a2 / (p_a1 + p_a2)) return PathVerdict::Inconclusive;

  // Conclusive branch: measure the conditional detector state in {p1, p2}.
  ComplexVector conditional{out[0], out[2]};
  const double w1 = snap(std::norm(inner(u.p1, conditional)));
  const double w2 = snap(std::norm(inner(u.p2, conditional)));
  return rng.uniform() < w1 / (w1 + w2) ? PathVerdict::Slit1 : PathVerdict::Slit2;
}

}  // namespace duality
