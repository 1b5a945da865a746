#pragma once

#include "duality/hilbert.hpp"
#include "duality/random.hpp"

namespace duality {

/// Which-path detector states with a tunable real overlap c = <d1|d2> in [0, 1].
/// c = 0 is a perfect detector, c = 1 records nothing.
struct DetectorPair {
  double overlap;
  ComplexVector d1, d2;  // dim 2, unit norm
};

/// Unsharp-to-sharp discrimination stage on detector (x) ancilla (dim 4).
/// The interaction sends d_i (x) a0 to alpha p_i (x) a1 + beta q (x) a2 with
/// orthonormal p1, p2 and alpha^2 = 1 - c, beta^2 = c: reading a1 on the
/// ancilla leaves orthogonal (perfectly distinguishable) detector states,
/// reading a2 leaves a path-independent one.
/// Ancilla convention: a0 = a1 = basis 0, a2 = basis 1; joint index is
/// detector_index * 2 + ancilla_index.
struct UqsdUnitary {
  DetectorPair detectors;
  double alpha;  // conclusive-branch amplitude, sqrt(1 - c)
  double beta;   // inconclusive-branch amplitude, sqrt(c)
  ComplexMatrix matrix;
  ComplexVector p1, p2, q;  // detector-space outputs
};

/// Ancilla readout: A1 = conclusive branch, A2 = inconclusive branch.
enum class AncillaOutcome { A1, A2 };

enum class PathVerdict { Slit1, Slit2, Inconclusive };

DetectorPair make_detector_pair(double overlap);

/// State after the quanton-detector interaction, each path tagged by its
/// detector state: chi_j = d_j / sqrt(2), with the idle ancilla appended when
/// requested (env dim 2 or 4).
QuantonEnvironmentState correlated_state(const DetectorPair& pair, bool with_ancilla);

/// Builds the discrimination unitary for overlap c via unitary completion of
/// the two prescribed columns. Handles both degenerate ends: c = 0 (detector
/// already sharp) and c = 1 (the two columns coincide).
UqsdUnitary build_uqsd(double overlap);

/// Applies the discrimination unitary to the environment of a dim-4 state.
QuantonEnvironmentState apply_uqsd(const QuantonEnvironmentState& state, const UqsdUnitary& u);

struct AncillaProjection {
  double probability;                 // Born weight of the outcome
  QuantonEnvironmentState conditional;  // renormalized dim-2 detector state
};

/// Projects the ancilla factor of a dim-4 state onto one readout outcome.
/// Throws "empty branch" when the outcome has (numerically) zero weight.
AncillaProjection project_ancilla(const QuantonEnvironmentState& state, AncillaOutcome outcome);

/// Probability that the discrimination succeeds: 1 - c.
double uqsd_success_probability(double overlap);

/// One discrimination trial: prepares d_true_path (x) a0, applies the
/// unitary, samples the ancilla, then on A1 samples the {p1, p2} basis.
/// Conclusive verdicts never name the wrong slit.
PathVerdict discriminate(int true_path, const UqsdUnitary& u, RandomStream& rng);

}  // namespace duality
