#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "duality/detector.hpp"
#include "duality/optics.hpp"
#include "duality/random.hpp"

namespace duality {

struct RunConfig {
  double overlap = 0.5;
  SlitGeometry geometry = SlitGeometry::desk_default();
  std::uint64_t n_samples = 1'000'000;
  std::uint64_t seed = 0;
  std::uint32_t n_bins = 1024;
  double x_max = kDefaultWindow;  // histogram window is [-x_max, x_max]
  std::uint32_t n_streams = 1;

  void validate() const;
};

/// One simulated quanton: ancilla readout, path verdict, screen position.
struct QuantonRecord {
  AncillaOutcome ancilla;
  PathVerdict verdict;
  double x;  // meters
};

enum class EnsembleTag { A1, A2, All };

struct SubEnsembleHistogram {
  EnsembleTag tag = EnsembleTag::All;
  std::vector<double> bin_edges;       // n_bins + 1, uniform
  std::vector<std::uint64_t> counts;   // n_bins

  std::uint64_t total() const;
};

struct ExperimentResult {
  SubEnsembleHistogram a1, a2, all;
  std::uint64_t n_samples = 0;
  std::uint64_t n_a1 = 0, n_a2 = 0;  // ancilla outcomes, including rejected positions
  std::uint64_t rejected_a1 = 0, rejected_a2 = 0;  // landed outside the window
  std::uint64_t n_slit1 = 0, n_slit2 = 0;          // conclusive verdicts
};

/// Draws one quanton. Ancilla is A1 with probability 1 - overlap; the A1
/// screen position follows the bare envelope and the verdict is a fair coin
/// over the slits; the A2 position follows the full-contrast fringe pattern,
/// drawn by rejection against the envelope, and the verdict is Inconclusive.
QuantonRecord sample_quanton(double overlap, const SlitGeometry& geometry, RandomStream& rng);

/// Runs n_samples draws split over n_streams deterministic sub-streams
/// (chunk sizes differ by at most one; streams may run on worker threads) and
/// merges the per-stream tallies in stream order. Same config, same result.
ExperimentResult run_experiment(const RunConfig& config);

/// CSV with header "bin_left_m,bin_right_m,count_a1,count_a2,count_all".
void write_csv(const ExperimentResult& result, std::ostream& out);

}  // namespace duality
