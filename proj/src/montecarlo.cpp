#include "duality/montecarlo.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "duality/text.hpp"

namespace duality {

void RunConfig::validate() const {
  if (!(overlap >= 0.0) || !(overlap <= 1.0))
    throw std::invalid_argument("RunConfig: overlap must lie in [0, 1]");
  geometry.validate();
  if (n_bins < 16) throw std::invalid_argument("RunConfig: need at least 16 bins");
  if (!(x_max >= 5.0 * geometry.envelope_width))
    throw std::invalid_argument("RunConfig: window must span at least 5 envelope widths");
  if (n_streams < 1) throw std::invalid_argument("RunConfig: need at least 1 stream");
}

std::uint64_t SubEnsembleHistogram::total() const {
  std::uint64_t sum = 0;
  for (std::uint64_t c : counts) sum += c;
  return sum;
}

QuantonRecord sample_quanton(double overlap, const SlitGeometry& geometry, RandomStream& rng) {
  if (!(overlap >= 0.0) || !(overlap <= 1.0))
    throw std::invalid_argument("sample_quanton: overlap must lie in [0, 1]");
  const double w = geometry.envelope_width;
  const double period = geometry.fringe_period();

  if (rng.uniform() < 1.0 - overlap) {
    const double x = w * rng.normal();
    const PathVerdict verdict =
        rng.uniform() < 0.5 ? PathVerdict::Slit1 : PathVerdict::Slit2;
    return QuantonRecord{AncillaOutcome::A1, verdict, x};
  }

  // Full-contrast fringes: target density envelope * (1 + cos), proposal is
  // the envelope itself, so the acceptance ratio (1 + cos)/2 never exceeds 1.
  for (;;) {
    const double x = w * rng.normal();
    const double accept = 0.5 * (1.0 + std::cos(2.0 * std::numbers::pi * x / period));
    if (rng.uniform() < accept)
      return QuantonRecord{AncillaOutcome::A2, PathVerdict::Inconclusive, x};
  }
}

namespace {

struct StreamTally {
  std::vector<std::uint64_t> a1, a2;
  std::uint64_t n_a1 = 0, n_a2 = 0;
  std::uint64_t rejected_a1 = 0, rejected_a2 = 0;
  std::uint64_t n_slit1 = 0, n_slit2 = 0;
};

StreamTally run_stream(const RunConfig& config, std::uint64_t stream, std::uint64_t count) {
  StreamTally tally;
  tally.a1.assign(config.n_bins, 0);
  tally.a2.assign(config.n_bins, 0);
  RandomStream rng(config.seed, stream);
  const double width = 2.0 * config.x_max;

  for (std::uint64_t i = 0; i < count; ++i) {
    const QuantonRecord rec = sample_quanton(config.overlap, config.geometry, rng);
    const bool conclusive = rec.ancilla == AncillaOutcome::A1;
    (conclusive ? tally.n_a1 : tally.n_a2) += 1;
    if (rec.verdict == PathVerdict::Slit1) tally.n_slit1 += 1;
    if (rec.verdict == PathVerdict::Slit2) tally.n_slit2 += 1;

    if (rec.x < -config.x_max || rec.x > config.x_max) {
      (conclusive ? tally.rejected_a1 : tally.rejected_a2) += 1;
      continue;
    }
    std::size_t bin =
        static_cast<std::size_t>((rec.x + config.x_max) / width * config.n_bins);
    if (bin >= config.n_bins) bin = config.n_bins - 1;
    (conclusive ? tally.a1 : tally.a2)[bin] += 1;
  }
  return tally;
}

SubEnsembleHistogram make_histogram(EnsembleTag tag, const std::vector<double>& edges,
                                    std::vector<std::uint64_t> counts) {
  return SubEnsembleHistogram{tag, edges, std::move(counts)};
}

}  // namespace

ExperimentResult run_experiment(const RunConfig& config) {
  config.validate();
  const std::uint64_t streams = config.n_streams;
  std::vector<StreamTally> tallies(streams);

  const std::uint64_t base = config.n_samples / streams;
  const std::uint64_t extra = config.n_samples % streams;
  auto chunk = [&](std::uint64_t s) { return base + (s < extra ? 1 : 0); };

  if (streams == 1) {
    tallies[0] = run_stream(config, 0, config.n_samples);
  } else {
    std::vector<std::thread> workers;
    workers.reserve(streams);
    for (std::uint64_t s = 0; s < streams; ++s)
      workers.emplace_back(
          [&, s] { tallies[s] = run_stream(config, s, chunk(s)); });
    for (std::thread& t : workers) t.join();
  }

  std::vector<double> edges(config.n_bins + 1);
  for (std::uint32_t b = 0; b <= config.n_bins; ++b)
    edges[b] = -config.x_max + 2.0 * config.x_max * b / config.n_bins;

  ExperimentResult result;
  result.n_samples = config.n_samples;
  std::vector<std::uint64_t> a1(config.n_bins, 0), a2(config.n_bins, 0),
      all(config.n_bins, 0);
  for (const StreamTally& t : tallies) {
    for (std::uint32_t b = 0; b < config.n_bins; ++b) {
      a1[b] += t.a1[b];
      a2[b] += t.a2[b];
    }
    result.n_a1 += t.n_a1;
    result.n_a2 += t.n_a2;
    result.rejected_a1 += t.rejected_a1;
    result.rejected_a2 += t.rejected_a2;
    result.n_slit1 += t.n_slit1;
    result.n_slit2 += t.n_slit2;
  }
  for (std::uint32_t b = 0; b < config.n_bins; ++b) all[b] = a1[b] + a2[b];

  result.a1 = make_histogram(EnsembleTag::A1, edges, std::move(a1));
  result.a2 = make_histogram(EnsembleTag::A2, edges, std::move(a2));
  result.all = make_histogram(EnsembleTag::All, edges, std::move(all));
  return result;
}

void write_csv(const ExperimentResult& result, std::ostream& out) {
  out << "bin_left_m,bin_right_m,count_a1,count_a2,count_all\n";
  const std::vector<double>& edges = result.all.bin_edges;
  for (std::size_t b = 0; b + 1 < edges.size(); ++b)
    out << format_double(edges[b]) << ',' << format_double(edges[b + 1]) << ','
        << result.a1.counts[b] << ',' << result.a2.counts[b] << ','
        << result.all.counts[b] << '\n';
}

}  // namespace duality
