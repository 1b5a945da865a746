#include <cmath>
#include <sstream>
#include <string>

#include <doctest.h>

#include "duality/analysis.hpp"
#include "duality/montecarlo.hpp"

using namespace duality;

namespace {

RunConfig small_config(double overlap, std::uint64_t n, std::uint64_t seed) {
  RunConfig config;
  config.overlap = overlap;
  config.n_samples = n;
  config.seed = seed;
  return config;
}

}  // namespace

TEST_CASE("run configuration validation") {
  CHECK_NOTHROW(small_config(0.5, 10, 1).validate());

  RunConfig bad = small_config(1.5, 10, 1);
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = small_config(0.5, 10, 1);
  bad.n_bins = 8;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = small_config(0.5, 10, 1);
  bad.x_max = 0.5;  // less than 5 envelope widths
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = small_config(0.5, 10, 1);
  bad.n_streams = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("single quanton draws") {
  const SlitGeometry geom = SlitGeometry::desk_default();

  SUBCASE("perfect detector: every draw is conclusive") {
    RandomStream rng(501);
    int slit1 = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
      const QuantonRecord rec = sample_quanton(0.0, geom, rng);
      CHECK(rec.ancilla == AncillaOutcome::A1);
      CHECK(rec.verdict != PathVerdict::Inconclusive);
      if (rec.verdict == PathVerdict::Slit1) ++slit1;
    }
    // Fair coin between the slits.
    CHECK(std::abs(slit1 / static_cast<double>(n) - 0.5) <= 4.0 * std::sqrt(0.25 / n));
  }

  SUBCASE("blind detector: every draw is inconclusive") {
    RandomStream rng(502);
    for (int i = 0; i < 10000; ++i) {
      const QuantonRecord rec = sample_quanton(1.0, geom, rng);
      CHECK(rec.ancilla == AncillaOutcome::A2);
      CHECK(rec.verdict == PathVerdict::Inconclusive);
    }
  }

  SUBCASE("verdicts pair with the ancilla outcome") {
    RandomStream rng(503);
    for (int i = 0; i < 10000; ++i) {
      const QuantonRecord rec = sample_quanton(0.5, geom, rng);
      const bool conclusive = rec.verdict != PathVerdict::Inconclusive;
      CHECK(conclusive == (rec.ancilla == AncillaOutcome::A1));
      CHECK(std::isfinite(rec.x));
    }
  }

  SUBCASE("conclusive positions follow the envelope") {
    RandomStream rng(504);
    const int n = 200000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
      const QuantonRecord rec = sample_quanton(0.0, geom, rng);
      sum += rec.x;
      sum_sq += rec.x * rec.x;
    }
    const double w = geom.envelope_width;
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    CHECK(std::abs(mean) <= 4.0 * w / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(var - w * w) <= 4.0 * w * w * std::sqrt(2.0 / n));
  }

  RandomStream rng(505);
  CHECK_THROWS_AS(sample_quanton(-0.2, geom, rng), std::invalid_argument);
}

TEST_CASE("experiment bookkeeping") {
  SUBCASE("zero samples is a valid empty run") {
    const ExperimentResult result = run_experiment(small_config(0.5, 0, 1));
    CHECK(result.n_samples == 0);
    CHECK(result.n_a1 == 0);
    CHECK(result.n_a2 == 0);
    CHECK(result.all.total() == 0);
  }

  SUBCASE("counts are conserved") {
    for (std::uint32_t streams : {1u, 2u, 3u}) {
      RunConfig config = small_config(0.4, 100003, 77);
      config.n_streams = streams;
      const ExperimentResult result = run_experiment(config);
      CHECK(result.n_a1 + result.n_a2 == result.n_samples);
      CHECK(result.a1.total() + result.rejected_a1 == result.n_a1);
      CHECK(result.a2.total() + result.rejected_a2 == result.n_a2);
      CHECK(result.all.total() == result.a1.total() + result.a2.total());
      CHECK(result.n_slit1 + result.n_slit2 == result.n_a1);
      for (std::size_t b = 0; b < result.all.counts.size(); ++b)
        CHECK(result.all.counts[b] == result.a1.counts[b] + result.a2.counts[b]);
    }
  }

  SUBCASE("identical configs give identical results") {
    RunConfig config = small_config(0.3, 50000, 123);
    config.n_streams = 4;
    const ExperimentResult a = run_experiment(config);
    const ExperimentResult b = run_experiment(config);
    CHECK(a.n_a1 == b.n_a1);
    CHECK(a.rejected_a1 == b.rejected_a1);
    CHECK(a.rejected_a2 == b.rejected_a2);
    CHECK(a.a1.counts == b.a1.counts);
    CHECK(a.a2.counts == b.a2.counts);
    CHECK(a.all.counts == b.all.counts);
  }

  SUBCASE("different seeds decorrelate") {
    const ExperimentResult a = run_experiment(small_config(0.3, 50000, 1));
    const ExperimentResult b = run_experiment(small_config(0.3, 50000, 2));
    CHECK(a.a1.counts != b.a1.counts);
  }
}

TEST_CASE("ancilla branch statistics") {
  const std::uint64_t n = 1'000'000;
  const ExperimentResult result = run_experiment(small_config(0.25, n, 2024));
  const double fraction = static_cast<double>(result.n_a2) / static_cast<double>(n);
  CHECK(std::abs(fraction - 0.25) <= 3.0 * std::sqrt(0.25 * 0.75 / static_cast<double>(n)));
}

TEST_CASE("sub-ensemble fringe content") {
  const std::uint64_t n = 1'000'000;
  const double c = 0.3;
  const ExperimentResult result = run_experiment(small_config(c, n, 6021));
  const SlitGeometry geom = SlitGeometry::desk_default();

  const FringeEstimate a1 = visibility_phasor(result.a1, geom);
  const FringeEstimate a2 = visibility_phasor(result.a2, geom);
  const FringeEstimate all = visibility_phasor(result.all, geom);

  CHECK(a1.v_hat <= 0.01);
  CHECK(a2.v_hat >= 0.99);
  CHECK(std::abs(all.v_hat - c) <= 0.01);
}

TEST_CASE("histogram CSV schema") {
  RunConfig config = small_config(0.5, 2000, 9);
  config.n_bins = 32;
  const ExperimentResult result = run_experiment(config);
  std::ostringstream out;
  write_csv(result, out);

  std::istringstream in(out.str());
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "bin_left_m,bin_right_m,count_a1,count_a2,count_all");
  std::size_t rows = 0;
  std::uint64_t total = 0;
  while (std::getline(in, line)) {
    ++rows;
    const std::size_t last = line.rfind(',');
    total += std::stoull(line.substr(last + 1));
  }
  CHECK(rows == 32);
  CHECK(total == result.all.total());
}
