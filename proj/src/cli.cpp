#include "duality/cli.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "duality/analysis.hpp"
#include "duality/detector.hpp"
#include "duality/montecarlo.hpp"
#include "duality/optics.hpp"
#include "duality/text.hpp"

namespace duality {

namespace {

namespace fs = std::filesystem;

struct CommonOptions {
  double overlap = 0.5;
  double slit_separation = 10e-6;
  double wavelength = 500e-9;
  double screen_distance = 1.0;
  double envelope_width = 0.15;
  std::uint64_t samples = 1'000'000;
  std::uint32_t bins = 1024;
  double window = kDefaultWindow;
  std::uint64_t seed = 0;
  std::uint32_t streams = 1;
  std::string out_dir = ".";
  std::string format = "csv";

  SlitGeometry geometry() const {
    return SlitGeometry{slit_separation, wavelength, screen_distance, envelope_width};
  }
};

void add_common_options(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--overlap", opt.overlap, "Detector state overlap c in [0, 1]")
      ->capture_default_str();
  cmd->add_option("--slit-separation", opt.slit_separation, "Slit separation in meters")
      ->capture_default_str();
  cmd->add_option("--wavelength", opt.wavelength, "Wavelength in meters")
      ->capture_default_str();
  cmd->add_option("--screen-distance", opt.screen_distance, "Screen distance in meters")
      ->capture_default_str();
  cmd->add_option("--envelope-width", opt.envelope_width,
                  "Envelope standard deviation in meters")
      ->capture_default_str();
  cmd->add_option("--samples", opt.samples, "Monte Carlo sample count")
      ->capture_default_str();
  cmd->add_option("--bins", opt.bins, "Histogram bins / curve grid points")
      ->capture_default_str();
  cmd->add_option("--window", opt.window, "Half-width of the screen window in meters")
      ->capture_default_str();
  cmd->add_option("--seed", opt.seed, "Random seed")->capture_default_str();
  cmd->add_option("--streams", opt.streams, "Deterministic random sub-streams")
      ->capture_default_str();
  cmd->add_option("--out-dir", opt.out_dir, "Output directory")->capture_default_str();
  cmd->add_option("--format", opt.format, "Output format for sweep tables")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

// All configuration problems are reported at once, in one message.
void validate_common(const CommonOptions& opt, bool needs_histogram,
                     std::vector<std::string>& issues) {
  if (!(opt.overlap >= 0.0 && opt.overlap <= 1.0))
    issues.push_back("--overlap must lie in [0, 1]");
  if (!(opt.slit_separation > 0.0)) issues.push_back("--slit-separation must be positive");
  if (!(opt.wavelength > 0.0)) issues.push_back("--wavelength must be positive");
  if (!(opt.screen_distance > 0.0)) issues.push_back("--screen-distance must be positive");
  if (!(opt.envelope_width > 0.0)) issues.push_back("--envelope-width must be positive");
  if (opt.slit_separation > 0.0 && opt.wavelength > 0.0 && opt.screen_distance > 0.0 &&
      opt.envelope_width > 0.0 &&
      opt.envelope_width < 3.0 * opt.geometry().fringe_period())
    issues.push_back("--envelope-width must cover at least 3 fringe periods");
  if (needs_histogram && opt.bins < 16) issues.push_back("--bins must be at least 16");
  if (!needs_histogram && opt.bins < 2) issues.push_back("--bins must be at least 2");
  if (!(opt.window >= 5.0 * opt.envelope_width))
    issues.push_back("--window must span at least 5 envelope widths");
  if (opt.streams < 1) issues.push_back("--streams must be at least 1");
}

int fail_validation(const std::vector<std::string>& issues) {
  std::ostringstream msg;
  msg << "invalid configuration:";
  for (const std::string& issue : issues) msg << "\n  - " << issue;
  std::cerr << msg.str() << '\n';
  return 1;
}

fs::path prepare_out_dir(const CommonOptions& opt) {
  fs::path dir(opt.out_dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

RunConfig make_run_config(const CommonOptions& opt, std::uint64_t seed) {
  RunConfig config;
  config.overlap = opt.overlap;
  config.geometry = opt.geometry();
  config.n_samples = opt.samples;
  config.seed = seed;
  config.n_bins = opt.bins;
  config.x_max = opt.window;
  config.n_streams = opt.streams;
  return config;
}

// Positions can only be recovered at bin resolution, so all estimates are
// histogram phasors; sub-ensembles below the estimator's floor stay empty.
DualityMeasurements measure(const ExperimentResult& result, const SlitGeometry& geometry) {
  DualityMeasurements m;
  auto estimate = [&](const SubEnsembleHistogram& h) -> std::optional<FringeEstimate> {
    if (h.total() < 100) return std::nullopt;
    return visibility_phasor(h, geometry);
  };
  m.all = estimate(result.all);
  m.a1 = estimate(result.a1);
  m.a2 = estimate(result.a2);
  return m;
}

int cmd_pattern(const CommonOptions& opt) {
  const DetectorPair pair = make_detector_pair(opt.overlap);
  const QuantonEnvironmentState state = correlated_state(pair, false);
  const DensityCurve curve =
      density_curve(state, opt.geometry(), opt.window, static_cast<int>(opt.bins));

  const fs::path dir = prepare_out_dir(opt);
  std::ostringstream csv;
  write_csv(curve, csv);
  write_file(dir / "pattern.csv", csv.str());

  std::cout << "pattern: wrote " << (dir / "pattern.csv").string() << " ("
            << curve.grid.size() << " points, phasor visibility "
            << format_double(curve_phasor_visibility(curve, opt.geometry())) << ")";
  if (curve.window_warning) std::cout << " [window holds < 1 - 1e-6 of the mass]";
  std::cout << '\n';
  return 0;
}

DualityReport run_and_report(const CommonOptions& opt, const ExperimentResult** out_result,
                             ExperimentResult& storage) {
  if (opt.samples == 0) {
    if (out_result) *out_result = nullptr;
    return duality_report(opt.overlap);
  }
  storage = run_experiment(make_run_config(opt, opt.seed));
  if (out_result) *out_result = &storage;
  return duality_report(opt.overlap, measure(storage, opt.geometry()));
}

int cmd_run(const CommonOptions& opt, bool write_histograms) {
  ExperimentResult result;
  const ExperimentResult* result_ptr = nullptr;
  const DualityReport report = run_and_report(opt, &result_ptr, result);

  const fs::path dir = prepare_out_dir(opt);
  if (write_histograms && result_ptr != nullptr) {
    std::ostringstream csv;
    write_csv(*result_ptr, csv);
    write_file(dir / "histograms.csv", csv.str());
    std::cout << "run: wrote " << (dir / "histograms.csv").string() << " ("
              << result_ptr->n_samples << " samples, "
              << result_ptr->rejected_a1 + result_ptr->rejected_a2
              << " outside the window)\n";
  }
  write_file(dir / "report.json", report_json(report) + "\n");
  std::cout << (write_histograms ? "run" : "duality") << ": wrote "
            << (dir / "report.json").string() << " (sum_dq_v "
            << format_double(report.sum_dq_v) << ", identities "
            << (report.pass_identity ? "pass" : "FAIL") << ", bounds "
            << (report.pass_inequality ? "pass" : "FAIL") << ")\n";
  return report.pass_identity && report.pass_inequality ? 0 : 2;
}

struct SweepOptions {
  double from = 0.0;
  double to = 1.0;
  std::uint32_t steps = 11;
};

std::string sweep_csv(const std::vector<DualityReport>& rows) {
  std::ostringstream out;
  out << "c,v_analytic,v_all,v_a1,v_a2,d_q,d_englert,sum_dq_v,sum_v2_d2,"
         "pass_identity,pass_inequality\n";
  auto cell = [](const std::optional<FringeEstimate>& e) {
    return e ? format_double(e->v_hat) : std::string("nan");
  };
  for (const DualityReport& r : rows)
    out << format_double(r.c) << ',' << format_double(r.v_analytic) << ',' << cell(r.v_all)
        << ',' << cell(r.v_a1) << ',' << cell(r.v_a2) << ',' << format_double(r.d_q) << ','
        << format_double(r.d_englert) << ',' << format_double(r.sum_dq_v) << ','
        << format_double(r.sum_v2_d2) << ',' << (r.pass_identity ? "true" : "false") << ','
        << (r.pass_inequality ? "true" : "false") << '\n';
  return out.str();
}

std::string sweep_json(const std::vector<DualityReport>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const DualityReport& r : rows)
    arr.push_back(nlohmann::ordered_json::parse(report_json(r)));
  return arr.dump(2) + "\n";
}

int cmd_sweep(const CommonOptions& opt, const SweepOptions& sweep) {
  std::vector<DualityReport> rows;
  rows.reserve(sweep.steps);
  for (std::uint32_t i = 0; i < sweep.steps; ++i) {
    const double c = sweep.steps == 1
                         ? sweep.from
                         : sweep.from + (sweep.to - sweep.from) * i / (sweep.steps - 1);
    CommonOptions row = opt;
    row.overlap = c;
    if (opt.samples == 0) {
      rows.push_back(duality_report(c));
      continue;
    }
    // Each row draws from its own derived seed so rows are independent yet
    // the whole sweep is reproducible from the run seed alone.
    const ExperimentResult result =
        run_experiment(make_run_config(row, derive_stream_seed(opt.seed, i)));
    rows.push_back(duality_report(c, measure(result, opt.geometry())));
  }

  const fs::path dir = prepare_out_dir(opt);
  const bool json = opt.format == "json";
  const fs::path path = dir / (json ? "sweep.json" : "sweep.csv");
  write_file(path, json ? sweep_json(rows) : sweep_csv(rows));

  std::size_t passing = 0;
  for (const DualityReport& r : rows)
    if (r.pass_identity && r.pass_inequality) ++passing;
  std::cout << "sweep: wrote " << path.string() << " (" << rows.size() << " rows, "
            << passing << " passing both relations)\n";
  return passing == rows.size() ? 0 : 2;
}

int cmd_uqsd_verify(const CommonOptions& opt) {
  const UqsdUnitary u = build_uqsd(opt.overlap);

  double image_residual = 0.0;
  {
    const ComplexVector a0 = ComplexVector::basis(2, 0);
    const ComplexVector a1 = ComplexVector::basis(2, 0);
    const ComplexVector a2 = ComplexVector::basis(2, 1);
    auto image = [&](const ComplexVector& p) {
      return tensor(p, a1) * Complex(u.alpha, 0.0) + tensor(u.q, a2) * Complex(u.beta, 0.0);
    };
    const ComplexVector diff1 =
        u.matrix.apply(tensor(u.detectors.d1, a0)) - image(u.p1);
    const ComplexVector diff2 =
        u.matrix.apply(tensor(u.detectors.d2, a0)) - image(u.p2);
    image_residual = std::max(diff1.norm(), diff2.norm());
  }

  RandomStream rng(opt.seed);
  std::uint64_t conclusive = 0, wrong = 0;
  for (std::uint64_t i = 0; i < opt.samples; ++i) {
    const int true_path = rng.uniform() < 0.5 ? 1 : 2;
    const PathVerdict verdict = discriminate(true_path, u, rng);
    if (verdict == PathVerdict::Inconclusive) continue;
    ++conclusive;
    if ((verdict == PathVerdict::Slit1) != (true_path == 1)) ++wrong;
  }

  const double expected = uqsd_success_probability(opt.overlap);
  const double n = static_cast<double>(opt.samples);
  const double sigma = opt.samples > 0 ? std::sqrt(std::max(expected * (1.0 - expected), 0.0) / n) : 0.0;
  const double fraction = opt.samples > 0 ? static_cast<double>(conclusive) / n : 0.0;
  const bool within_band =
      opt.samples == 0 ||
      (sigma > 0.0 ? std::abs(fraction - expected) <= 3.0 * sigma
                   : std::abs(fraction - expected) <= 1e-12);

  nlohmann::ordered_json j;
  j["c"] = opt.overlap;
  j["alpha"] = u.alpha;
  j["beta"] = u.beta;
  j["unitarity_residual"] = u.matrix.unitarity_error();
  j["image_residual"] = image_residual;
  j["alpha_sq_residual"] = std::abs(u.alpha * u.alpha - (1.0 - opt.overlap));
  j["beta_sq_residual"] = std::abs(u.beta * u.beta - opt.overlap);
  j["trials"] = opt.samples;
  j["conclusive_fraction"] = fraction;
  j["expected_conclusive_fraction"] = expected;
  j["wrong_verdicts"] = wrong;
  j["within_3_sigma"] = within_band;

  const fs::path dir = prepare_out_dir(opt);
  write_file(dir / "uqsd.json", j.dump(2) + "\n");
  std::cout << "uqsd-verify: wrote " << (dir / "uqsd.json").string() << " (unitarity "
            << format_double(u.matrix.unitarity_error()) << ", wrong verdicts " << wrong
            << ")\n";
  return wrong == 0 && within_band ? 0 : 2;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Double-slit duality simulator: wave visibility against "
               "which-path knowledge for a tunable quantum detector"};
  app.require_subcommand(1);

  CommonOptions pattern_opt, run_opt, duality_opt, sweep_opt_common, uqsd_opt;
  pattern_opt.bins = kDefaultCurvePoints;
  duality_opt.samples = 0;
  SweepOptions sweep_opt;

  CLI::App* pattern =
      app.add_subcommand("pattern", "Write the analytic screen density curve");
  add_common_options(pattern, pattern_opt);

  CLI::App* run = app.add_subcommand(
      "run", "Monte Carlo experiment: sub-ensemble histograms plus a duality report");
  add_common_options(run, run_opt);

  CLI::App* duality_cmd = app.add_subcommand(
      "duality", "Duality report only (analytic when --samples 0)");
  add_common_options(duality_cmd, duality_opt);

  CLI::App* sweep = app.add_subcommand("sweep", "Duality report across an overlap range");
  add_common_options(sweep, sweep_opt_common);
  sweep->add_option("--from", sweep_opt.from, "First overlap value")->capture_default_str();
  sweep->add_option("--to", sweep_opt.to, "Last overlap value")->capture_default_str();
  sweep->add_option("--steps", sweep_opt.steps, "Number of overlap values")
      ->capture_default_str();

  CLI::App* uqsd = app.add_subcommand(
      "uqsd-verify", "Check the discrimination unitary and its zero-error property");
  add_common_options(uqsd, uqsd_opt);

  std::vector<const char*> argv;
  argv.push_back("duality");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, returns 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (pattern->parsed()) {
      std::vector<std::string> issues;
      validate_common(pattern_opt, false, issues);
      if (!issues.empty()) return fail_validation(issues);
      return cmd_pattern(pattern_opt);
    }
    if (run->parsed()) {
      std::vector<std::string> issues;
      validate_common(run_opt, true, issues);
      if (!issues.empty()) return fail_validation(issues);
      return cmd_run(run_opt, true);
    }
    if (duality_cmd->parsed()) {
      std::vector<std::string> issues;
      validate_common(duality_opt, true, issues);
      if (!issues.empty()) return fail_validation(issues);
      return cmd_run(duality_opt, false);
    }
    if (sweep->parsed()) {
      std::vector<std::string> issues;
      validate_common(sweep_opt_common, true, issues);
      if (sweep_opt.steps < 1) issues.push_back("--steps must be at least 1");
      if (!(sweep_opt.from >= 0.0 && sweep_opt.from <= 1.0))
        issues.push_back("--from must lie in [0, 1]");
      if (!(sweep_opt.to >= 0.0 && sweep_opt.to <= 1.0))
        issues.push_back("--to must lie in [0, 1]");
      if (!issues.empty()) return fail_validation(issues);
      return cmd_sweep(sweep_opt_common, sweep_opt);
    }
    if (uqsd->parsed()) {
      std::vector<std::string> issues;
      validate_common(uqsd_opt, true, issues);
      if (!issues.empty()) return fail_validation(issues);
      return cmd_uqsd_verify(uqsd_opt);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace duality
