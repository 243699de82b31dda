// skoromap: compute two-sided Skorokhod reflections on path files, verify
// candidate solutions, run the randomized property suites, simulate
// finite-buffer queues, and benchmark the evaluators.
//
// Exit codes: 0 success, 1 property violation, 2 usage or parse error.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "skoromap/io.hpp"
#include "skoromap/oracle.hpp"
#include "skoromap/properties.hpp"
#include "skoromap/queue_sim.hpp"
#include "skoromap/rng.hpp"
#include "skoromap/two_sided.hpp"

namespace {

using nlohmann::json;
using namespace skoromap;

double default_tolerance() {
  const char* env = std::getenv("SKOROMAP_TOL");
  if (env == nullptr) return 1e-9;
  double value = 0.0;
  const std::string text(env);
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() ||
      !(value > 0.0)) {
    throw std::invalid_argument("SKOROMAP_TOL: not a positive number: '" +
                                text + "'");
  }
  return value;
}

void emit(const std::string& out_file, const std::string& text) {
  if (out_file.empty()) {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
  } else {
    write_text_file(out_file, text);
  }
}

// ---------------------------------------------------------------------------
// map / decompose / verify

int run_map(const std::string& input, const Band& band,
            const std::string& method, const std::string& out_file) {
  const StepPath psi = read_step_path(input);
  TwoSidedSolution sol = [&] {
    if (method == "fixedpoint") {
      auto fp = fixed_point_regulators(psi, band);
      StepPath phibar = add(psi, sub(fp.eta_l, fp.eta_u));
      StepPath etabar = sub(phibar, psi);
      return TwoSidedSolution{std::move(phibar), std::move(etabar),
                              std::move(fp.eta_l), std::move(fp.eta_u)};
    }
    ReflectMethod m = ReflectMethod::streaming;
    if (method == "naive") m = ReflectMethod::naive;
    if (method == "remark15") m = ReflectMethod::remark15;
    if (method == "clip") m = ReflectMethod::clip;
    return reflect(psi, band, m);
  }();
  emit(out_file, solution_to_json(psi, sol).dump(2));
  return 0;
}

int run_decompose(const std::string& input, const Band& band,
                  const std::string& out_file) {
  const StepPath psi = read_step_path(input);
  const TwoSidedSolution sol = reflect(psi, band);
  // The schedule is defined for the nonnegative one-sided path. Translating
  // before reflecting keeps the path nonnegative in floating point too.
  const StepPath phi =
      gamma_lower(affine(psi, 1.0, -band.lower()), 0.0).phi;
  const CrossingSchedule sched = crossing_schedule(phi, band.width());
  json doc = solution_to_json(psi, sol);
  std::vector<double> sigma;
  std::vector<double> tau;
  for (double t : sched.sigma) {
    if (std::isfinite(t)) sigma.push_back(t);
  }
  for (double t : sched.tau) {
    if (std::isfinite(t)) tau.push_back(t);
  }
  doc["sigma"] = sigma;
  doc["tau"] = tau;
  emit(out_file, doc.dump(2));
  return 0;
}

int run_verify(const std::string& input, const Band& band, double tol,
               const std::string& out_file) {
  std::ifstream in(input);
  if (!in) throw io_error(input + ": cannot open");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const CandidateSolution candidate =
      parse_candidate_json(buffer.str(), input);
  const ComplianceReport report =
      verify_solution(candidate.psi, candidate.solution, band, tol);
  json doc{{"passed", report.passed},
           {"max_deviation", report.max_deviation},
           {"violations", json::array()}};
  for (const auto& v : report.violations) {
    doc["violations"].push_back({{"index", v.index},
                                 {"condition", v.condition},
                                 {"magnitude", v.magnitude}});
  }
  emit(out_file, doc.dump(2));
  return report.passed ? 0 : 1;
}

// ---------------------------------------------------------------------------
// properties

struct SuiteOutcome {
  std::size_t scenarios = 0;
  std::size_t violations = 0;
  double worst = 0.0;
};

struct PropertiesDriver {
  std::uint64_t seed;
  std::size_t scenarios;
  std::size_t max_steps;
  double tol;
  std::filesystem::path replay_dir;
  std::map<std::string, SuiteOutcome> outcomes;
  std::size_t replays_written = 0;

  static constexpr std::size_t kMaxReplaysPerSuite = 8;

  Band draw_band(detail::SplitMix64& rng) const {
    const double z = 2.0 * rng.sym();
    const double width = 0.1 + 2.0 * rng.u01();
    return Band(z, z + width);
  }

  PathGenSpec draw_path_spec(detail::SplitMix64& rng, const Band& band) const {
    const double w = band.width();
    PathGenSpec spec;
    spec.seed = rng.next();
    spec.n = 1 + static_cast<std::size_t>(rng.next() % max_steps);
    spec.jump_scale = w * (0.05 + 2.0 * rng.u01());
    spec.drift = 0.25 * w * rng.sym();
    spec.start = band.lower() - 2.0 * w + 5.0 * w * rng.u01();
    spec.horizon = 1.0;
    return spec;
  }

  void record(const std::string& suite, std::size_t iteration,
              const ComplianceReport& report,
              const std::vector<PathGenSpec>& specs, const Band& band,
              const json& constants) {
    auto& outcome = outcomes[suite];
    ++outcome.scenarios;
    outcome.worst = std::max(outcome.worst, report.max_deviation);
    if (!report.passed) {
      outcome.violations += report.violations.size();
      if (replays_written < kMaxReplaysPerSuite * outcomes.size()) {
        const auto file =
            replay_dir / ("replay_" + suite + "_" +
                          std::to_string(iteration) + ".json");
        write_text_file(file.string(),
                        replay_record(suite, specs, band, constants).dump(2));
        ++replays_written;
      }
    }
  }

  void four_way() {
    detail::SplitMix64 rng(seed ^ 0x464f5552ull);  // suite tag
    for (std::size_t i = 0; i < scenarios; ++i) {
      const Band band = draw_band(rng);
      const PathGenSpec spec = draw_path_spec(rng, band);
      const StepPath psi = gen_step_path(spec);
      const StepPath a = reflect(psi, band, ReflectMethod::streaming).phibar;
      const StepPath b = reflect(psi, band, ReflectMethod::naive).phibar;
      const StepPath c = reflect(psi, band, ReflectMethod::remark15).phibar;
      const StepPath d = reflect(psi, band, ReflectMethod::clip).phibar;
      const double T = psi.horizon();
      double dev = uniform_distance(a, b, T);
      dev = std::max(dev, uniform_distance(a, c, T));
      dev = std::max(dev, uniform_distance(a, d, T));
      ComplianceReport report;
      report.check("four_way_equivalence", i, dev, tol);
      record("four_way", i, report, {spec}, band, json::object());
    }
  }

  void fixed_point() {
    detail::SplitMix64 rng(seed ^ 0x46495845ull);
    for (std::size_t i = 0; i < scenarios; ++i) {
      const Band band = draw_band(rng);
      const PathGenSpec spec = draw_path_spec(rng, band);
      const StepPath psi = gen_step_path(spec);
      ComplianceReport report;
      try {
        const FixedPointResult fp = fixed_point_regulators(psi, band);
        const TwoSidedSolution sol = reflect(psi, band);
        for (std::size_t k = 0; k < psi.size(); ++k) {
          report.check(
              "fixed_point_eta_l", k,
              std::abs(fp.eta_l.values()[k] - sol.eta_l.values()[k]), tol);
          report.check(
              "fixed_point_eta_u", k,
              std::abs(fp.eta_u.values()[k] - sol.eta_u.values()[k]), tol);
        }
      } catch (const fixed_point_error&) {
        report.check("fixed_point_convergence", i, 1.0, tol);
      }
      record("fixed_point", i, report, {spec}, band, json::object());
    }
  }

  void structure() {
    detail::SplitMix64 rng(seed ^ 0x53545255ull);
    for (std::size_t i = 0; i < scenarios; ++i) {
      const Band band = draw_band(rng);
      const PathGenSpec spec = draw_path_spec(rng, band);
      const StepPath psi = gen_step_path(spec);
      ComplianceReport report = verify_solution(psi, reflect(psi, band), band,
                                                tol);
      report.merge(reflect_symmetric_check(psi, band, tol));
      record("structure", i, report, {spec}, band, json::object());
    }
  }

  void schedule() {
    detail::SplitMix64 rng(seed ^ 0x53434845ull);
    for (std::size_t i = 0; i < scenarios; ++i) {
      const Band band = draw_band(rng);
      const PathGenSpec spec = draw_path_spec(rng, band);
      const StepPath psi = gen_step_path(spec);
      const StepPath phi =
          gamma_lower(affine(psi, 1.0, -band.lower()), 0.0).phi;
      const double level = band.width();
      const StepPath direct = constraining_term(phi, level);
      const StepPath assembled =
          c_from_schedule(phi, level, crossing_schedule(phi, level));
      ComplianceReport report;
      for (std::size_t k = 0; k < phi.size(); ++k) {
        const double diff =
            std::abs(direct.values()[k] - assembled.values()[k]);
        report.check("c_from_schedule_exact", k, diff == 0.0 ? 0.0 : diff,
                     0.0);
        report.check("c_lower_bound", k,
                     std::max(phi.values()[k] - level, 0.0) -
                         direct.values()[k],
                     tol);
        report.check("c_upper_bound", k,
                     direct.values()[k] - phi.values()[k], tol);
      }
      record("schedule", i, report, {spec}, band, json::object());
    }
  }

  void lipschitz() {
    detail::SplitMix64 rng(seed ^ 0x4c495053ull);
    for (std::size_t i = 0; i < scenarios; ++i) {
      const Band band = draw_band(rng);
      const PathGenSpec spec1 = draw_path_spec(rng, band);
      const PathGenSpec spec2 = draw_path_spec(rng, band);
      const ComplianceReport report = check_lipschitz_uniform(
          gen_step_path(spec1), gen_step_path(spec2), band, tol);
      record("lipschitz", i, report, {spec1, spec2}, band, json::object());
    }
  }

  void comparison(const std::string& suite, std::uint64_t tag, int mode) {
    detail::SplitMix64 rng(seed ^ tag);
    for (std::size_t i = 0; i < scenarios; ++i) {
      const Band band = draw_band(rng);
      const ComparisonScenarioSpec spec =
          gen_comparison_spec(rng.next(), max_steps, band);
      const ComparisonScenario scenario = spec.materialize();
      const ComplianceReport report =
          mode == 0 ? check_comparison_two_sided(scenario, tol)
                    : check_comparison_one_sided(scenario, mode == 2, tol);
      record(suite, i, report, {spec.psi_prime_spec, spec.nu_spec}, band,
             json{{"c0", spec.c0},
                  {"c0_prime", spec.c0_prime},
                  {"seed", spec.seed}});
    }
  }

  void shift_suite() {
    detail::SplitMix64 rng(seed ^ 0x53484654ull);
    for (std::size_t i = 0; i < scenarios; ++i) {
      const Band band = draw_band(rng);
      const PathGenSpec spec = draw_path_spec(rng, band);
      const StepPath psi = gen_step_path(spec);
      const double alpha =
          psi.times()[rng.next() % psi.size()];
      const ComplianceReport report = check_shift(psi, band, alpha, tol);
      record("shift", i, report, {spec}, band, json{{"alpha", alpha}});
    }
  }

  void oscillation_suite() {
    detail::SplitMix64 rng(seed ^ 0x4f534342ull);
    for (std::size_t i = 0; i < scenarios; ++i) {
      const Band band = draw_band(rng);
      const PathGenSpec spec = draw_path_spec(rng, band);
      const StepPath psi = gen_step_path(spec);
      std::vector<std::pair<double, double>> windows;
      for (int j = 0; j < 4; ++j) {
        double t1 = rng.u01() * psi.horizon();
        double t2 = rng.u01() * psi.horizon();
        if (t2 < t1) std::swap(t1, t2);
        windows.emplace_back(t1, t2);
      }
      const ComplianceReport report =
          check_oscillation(psi, band, windows, tol);
      record("oscillation", i, report, {spec}, band, json::object());
    }
  }

  void fault_injection() {
    detail::SplitMix64 rng(seed ^ 0x4641554cull);
    const Band band = draw_band(rng);
    const PathGenSpec spec = draw_path_spec(rng, band);
    const StepPath psi = gen_step_path(spec);
    TwoSidedSolution sol = reflect(psi, band);
    std::vector<double> bumped = sol.eta_u.values();
    for (std::size_t k = bumped.size() / 2; k < bumped.size(); ++k) {
      bumped[k] += 1.0;
    }
    sol.eta_u = StepPath(psi.times(), std::move(bumped));
    const ComplianceReport report = verify_solution(psi, sol, band, tol);
    record("fault_injection", 0, report, {spec}, band, json::object());
  }
};

int run_properties(std::uint64_t seed, std::size_t scenarios,
                   std::size_t max_steps, double tol,
                   const std::string& out_file, bool inject_fault) {
  PropertiesDriver driver;
  driver.seed = seed;
  driver.scenarios = scenarios;
  driver.max_steps = max_steps;
  driver.tol = tol;
  driver.replay_dir = out_file.empty()
                          ? std::filesystem::path(".")
                          : std::filesystem::path(out_file).parent_path();
  if (driver.replay_dir.empty()) driver.replay_dir = ".";

  driver.four_way();
  driver.fixed_point();
  driver.structure();
  driver.schedule();
  driver.lipschitz();
  driver.comparison("comparison_two_sided", 0x434d5032ull, 0);
  driver.comparison("comparison_one_sided_exact", 0x434d5031ull, 1);
  driver.comparison("comparison_one_sided_sandwich", 0x434d5053ull, 2);
  driver.shift_suite();
  driver.oscillation_suite();
  if (inject_fault) driver.fault_injection();

  std::size_t total_violations = 0;
  json suites = json::object();
  for (const auto& [name, outcome] : driver.outcomes) {
    total_violations += outcome.violations;
    suites[name] = {{"scenarios", outcome.scenarios},
                    {"violations", outcome.violations},
                    {"worst_deviation", outcome.worst}};
  }
  json doc{{"seed", seed},
           {"scenarios", scenarios},
           {"max_steps", max_steps},
           {"tolerance", tol},
           {"passed", total_violations == 0},
           {"suites", suites}};
  emit(out_file, doc.dump(2));
  return total_violations == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------
// simulate / bench

int run_simulate(const SimConfig& cfg, const std::string& format,
                 const std::string& out_file) {
  const SimStats stats = simulate(cfg);
  if (format == "csv") {
    emit(out_file, histogram_to_csv(stats));
  } else {
    emit(out_file, sim_stats_to_json(stats).dump(2));
  }
  return 0;
}

int run_bench(const std::vector<std::size_t>& sizes,
              const std::string& out_file) {
  constexpr std::size_t kNaiveLimit = 1 << 14;  // quadratic guard
  using clock = std::chrono::steady_clock;
  std::string csv = "n,method,seconds\n";
  double per_element_smallest = 0.0;
  double per_element_largest = 0.0;
  const std::size_t smallest = *std::min_element(sizes.begin(), sizes.end());
  const std::size_t largest = *std::max_element(sizes.begin(), sizes.end());
  for (const std::size_t n : sizes) {
    PathGenSpec spec;
    spec.seed = 0x42454e43ull + n;
    spec.n = n;
    spec.jump_scale = 1.0;
    spec.drift = 0.0;
    spec.horizon = 1.0;
    const StepPath psi = gen_step_path(spec);
    const Band band(0.0, 2.0);
    const std::size_t reps = std::max<std::size_t>(1, (1u << 22) / n);
    const auto t0 = clock::now();
    double sink = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
      sink += reflect(psi, band, ReflectMethod::streaming).phibar.values().back();
    }
    const auto t1 = clock::now();
    const double seconds =
        std::chrono::duration<double>(t1 - t0).count() /
        static_cast<double>(reps);
    csv += std::to_string(n) + ",streaming," +
           std::to_string(seconds) + "\n";
    static volatile double g_sink = 0.0;
    g_sink = g_sink + sink;  // keep the timed loop observable
    const double per_element = seconds / static_cast<double>(psi.size());
    if (n == smallest) per_element_smallest = per_element;
    if (n == largest) per_element_largest = per_element;
    if (n <= kNaiveLimit) {
      const auto n0 = clock::now();
      const auto sol = reflect(psi, band, ReflectMethod::naive);
      const auto n1 = clock::now();
      csv += std::to_string(n) + ",naive," +
             std::to_string(std::chrono::duration<double>(n1 - n0).count()) +
             "\n";
    }
  }
  emit(out_file, csv);
  const double ratio =
      std::max(per_element_largest, per_element_smallest) /
      std::min(per_element_largest, per_element_smallest);
  std::cerr << "streaming per-element ratio (largest vs smallest n): "
            << ratio << "\n";
  if (!(ratio < 3.0)) {
    std::cerr << "bench: streaming per-element time is not flat (ratio "
              << ratio << " >= 3)\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-sided Skorokhod reflection toolkit"};
  app.require_subcommand(1);

  // map
  auto* map_cmd = app.add_subcommand(
      "map", "Reflect a path file onto a band and write the solution");
  std::string map_input;
  std::string map_out;
  std::string map_method = "streaming";
  double map_z = 0.0;
  double map_a = 0.0;
  map_cmd->add_option("-i,--input", map_input, "StepPath file (CSV or JSON)")
      ->required();
  map_cmd->add_option("-z,--lower", map_z, "Lower barrier")->required();
  map_cmd->add_option("-a,--upper", map_a, "Upper barrier")->required();
  map_cmd
      ->add_option("--method", map_method, "Evaluator")
      ->check(CLI::IsMember(
          {"streaming", "naive", "remark15", "clip", "fixedpoint"}));
  map_cmd->add_option("-o,--out", map_out, "Output file (default stdout)");

  // decompose
  auto* dec_cmd = app.add_subcommand(
      "decompose",
      "Reflect a path and report regulators plus the crossing schedule");
  std::string dec_input;
  std::string dec_out;
  double dec_z = 0.0;
  double dec_a = 0.0;
  dec_cmd->add_option("-i,--input", dec_input, "StepPath file (CSV or JSON)")
      ->required();
  dec_cmd->add_option("-z,--lower", dec_z, "Lower barrier")->required();
  dec_cmd->add_option("-a,--upper", dec_a, "Upper barrier")->required();
  dec_cmd->add_option("-o,--out", dec_out, "Output file (default stdout)");

  // verify
  auto* ver_cmd = app.add_subcommand(
      "verify", "Check a candidate solution file against the band");
  std::string ver_input;
  std::string ver_out;
  double ver_z = 0.0;
  double ver_a = 0.0;
  double ver_tol = -1.0;
  ver_cmd->add_option("-i,--input", ver_input,
                      "Candidate JSON (map output format)")
      ->required();
  ver_cmd->add_option("-z,--lower", ver_z, "Lower barrier")->required();
  ver_cmd->add_option("-a,--upper", ver_a, "Upper barrier")->required();
  ver_cmd->add_option("--tol", ver_tol, "Tolerance (default SKOROMAP_TOL)");
  ver_cmd->add_option("-o,--out", ver_out, "Output file (default stdout)");

  // properties
  auto* prop_cmd = app.add_subcommand(
      "properties", "Run the randomized property suites");
  std::uint64_t prop_seed = 20070513;
  std::size_t prop_scenarios = 10000;
  std::size_t prop_n = 512;
  double prop_tol = -1.0;
  std::string prop_out;
  bool inject_fault = false;
  prop_cmd->add_option("--seed", prop_seed, "Master seed");
  prop_cmd->add_option("--scenarios", prop_scenarios, "Scenarios per suite")
      ->check(CLI::PositiveNumber);
  prop_cmd->add_option("--n", prop_n, "Max grid points per path")
      ->check(CLI::PositiveNumber);
  prop_cmd->add_option("--tol", prop_tol, "Tolerance (default SKOROMAP_TOL)");
  prop_cmd->add_option("-o,--out", prop_out, "Summary file (default stdout)");
  prop_cmd->add_flag("--inject-fault", inject_fault,
                     "Plant a violation to exercise the failure path");

  // simulate
  auto* sim_cmd = app.add_subcommand(
      "simulate", "Reflected random-walk queue simulation");
  SimConfig cfg;
  cfg.steps = 100000;
  cfg.dt = 1e-3;
  cfg.sigma = 1.0;
  double sim_z = 0.0;
  double sim_a = 1.0;
  std::string sim_format = "json";
  std::string sim_out;
  sim_cmd->add_option("--seed", cfg.seed, "Simulation seed");
  sim_cmd->add_option("--steps", cfg.steps, "Steps per replication")
      ->check(CLI::PositiveNumber);
  sim_cmd->add_option("--dt", cfg.dt, "Time step")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--mu", cfg.mu, "Drift per unit time");
  sim_cmd->add_option("--sigma", cfg.sigma, "Volatility per sqrt unit time");
  sim_cmd->add_option("-z,--lower", sim_z, "Lower barrier");
  sim_cmd->add_option("-a,--upper", sim_a, "Upper barrier");
  sim_cmd->add_option("--initial", cfg.initial, "Initial level");
  sim_cmd->add_option("--replications", cfg.replications, "Replications")
      ->check(CLI::PositiveNumber);
  sim_cmd->add_option("--bins", cfg.histogram_bins, "Histogram bins")
      ->check(CLI::PositiveNumber);
  sim_cmd->add_option("--burn-in", cfg.burn_in_fraction,
                      "Burn-in fraction for the density check");
  sim_cmd->add_option("--format", sim_format, "json (stats) or csv (histogram)")
      ->check(CLI::IsMember({"json", "csv"}));
  sim_cmd->add_option("-o,--out", sim_out, "Output file (default stdout)");

  // bench
  auto* bench_cmd = app.add_subcommand(
      "bench", "Time the streaming and naive evaluators");
  std::vector<std::size_t> sizes;
  std::string bench_out;
  bench_cmd
      ->add_option("--sizes", sizes,
                   "Path lengths (default 2^10..2^20 doubling)")
      ->delimiter(',');
  bench_cmd->add_option("-o,--out", bench_out, "CSV file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*map_cmd) {
      return run_map(map_input, Band(map_z, map_a), map_method, map_out);
    }
    if (*dec_cmd) {
      return run_decompose(dec_input, Band(dec_z, dec_a), dec_out);
    }
    if (*ver_cmd) {
      const double tol = ver_tol > 0.0 ? ver_tol : default_tolerance();
      return run_verify(ver_input, Band(ver_z, ver_a), tol, ver_out);
    }
    if (*prop_cmd) {
      const double tol = prop_tol > 0.0 ? prop_tol : default_tolerance();
      return run_properties(prop_seed, prop_scenarios, prop_n, tol, prop_out,
                            inject_fault);
    }
    if (*sim_cmd) {
      cfg.band = Band(sim_z, sim_a);
      if (cfg.initial < cfg.band.lower() || cfg.initial > cfg.band.upper()) {
        // default initial of 0 may fall outside a custom band; clamp only
        // when the user did not set it explicitly
        if (sim_cmd->count("--initial") == 0) {
          cfg.initial = project_band(cfg.initial, cfg.band);
        }
      }
      return run_simulate(cfg, sim_format, sim_out);
    }
    if (*bench_cmd) {
      if (sizes.empty()) {
        for (std::size_t n = 1 << 10; n <= (1 << 20); n <<= 1) {
          sizes.push_back(n);
        }
      }
      return run_bench(sizes, bench_out);
    }
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
