// Acceptance suite: one line of output per criterion, nonzero exit if any
// criterion fails. Sweep sizes and tolerances are fixed here, not
// configurable, so a green run always means the same thing.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "skoromap/oracle.hpp"
#include "skoromap/properties.hpp"
#include "skoromap/queue_sim.hpp"
#include "skoromap/two_sided.hpp"

using namespace skoromap;

namespace {

constexpr double kTol = 1e-9;
constexpr std::size_t kSweep = 10000;
constexpr std::size_t kMaxPoints = 512;

struct Scenario {
  Band band;
  StepPath psi;
};

// Deterministic corpus shared by the equivalence, oracle and structural
// criteria: bands of varied location and width, starts both inside and
// outside the band, mixed drift and jump scale.
Scenario corpus_scenario(std::uint64_t i) {
  detail::SplitMix64 rng(0x414343455054ull + i);
  const double z = 2.0 * rng.sym();
  const double w = 0.1 + 2.0 * rng.u01();
  const Band band(z, z + w);
  PathGenSpec spec;
  spec.seed = rng.next();
  spec.n = 1 + static_cast<std::size_t>(rng.next() % kMaxPoints);
  spec.jump_scale = w * (0.05 + 2.0 * rng.u01());
  spec.drift = 0.25 * w * rng.sym();
  spec.start = z - 2.0 * w + 5.0 * w * rng.u01();
  spec.horizon = 1.0;
  return Scenario{band, gen_step_path(spec)};
}

struct Outcome {
  bool passed;
  std::string detail;
};

Outcome criterion1_tightness() {
  const Band band(0.0, 2.0);
  const StepPath phi1({0.0}, {2.0});
  const StepPath phi2({0.0, 0.5}, {3.0, 1.0});
  const StepPath l1 = lambda_map(phi1, band);
  const StepPath l2 = lambda_map(phi2, band);
  const bool ok = l1.values() == phi1.values() &&
                  l2.values() == std::vector<double>{2.0, 0.0} &&
                  uniform_distance(phi1, phi2, 1.0) == 1.0 &&
                  uniform_distance(l1, l2, 1.0) == 2.0;
  return {ok, "Lambda(phi1)=phi1, Lambda(phi2)=2 on [0,1/2), distances 1 and 2"};
}

Outcome criterion2_four_way() {
  double worst = 0.0;
  std::size_t violations = 0;
  for (std::uint64_t i = 0; i < kSweep; ++i) {
    const Scenario sc = corpus_scenario(i);
    const double T = sc.psi.horizon();
    const StepPath a = reflect(sc.psi, sc.band, ReflectMethod::streaming).phibar;
    const StepPath b = reflect(sc.psi, sc.band, ReflectMethod::naive).phibar;
    const StepPath c = reflect(sc.psi, sc.band, ReflectMethod::remark15).phibar;
    const StepPath d = reflect(sc.psi, sc.band, ReflectMethod::clip).phibar;
    double dev = uniform_distance(a, b, T);
    dev = std::max(dev, uniform_distance(a, c, T));
    dev = std::max(dev, uniform_distance(a, d, T));
    worst = std::max(worst, dev);
    if (dev > kTol) ++violations;
  }
  return {violations == 0,
          std::to_string(kSweep) + " paths, worst deviation " +
              std::to_string(worst)};
}

Outcome criterion3_fixed_point() {
  double worst = 0.0;
  std::size_t violations = 0;
  std::size_t max_sweeps = 0;
  for (std::uint64_t i = 0; i < kSweep; ++i) {
    const Scenario sc = corpus_scenario(i);
    try {
      const FixedPointResult fp = fixed_point_regulators(sc.psi, sc.band);
      max_sweeps = std::max(max_sweeps, fp.iterations);
      if (fp.iterations > 2 * sc.psi.size() + 2) ++violations;
      const TwoSidedSolution sol = reflect(sc.psi, sc.band);
      double dev = 0.0;
      for (std::size_t k = 0; k < sc.psi.size(); ++k) {
        dev = std::max(dev, std::abs(fp.eta_l.values()[k] -
                                     sol.eta_l.values()[k]));
        dev = std::max(dev, std::abs(fp.eta_u.values()[k] -
                                     sol.eta_u.values()[k]));
      }
      worst = std::max(worst, dev);
      if (dev > kTol) ++violations;
    } catch (const fixed_point_error&) {
      ++violations;
    }
  }
  return {violations == 0,
          "worst regulator deviation " + std::to_string(worst) +
              ", max sweeps " + std::to_string(max_sweeps)};
}

Outcome criterion4_schedule() {
  std::size_t violations = 0;
  for (std::uint64_t i = 0; i < kSweep; ++i) {
    const Scenario sc = corpus_scenario(i);
    const double level = sc.band.width();
    // translate before reflecting so the one-sided path is nonnegative in
    // floating point, not just in exact arithmetic
    const StepPath phi =
        gamma_lower(affine(sc.psi, 1.0, -sc.band.lower()), 0.0).phi;
    const StepPath direct = constraining_term(phi, level);
    const CrossingSchedule sched = crossing_schedule(phi, level);
    const StepPath assembled = c_from_schedule(phi, level, sched);
    if (assembled.values() != direct.values()) ++violations;
    const StepPath phibar = sub(phi, direct);
    for (double t : sched.tau) {
      if (!std::isfinite(t)) break;
      if (phibar.eval(t) != 0.0) ++violations;
    }
    for (double t : sched.sigma) {
      if (!std::isfinite(t)) break;
      if (std::abs(phibar.eval(t) - level) > kTol) ++violations;
    }
    for (std::size_t k = 0; k < phi.size(); ++k) {
      const double excess = std::max(phi.values()[k] - level, 0.0);
      if (direct.values()[k] < excess || direct.values()[k] > phi.values()[k]) {
        ++violations;
      }
    }
  }
  return {violations == 0,
          std::to_string(kSweep) +
              " nonnegative paths, exact piecewise assembly and barrier hits"};
}

Outcome criterion5_lipschitz() {
  std::size_t violations = 0;
  for (std::uint64_t i = 0; i < kSweep; ++i) {
    detail::SplitMix64 rng(0x4c4950ull + i);
    const double z = 2.0 * rng.sym();
    const Band band(z, z + 0.1 + 2.0 * rng.u01());
    PathGenSpec s1;
    s1.seed = rng.next();
    s1.n = 1 + static_cast<std::size_t>(rng.next() % kMaxPoints);
    s1.jump_scale = band.width() * (0.05 + 2.0 * rng.u01());
    s1.drift = 0.25 * band.width() * rng.sym();
    s1.start = z + band.width() * (2.0 * rng.u01() - 0.5);
    PathGenSpec s2 = s1;
    s2.seed = rng.next();
    s2.n = 1 + static_cast<std::size_t>(rng.next() % kMaxPoints);
    if (!check_lipschitz_uniform(gen_step_path(s1), gen_step_path(s2), band,
                                 kTol)
             .passed) {
      ++violations;
    }
  }
  // Near-tight fixture for the two-sided map: psi1 = 0, psi2 dips then
  // rises; with band [0,2] the constrained outputs are 0 and 2*I_[1/2,1].
  const StepPath psi1({0.0}, {0.0});
  const StepPath psi2({0.0, 0.5}, {-1.0, 1.0});
  const Band band(0.0, 2.0);
  const double d_in = uniform_distance(psi1, psi2, 1.0);
  const double d_out = uniform_distance(reflect(psi1, band).phibar,
                                        reflect(psi2, band).phibar, 1.0);
  const double ratio = d_out / d_in;
  if (!(ratio >= 1.9)) ++violations;
  return {violations == 0,
          std::to_string(kSweep) + " pairs within the bound; fixture ratio " +
              std::to_string(ratio)};
}

Outcome criterion6_comparison() {
  std::size_t violations = 0;
  double worst = 0.0;
  for (std::uint64_t i = 0; i < kSweep; ++i) {
    detail::SplitMix64 rng(0x434f4d50ull + i);
    const double z = 2.0 * rng.sym();
    const Band band(z, z + 0.1 + 2.0 * rng.u01());
    const ComparisonScenarioSpec spec =
        gen_comparison_spec(rng.next(), kMaxPoints, band);
    const ComparisonScenario sc = spec.materialize();
    const ComplianceReport two = check_comparison_two_sided(sc, kTol);
    const ComplianceReport exact = check_comparison_one_sided(sc, false, kTol);
    const ComplianceReport sandwich =
        check_comparison_one_sided(sc, true, kTol);
    violations +=
        two.violations.size() + exact.violations.size() +
        sandwich.violations.size();
    worst = std::max({worst, two.max_deviation, exact.max_deviation,
                      sandwich.max_deviation});
  }
  return {violations == 0,
          std::to_string(kSweep) + " scenarios x {Thm 1.7 + Cor 4.2 + "
              "strengthened bounds, exact, sandwich}, worst breach " +
              std::to_string(worst)};
}

Outcome criterion7_structure() {
  std::size_t violations = 0;
  for (std::uint64_t i = 0; i < kSweep; ++i) {
    const Scenario sc = corpus_scenario(i);
    const TwoSidedSolution sol = reflect(sc.psi, sc.band);
    violations += verify_solution(sc.psi, sol, sc.band, kTol)
                      .violations.size();
    violations +=
        reflect_symmetric_check(sc.psi, sc.band, sol, kTol).violations.size();
    detail::SplitMix64 rng(0x53484654ull ^ i);
    for (int rep = 0; rep < 8; ++rep) {
      const double alpha = sc.psi.times()[rng.next() % sc.psi.size()];
      violations +=
          check_shift(sc.psi, sc.band, alpha, kTol).violations.size();
    }
  }
  return {violations == 0,
          std::to_string(kSweep) +
              " solutions: range, complementarity, minimality, initial "
              "values, symmetry, shift at 8 alphas"};
}

Outcome criterion8_oscillation() {
  std::size_t violations = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const Scenario sc = corpus_scenario(0x05C ^ (i * 7919));
    detail::SplitMix64 rng(0x05Cull + i);
    double t1 = rng.u01() * sc.psi.horizon();
    double t2 = rng.u01() * sc.psi.horizon();
    if (t2 < t1) std::swap(t1, t2);
    violations += check_oscillation(sc.psi, sc.band, {{t1, t2}}, kTol)
                      .violations.size();
  }
  return {violations == 0, "1000 (path, window) pairs within twice the "
                           "input oscillation"};
}

Outcome criterion9_performance() {
  using clock = std::chrono::steady_clock;
  // 10^7-step random walk through the streaming evaluator.
  const std::size_t big = 10'000'000;
  std::vector<double> times(big);
  std::vector<double> values(big);
  detail::SplitMix64 rng(0xBEEF);
  double v = 0.5;
  for (std::size_t k = 0; k < big; ++k) {
    times[k] = static_cast<double>(k) * 1e-4;
    values[k] = v;
    v += 0.01 * rng.sym();
  }
  const StepPath psi(std::move(times), std::move(values));
  const Band band(0.0, 1.0);
  const auto t0 = clock::now();
  const TwoSidedSolution sol = reflect(psi, band);
  const auto t1 = clock::now();
  const double seconds = std::chrono::duration<double>(t1 - t0).count();
  volatile double sink = sol.phibar.values().back();
  (void)sink;

  const auto per_element = [&](std::size_t n, std::size_t reps) {
    std::vector<double> ts(n);
    std::vector<double> vs(n);
    detail::SplitMix64 r(0xFACE);
    double x = 0.5;
    for (std::size_t k = 0; k < n; ++k) {
      ts[k] = static_cast<double>(k);
      vs[k] = x;
      x += 0.01 * r.sym();
    }
    const StepPath p(std::move(ts), std::move(vs));
    const auto a = clock::now();
    double acc = 0.0;
    for (std::size_t i = 0; i < reps; ++i) {
      acc += reflect(p, band).phibar.values().back();
    }
    const auto b = clock::now();
    volatile double keep = acc;
    (void)keep;
    return std::chrono::duration<double>(b - a).count() /
           static_cast<double>(reps) / static_cast<double>(n);
  };
  const double small_pe = per_element(1 << 10, 4096);
  const double large_pe = per_element(1 << 20, 8);
  const double ratio = std::max(small_pe, large_pe) /
                       std::min(small_pe, large_pe);
  const bool ok = seconds < 5.0 && ratio < 3.0;
  char buffer[160];
  std::snprintf(buffer, sizeof(buffer),
                "10^7 steps in %.3fs (< 5s), per-element ratio 2^10 vs 2^20 "
                "= %.2f (< 3)",
                seconds, ratio);
  return {ok, buffer};
}

Outcome criterion10_simulation() {
  SimConfig cfg;
  cfg.seed = 20070501;
  cfg.steps = 10'000'000;
  cfg.dt = 1e-4;
  cfg.mu = 0.0;
  cfg.sigma = 1.0;
  cfg.band = Band(0.0, 1.0);
  cfg.initial = 0.5;
  cfg.replications = 1;
  const ComplianceReport density = occupancy_density_check(cfg, 0.05);

  SimConfig flat = cfg;
  flat.steps = 1'000'000;
  SimConfig drifted = flat;
  drifted.mu = 1.0;
  const double mean_flat = simulate(flat).mean_occupancy;
  const double mean_drifted = simulate(drifted).mean_occupancy;
  const bool ok = density.passed && mean_drifted > mean_flat;
  char buffer[160];
  std::snprintf(buffer, sizeof(buffer),
                "uniform sup-distance %.4f (< 0.05), drifted mean %.3f > "
                "driftless mean %.3f",
                density.max_deviation, mean_drifted, mean_flat);
  return {ok, buffer};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {1, "tightness example reproduced exactly", criterion1_tightness},
      {2, "four-way evaluator equivalence", criterion2_four_way},
      {3, "fixed-point oracle agreement", criterion3_fixed_point},
      {4, "crossing-schedule construction consistency", criterion4_schedule},
      {5, "2-Lipschitz sweep with near-tight fixture", criterion5_lipschitz},
      {6, "comparison inequality sweep", criterion6_comparison},
      {7, "structural invariants", criterion7_structure},
      {8, "oscillation bound", criterion8_oscillation},
      {9, "streaming performance and linearity", criterion9_performance},
      {10, "simulation smoke test", criterion10_simulation},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    const Outcome outcome = c.run();
    const double seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    std::printf("[%s] criterion %2d: %s: %s (%.1fs)\n",
                outcome.passed ? "PASS" : "FAIL", c.id, c.name,
                outcome.detail.c_str(), seconds);
    std::fflush(stdout);
    if (!outcome.passed) ++failures;
  }
  if (failures > 0) {
    std::printf("%d criterion(s) failed\n", failures);
  } else {
    std::printf("all criteria passed\n");
  }
  return failures;
}
