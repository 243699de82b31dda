#pragma once

// Seeded scenario generators and the executable form of the paper's
// inequality suites: Lipschitz bounds, oscillation bound, one- and two-sided
// comparison chains, and the shift/restart identity. Checks are pure
// functions of their inputs; identical inputs reproduce identical reports
// bit for bit.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "skoromap/one_sided.hpp"
#include "skoromap/report.hpp"
#include "skoromap/rng.hpp"
#include "skoromap/step_path.hpp"
#include "skoromap/two_sided.hpp"

namespace skoromap {

/// Deterministic recipe for one pseudo-random step path: n jump times
/// uniform on (0, horizon), increments drift + jump_scale * uniform[-1, 1],
/// cumulated from start.
struct PathGenSpec {
  std::uint64_t seed = 0;
  std::size_t n = 1;
  double jump_scale = 1.0;
  double drift = 0.0;
  double start = 0.0;
  double horizon = 1.0;
};

namespace detail {

inline std::vector<double> gen_jump_times(SplitMix64& rng,
                                          const PathGenSpec& spec) {
  std::vector<double> times{0.0};
  for (std::size_t i = 0; i < spec.n; ++i) {
    const double t = rng.u01() * spec.horizon;
    if (t > 0.0) times.push_back(t);
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  return times;
}

}  // namespace detail

inline StepPath gen_step_path(const PathGenSpec& spec) {
  if (spec.n < 1 || !(spec.jump_scale >= 0.0) || !(spec.horizon > 0.0)) {
    throw std::invalid_argument("gen_step_path: invalid spec");
  }
  detail::SplitMix64 rng(spec.seed);
  std::vector<double> times = detail::gen_jump_times(rng, spec);
  std::vector<double> values;
  values.reserve(times.size());
  double v = spec.start;
  values.push_back(v);
  for (std::size_t k = 1; k < times.size(); ++k) {
    v += spec.drift + spec.jump_scale * rng.sym();
    values.push_back(v);
  }
  return StepPath(std::move(times), std::move(values));
}

/// Nondecreasing variant: increments are |drift + jump_scale * uniform|,
/// so no negative increment can ever be emitted.
inline StepPath gen_nondecreasing_path(const PathGenSpec& spec) {
  if (spec.n < 1 || !(spec.jump_scale >= 0.0) || !(spec.horizon > 0.0) ||
      !(spec.start >= 0.0)) {
    throw std::invalid_argument("gen_nondecreasing_path: invalid spec");
  }
  detail::SplitMix64 rng(spec.seed);
  std::vector<double> times = detail::gen_jump_times(rng, spec);
  std::vector<double> values;
  values.reserve(times.size());
  double v = spec.start;
  values.push_back(v);
  for (std::size_t k = 1; k < times.size(); ++k) {
    v += std::abs(spec.drift + spec.jump_scale * rng.sym());
    values.push_back(v);
  }
  return StepPath(std::move(times), std::move(values));
}

/// Inputs for one comparison experiment: the smaller driver psi', the
/// nondecreasing gap nu (psi = psi' + nu on the merged grid), the two
/// starting constants, the band, and a seed for the sandwich generator.
struct ComparisonScenario {
  StepPath psi_prime;
  StepPath nu;
  double c0;
  double c0_prime;
  Band band;
  std::uint64_t seed;
};

/// Replayable recipe for a ComparisonScenario.
struct ComparisonScenarioSpec {
  PathGenSpec psi_prime_spec;
  PathGenSpec nu_spec;
  double c0;
  double c0_prime;
  Band band;
  std::uint64_t seed;

  ComparisonScenario materialize() const {
    return ComparisonScenario{gen_step_path(psi_prime_spec),
                              gen_nondecreasing_path(nu_spec),
                              c0,
                              c0_prime,
                              band,
                              seed};
  }
};

/// Draw a scenario around the given band: jump scales on the order of the
/// band width, constants landing both inside and outside the band.
inline ComparisonScenarioSpec gen_comparison_spec(std::uint64_t seed,
                                                  std::size_t max_steps,
                                                  const Band& band) {
  if (max_steps < 1) {
    throw std::invalid_argument("gen_comparison_spec: max_steps must be >= 1");
  }
  detail::SplitMix64 rng(seed);
  const double w = band.width();
  PathGenSpec psi_spec;
  psi_spec.seed = rng.next();
  psi_spec.n = 1 + static_cast<std::size_t>(rng.next() % max_steps);
  psi_spec.jump_scale = w * (0.1 + 1.9 * rng.u01());
  psi_spec.drift = 0.25 * w * rng.sym();
  psi_spec.start = 0.0;
  psi_spec.horizon = 1.0;
  PathGenSpec nu_spec;
  nu_spec.seed = rng.next();
  nu_spec.n = 1 + static_cast<std::size_t>(rng.next() % max_steps);
  nu_spec.jump_scale = w * rng.u01();
  nu_spec.drift = 0.125 * w * rng.sym();
  nu_spec.start = 0.0;
  nu_spec.horizon = 1.0;
  const double c0 = band.lower() - w + 3.0 * w * rng.u01();
  const double c0_prime = band.lower() - w + 3.0 * w * rng.u01();
  return ComparisonScenarioSpec{psi_spec, nu_spec, c0, c0_prime, band,
                                rng.next()};
}

namespace detail {

inline void require_nondecreasing(const StepPath& nu) {
  if (nu.values()[0] < 0.0) {
    throw std::domain_error("comparison: nu(0) must be >= 0");
  }
  for (std::size_t k = 1; k < nu.size(); ++k) {
    if (nu.values()[k] < nu.values()[k - 1]) {
      throw std::domain_error("comparison: nu must be nondecreasing");
    }
  }
}

}  // namespace detail

/// Both 2-Lipschitz bounds in the uniform metric: for Lambda_{z,a} applied
/// to the inputs directly, and for the full two-sided map.
inline ComplianceReport check_lipschitz_uniform(const StepPath& psi1,
                                                const StepPath& psi2,
                                                const Band& band,
                                                double tol = 1e-9) {
  const double T = std::max(psi1.horizon(), psi2.horizon());
  const double d = uniform_distance(psi1, psi2, T);
  ComplianceReport report;
  const double d_lambda = uniform_distance(lambda_map(psi1, band),
                                           lambda_map(psi2, band), T);
  report.check("lambda_lipschitz", 0, d_lambda - 2.0 * d, tol);
  const double d_gamma =
      uniform_distance(reflect(psi1, band).phibar,
                       reflect(psi2, band).phibar, T);
  report.check("gamma_lipschitz", 0, d_gamma - 2.0 * d, tol);
  return report;
}

/// The full two-sided comparison suite for inputs c0 + psi and c0' + psi'
/// with psi = psi' + nu: the four inequality chains of the comparison
/// theorem, the weaker corollary bounds they refine, and the strengthened
/// difference bounds. For a general band the width a - z replaces a.
inline ComplianceReport check_comparison_two_sided(
    const ComparisonScenario& sc, double tol = 1e-9) {
  detail::require_nondecreasing(sc.nu);
  const std::vector<double> grid = merge_grids(sc.psi_prime, sc.nu);
  const StepPath psi_prime = resample(sc.psi_prime, grid);
  const StepPath nu = resample(sc.nu, grid);
  const StepPath psi = add(psi_prime, nu);
  const TwoSidedSolution sol = reflect(affine(psi, 1.0, sc.c0), sc.band);
  const TwoSidedSolution solp =
      reflect(affine(psi_prime, 1.0, sc.c0_prime), sc.band);
  const double p = detail::pos(sc.c0 - sc.c0_prime);
  const double q = detail::pos(sc.c0_prime - sc.c0);
  const double abs_dc = std::abs(sc.c0_prime - sc.c0);
  const double w = sc.band.width();
  ComplianceReport report;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double nu_k = nu.values()[k];
    const double el = sol.eta_l.values()[k];
    const double eu = sol.eta_u.values()[k];
    const double eb = sol.etabar.values()[k];
    const double elp = solp.eta_l.values()[k];
    const double eup = solp.eta_u.values()[k];
    const double ebp = solp.etabar.values()[k];
    const double dphi = solp.phibar.values()[k] - sol.phibar.values()[k];
    report.check("thm17_1_lower", k, (el - q) - elp, tol);
    report.check("thm17_1_upper", k, elp - (el + nu_k + p), tol);
    report.check("thm17_2_lower", k, (eup - q) - eu, tol);
    report.check("thm17_2_upper", k, eu - (eup + nu_k + p), tol);
    report.check("thm17_3_lower", k, (eb - q) - ebp, tol);
    report.check("thm17_3_upper", k, ebp - (eb + nu_k + p), tol);
    report.check("thm17_4_lower", k, std::max(-p - nu_k, -w) - dphi, tol);
    report.check("thm17_4_upper", k, dphi - std::min(q, w), tol);
    report.check("cor42_1_lower", k, (eb - 2.0 * q) - ebp, tol);
    report.check("cor42_1_upper", k, ebp - (eb + 2.0 * nu_k + 2.0 * p), tol);
    report.check("cor42_2_lower", k,
                 std::max(-abs_dc - nu_k, -w) - dphi, tol);
    report.check("cor42_2_upper", k, dphi - std::min(abs_dc + nu_k, w), tol);
    report.check("rem43_45_lower", k, -q - (ebp - eb), tol);
    report.check("rem43_45_upper", k, (ebp - eb) - (p + nu_k), tol);
  }
  return report;
}

/// One-sided comparison at the band's lower barrier for inputs c0 + psi and
/// c0' + psi'. In sandwich mode psi is drawn uniformly between psi' and
/// psi' + nu piece by piece; in exact mode psi = psi' + nu, which also
/// activates the sharper lower bound on phi.
inline ComplianceReport check_comparison_one_sided(
    const ComparisonScenario& sc, bool sandwich, double tol = 1e-9) {
  detail::require_nondecreasing(sc.nu);
  const std::vector<double> grid = merge_grids(sc.psi_prime, sc.nu);
  const StepPath psi_prime = resample(sc.psi_prime, grid);
  const StepPath nu = resample(sc.nu, grid);
  StepPath psi = add(psi_prime, nu);
  if (sandwich) {
    detail::SplitMix64 rng(sc.seed ^ 0xC2B2AE3D27D4EB4Full);
    std::vector<double> mixed(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double lo = psi_prime.values()[k];
      const double hi = lo + nu.values()[k];
      mixed[k] = std::clamp(lo + rng.u01() * nu.values()[k], lo, hi);
      if (!(mixed[k] >= lo) || !(mixed[k] <= hi)) {
        throw std::runtime_error(
            "check_comparison_one_sided: sandwich generator left its bounds");
      }
    }
    psi = StepPath(grid, std::move(mixed));
  }
  const double z = sc.band.lower();
  const OneSidedSolution sol = gamma_lower(affine(psi, 1.0, sc.c0), z);
  const OneSidedSolution solp =
      gamma_lower(affine(psi_prime, 1.0, sc.c0_prime), z);
  const double p = detail::pos(sc.c0 - sc.c0_prime);
  const double q = detail::pos(sc.c0_prime - sc.c0);
  ComplianceReport report;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double nu_k = nu.values()[k];
    const double eta = sol.eta.values()[k];
    const double etap = solp.eta.values()[k];
    const double phi = sol.phi.values()[k];
    const double phip = solp.phi.values()[k];
    report.check("lem41_1_lower", k, (eta - q) - etap, tol);
    report.check("lem41_1_upper", k, etap - (eta + nu_k + p), tol);
    report.check("lem41_2_lower", k, (phip - nu_k - q) - phi, tol);
    report.check("lem41_2_upper", k, phi - (phip + nu_k + p), tol);
    if (!sandwich) {
      report.check("ineq41_lower", k, (phip - q) - phi, tol);
      report.check("ineq41_upper", k, phi - (phip + nu_k + p), tol);
    }
  }
  return report;
}

/// Restart identity: reflecting the shifted input from the constrained value
/// at a grid time alpha reproduces the tail of the original solution, for
/// the two-sided map and both one-sided maps. Tail points are compared by
/// grid index, never by re-evaluating at recomputed times.
inline ComplianceReport check_shift(const StepPath& psi, const Band& band,
                                    double alpha, double tol = 1e-9) {
  const auto& times = psi.times();
  const auto it = std::lower_bound(times.begin(), times.end(), alpha);
  if (it == times.end() || *it != alpha) {
    throw std::domain_error("check_shift: alpha must be a grid time");
  }
  const std::size_t i0 = static_cast<std::size_t>(it - times.begin());
  const StepPath tail = shift(psi, alpha);
  ComplianceReport report;

  const TwoSidedSolution sol = reflect(psi, band);
  const TwoSidedSolution restarted =
      reflect(affine(tail, 1.0, sol.phibar.values()[i0]), band);
  for (std::size_t j = 0; j < tail.size(); ++j) {
    report.check("shift_two_sided", j,
                 std::abs(restarted.phibar.values()[j] -
                          sol.phibar.values()[i0 + j]),
                 tol);
  }

  const OneSidedSolution low = gamma_lower(psi, band.lower());
  const OneSidedSolution low_restarted =
      gamma_lower(affine(tail, 1.0, low.phi.values()[i0]), band.lower());
  const OneSidedSolution high = gamma_upper(psi, band.upper());
  const OneSidedSolution high_restarted =
      gamma_upper(affine(tail, 1.0, high.phi.values()[i0]), band.upper());
  for (std::size_t j = 0; j < tail.size(); ++j) {
    report.check("shift_lower", j,
                 std::abs(low_restarted.phi.values()[j] -
                          low.phi.values()[i0 + j]),
                 tol);
    report.check("shift_upper", j,
                 std::abs(high_restarted.phi.values()[j] -
                          high.phi.values()[i0 + j]),
                 tol);
  }
  return report;
}

/// Oscillation bound: osc(Lambda(phi)) <= 2 osc(phi) on every window.
inline ComplianceReport check_oscillation(
    const StepPath& phi, const Band& band,
    const std::vector<std::pair<double, double>>& windows, double tol = 1e-9) {
  const StepPath lam = lambda_map(phi, band);
  ComplianceReport report;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const auto& [t1, t2] = windows[i];
    report.check("oscillation_bound", i,
                 oscillation(lam, t1, t2) - 2.0 * oscillation(phi, t1, t2),
                 tol);
  }
  return report;
}

}  // namespace skoromap
