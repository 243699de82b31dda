#pragma once

// Independent reference implementations used only for differential testing.
// Nothing here may be called from the streaming evaluation path: the point
// of this module is that it shares no code with what it checks.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "skoromap/report.hpp"
#include "skoromap/step_path.hpp"
#include "skoromap/two_sided.hpp"

namespace skoromap {

struct FixedPointResult {
  StepPath eta_l;
  StepPath eta_u;
  std::size_t iterations;
};

/// Thrown when the alternating iteration fails to stabilize within the
/// sweep budget; carries the last iterates for inspection.
class fixed_point_error : public std::runtime_error {
 public:
  fixed_point_error(std::string message, StepPath last_eta_l,
                    StepPath last_eta_u)
      : std::runtime_error(std::move(message)),
        eta_l(std::move(last_eta_l)),
        eta_u(std::move(last_eta_u)) {}

  StepPath eta_l;
  StepPath eta_u;
};

/// Observer invoked once per sweep with the current iterates; lets tests
/// watch the monotone climb to the fixed point.
using FixedPointObserver =
    std::function<void(const std::vector<double>&, const std::vector<double>&)>;

/// Solve the coupled regulator equations
///   eta_u(t) = sup_{s<=t} [psi(s) + eta_l(s) - a]^+
///   eta_l(t) = sup_{s<=t} [z + eta_u(s) - psi(s)]^+
/// by alternating them from zero. Iterates increase monotonically and every
/// grid value is a finite composition of +, -, max of the inputs, so the
/// iteration stabilizes exactly; termination is tested with ==. One
/// iteration = one sweep (an eta_u update followed by an eta_l update);
/// the count includes the final sweep that detects stability. max_iter = 0
/// selects the default budget of 2n + 2 sweeps on an n-point grid.
inline FixedPointResult fixed_point_regulators(
    const StepPath& psi, const Band& band, std::size_t max_iter = 0,
    const FixedPointObserver& observer = {}) {
  const std::size_t n = psi.size();
  if (max_iter == 0) max_iter = 2 * n + 2;
  const double z = band.lower();
  const double a = band.upper();
  std::vector<double> lower(n, 0.0);
  std::vector<double> upper(n, 0.0);
  std::vector<double> next_lower(n);
  std::vector<double> next_upper(n);
  for (std::size_t sweep = 1; sweep <= max_iter; ++sweep) {
    double run = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      run = std::max(run, psi.values()[k] + lower[k] - a);
      next_upper[k] = run;
    }
    run = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      run = std::max(run, z + next_upper[k] - psi.values()[k]);
      next_lower[k] = run;
    }
    const bool stable = next_upper == upper && next_lower == lower;
    upper.swap(next_upper);
    lower.swap(next_lower);
    if (observer) observer(lower, upper);
    if (stable) {
      return FixedPointResult{StepPath(psi.grid(), std::move(lower)),
                              StepPath(psi.grid(), std::move(upper)), sweep};
    }
  }
  throw fixed_point_error(
      "fixed_point_regulators: no fixed point within " +
          std::to_string(max_iter) + " sweeps",
      StepPath(psi.grid(), std::move(lower)),
      StepPath(psi.grid(), std::move(upper)));
}

/// Literal O(n^2) evaluation of Lambda_{z,a}: for every t, every s <= t, the
/// clipped-excess term is recomputed with a fresh inner infimum.
inline StepPath lambda_naive(const StepPath& phi, const Band& band) {
  const double z = band.lower();
  const double a = band.upper();
  const std::size_t n = phi.size();
  std::vector<double> out(n);
  for (std::size_t t = 0; t < n; ++t) {
    double best = -std::numeric_limits<double>::infinity();
    double run_inf = std::numeric_limits<double>::infinity();
    for (std::size_t s = t + 1; s-- > 0;) {
      run_inf = std::min(run_inf, phi.values()[s] - z);
      const double excess = std::max(phi.values()[s] - a, 0.0);
      best = std::max(best, std::min(excess, run_inf));
    }
    out[t] = phi.values()[t] - best;
  }
  return StepPath(phi.grid(), std::move(out));
}

/// Full discrete verification of a candidate two-sided solution:
///   (i)   phibar = psi + eta_l - eta_u,
///   (ii)  z <= phibar <= a,
///   (iii) eta_l, eta_u nondecreasing,
///   (iv)  complementarity and minimality (a push at the lower barrier only
///         with phibar at z, at the upper only with phibar at a, never both),
///   (v)   initial values eta_l(0) = [z - psi(0)]^+, eta_u(0) = [psi(0)-a]^+,
///   (vi)  agreement with the per-step projection recursion, which by
///         uniqueness of the solution pins the candidate down entirely.
inline ComplianceReport verify_solution(const StepPath& psi,
                                        const TwoSidedSolution& sol,
                                        const Band& band, double tol = 1e-9) {
  if (!same_grid(psi, sol.phibar) || !same_grid(psi, sol.eta_l) ||
      !same_grid(psi, sol.eta_u)) {
    throw std::domain_error("verify_solution: grids differ");
  }
  const double z = band.lower();
  const double a = band.upper();
  ComplianceReport report;
  const std::size_t n = psi.size();
  double clip = project_band(psi.values()[0], band);
  for (std::size_t k = 0; k < n; ++k) {
    const double phibar = sol.phibar.values()[k];
    const double lower = sol.eta_l.values()[k];
    const double upper = sol.eta_u.values()[k];
    report.check("decomposition", k,
                 std::abs(phibar - (psi.values()[k] + lower - upper)), tol);
    report.check("range_lower", k, z - phibar, tol);
    report.check("range_upper", k, phibar - a, tol);
    const double dl = k == 0 ? lower : lower - sol.eta_l.values()[k - 1];
    const double du = k == 0 ? upper : upper - sol.eta_u.values()[k - 1];
    report.check("monotone_eta_l", k, -dl, tol);
    report.check("monotone_eta_u", k, -du, tol);
    if (dl > tol) {
      report.check("complementarity_lower", k, std::abs(phibar - z), tol);
    }
    if (du > tol) {
      report.check("complementarity_upper", k, std::abs(phibar - a), tol);
    }
    if (dl > tol && du > tol) {
      report.check("both_barriers_pushed", k, std::min(dl, du), tol);
    }
    if (k > 0) {
      clip = project_band(clip + psi.values()[k] - psi.values()[k - 1], band);
    }
    report.check("uniqueness", k, std::abs(phibar - clip), tol);
  }
  report.check("initial_eta_l", 0,
               std::abs(sol.eta_l.values()[0] -
                        std::max(0.0, z - psi.values()[0])),
               tol);
  report.check("initial_eta_u", 0,
               std::abs(sol.eta_u.values()[0] -
                        std::max(0.0, psi.values()[0] - a)),
               tol);
  return report;
}

}  // namespace skoromap
