#pragma once

// One-sided reflection maps: Gamma_z keeps a path at or above a lower
// barrier, Gamma_a keeps it at or below an upper barrier. Both are single
// O(n) passes with a running extremum, and both return the regulator that
// realizes the constraint.

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "skoromap/report.hpp"
#include "skoromap/step_path.hpp"

namespace skoromap {

/// Constrained path and its regulator on the input grid. For the lower map
/// phi = psi + eta; for the upper map phi = psi - eta. eta is nondecreasing
/// with eta(0) the initial projection jump.
struct OneSidedSolution {
  StepPath phi;
  StepPath eta;
};

enum class BarrierSide { lower, upper };

/// Reflection at a lower barrier z:
///   phi(t) = psi(t) + max_{s <= t} [z - psi(s)]^+.
inline OneSidedSolution gamma_lower(const StepPath& psi, double z) {
  const std::size_t n = psi.size();
  std::vector<double> phi(n);
  std::vector<double> eta(n);
  double push = std::max(0.0, z - psi.values()[0]);
  phi[0] = psi.values()[0] + push;
  eta[0] = push;
  for (std::size_t k = 1; k < n; ++k) {
    push = std::max(push, z - psi.values()[k]);
    phi[k] = psi.values()[k] + push;
    eta[k] = push;
  }
  return OneSidedSolution{StepPath(psi.grid(), std::move(phi)),
                          StepPath(psi.grid(), std::move(eta))};
}

/// Reflection at an upper barrier a:
///   phi(t) = psi(t) - max_{s <= t} [psi(s) - a]^+.
/// Identical to a - gamma_lower(a - psi, 0) up to floating rounding.
inline OneSidedSolution gamma_upper(const StepPath& psi, double a) {
  const std::size_t n = psi.size();
  std::vector<double> phi(n);
  std::vector<double> eta(n);
  double push = std::max(0.0, psi.values()[0] - a);
  phi[0] = psi.values()[0] - push;
  eta[0] = push;
  for (std::size_t k = 1; k < n; ++k) {
    push = std::max(push, psi.values()[k] - a);
    phi[k] = psi.values()[k] - push;
    eta[k] = push;
  }
  return OneSidedSolution{StepPath(psi.grid(), std::move(phi)),
                          StepPath(psi.grid(), std::move(eta))};
}

/// Discrete complementarity: the regulator may only grow while the path sits
/// on the barrier. Every step whose regulator increment exceeds tol must
/// have |phi - barrier| <= tol; step 0 counts its full initial value.
inline ComplianceReport check_complementarity_one_sided(
    const OneSidedSolution& sol, double barrier, BarrierSide side,
    double tol = 1e-9) {
  (void)side;  // the condition is symmetric once the barrier is given
  if (!same_grid(sol.phi, sol.eta)) {
    throw std::domain_error(
        "check_complementarity_one_sided: phi/eta grids differ");
  }
  ComplianceReport report;
  const auto& phi = sol.phi.values();
  const auto& eta = sol.eta.values();
  for (std::size_t k = 0; k < eta.size(); ++k) {
    const double increment = k == 0 ? eta[0] : eta[k] - eta[k - 1];
    if (increment > tol) {
      report.check("complementarity", k, std::abs(phi[k] - barrier), tol);
    }
  }
  return report;
}

}  // namespace skoromap
