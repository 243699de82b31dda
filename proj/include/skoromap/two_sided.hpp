#pragma once

// Two-sided reflection on a band [z, a]. The map factors as
// Gamma_{z,a} = Lambda_{z,a} ∘ Gamma_z, where
//
//   Lambda_{z,a}(phi)(t) = phi(t) - sup_{s<=t} [ (phi(s)-a)^+ ∧
//                                                inf_{u in [s,t]} (phi(u)-z) ]
//
// On a grid the supremum state M_k = sup_{s<=k} [...] obeys the one-step
// recursion
//
//   M_k = max( min(M_{k-1}, phi_k - z), min((phi_k - a)^+, phi_k - z) ),
//
// which turns the whole composition into a single pass with two scalars of
// state. Three further evaluators (brute force, the closed form that avoids
// the intermediate one-sided path, and the per-step band projection) exist
// so the factorization can be cross-checked rather than trusted.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "skoromap/one_sided.hpp"
#include "skoromap/report.hpp"
#include "skoromap/step_path.hpp"

namespace skoromap {

/// Constrained path phibar in [z, a], net regulator etabar = phibar - psi,
/// and its minimal decomposition into a nondecreasing lower push eta_l and
/// upper push eta_u (etabar = eta_l - eta_u, never both increasing at once).
struct TwoSidedSolution {
  StepPath phibar;
  StepPath etabar;
  StepPath eta_l;
  StepPath eta_u;
};

/// Alternating first-passage times at which pushing switches barriers:
/// 0 = tau_0 <= sigma_0 < tau_1 < sigma_1 < ... Each vector ends with a
/// +infinity sentinel on the sequence that failed to find its next time.
struct CrossingSchedule {
  std::vector<double> sigma;
  std::vector<double> tau;
};

enum class ReflectMethod { streaming, naive, remark15, clip };

namespace detail {

inline double pos(double x) { return x > 0.0 ? x : 0.0; }

/// One-step update of M = sup_{s<=k} [(phi_s - a)^+ ∧ min_{u in [s,k]}(phi_u - z)].
inline double lambda_state_update(double m_prev, double phi, double z,
                                  double a) {
  return std::max(std::min(m_prev, phi - z),
                  std::min(pos(phi - a), phi - z));
}

inline double lambda_state_init(double phi, double z, double a) {
  return std::min(pos(phi - a), phi - z);
}

}  // namespace detail

/// O(1)-state form of the streaming evaluator: feed psi values one at a
/// time, read back the constrained value and the regulator increments of the
/// step just taken. Used unchanged by reflect() and by the queue simulator,
/// which never materializes its 10^7-step paths.
class ReflectionStream {
 public:
  ReflectionStream(const Band& band, double psi0)
      : z_(band.lower()), a_(band.upper()) {
    deficit_ = std::max(0.0, z_ - psi0);
    const double phi = psi0 + deficit_;
    m_ = detail::lambda_state_init(phi, z_, a_);
    phibar_ = phi - m_;
    psi_ = psi0;
    const double delta = phibar_ - psi0;
    push_lower_ = detail::pos(delta);
    push_upper_ = detail::pos(-delta);
    total_lower_ = push_lower_;
    total_upper_ = push_upper_;
  }

  void step(double psi_next) {
    deficit_ = std::max(deficit_, z_ - psi_next);
    const double phi = psi_next + deficit_;
    m_ = detail::lambda_state_update(m_, phi, z_, a_);
    const double phibar_next = phi - m_;
    const double delta = (phibar_next - phibar_) - (psi_next - psi_);
    push_lower_ = detail::pos(delta);
    push_upper_ = detail::pos(-delta);
    total_lower_ += push_lower_;
    total_upper_ += push_upper_;
    phibar_ = phibar_next;
    psi_ = psi_next;
  }

  double phibar() const { return phibar_; }
  double last_push_lower() const { return push_lower_; }
  double last_push_upper() const { return push_upper_; }
  double total_lower() const { return total_lower_; }
  double total_upper() const { return total_upper_; }

 private:
  double z_;
  double a_;
  double deficit_;  // running sup of [z - psi]^+
  double m_;        // running sup of the clipped-excess terms
  double psi_;
  double phibar_;
  double push_lower_;
  double push_upper_;
  double total_lower_;
  double total_upper_;
};

/// Lambda_{z,a} on the grid via the scalar recursion above.
inline StepPath lambda_map(const StepPath& phi, const Band& band) {
  const double z = band.lower();
  const double a = band.upper();
  std::vector<double> out(phi.size());
  double m = detail::lambda_state_init(phi.values()[0], z, a);
  out[0] = phi.values()[0] - m;
  for (std::size_t k = 1; k < phi.size(); ++k) {
    m = detail::lambda_state_update(m, phi.values()[k], z, a);
    out[k] = phi.values()[k] - m;
  }
  return StepPath(phi.grid(), std::move(out));
}

/// Constraining term of Lambda_a for nonnegative phi:
///   C(t) = sup_{s<=t} [(phi(s)-a)^+ ∧ inf_{u in [s,t]} phi(u)],
/// so that Lambda_a(phi) = phi - C.
inline StepPath constraining_term(const StepPath& phi, double a) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw std::invalid_argument("constraining_term: require finite a > 0");
  }
  std::vector<double> c(phi.size());
  double m = 0.0;
  for (std::size_t k = 0; k < phi.size(); ++k) {
    const double v = phi.values()[k];
    if (v < 0.0) {
      throw std::domain_error("constraining_term: phi must be nonnegative");
    }
    m = k == 0 ? detail::lambda_state_init(v, 0.0, a)
               : detail::lambda_state_update(m, v, 0.0, a);
    c[k] = m;
  }
  return StepPath(phi.grid(), std::move(c));
}

namespace detail {

constexpr std::size_t npos = static_cast<std::size_t>(-1);

/// Grid-index form of the crossing times (3.1)-(3.3); npos marks the +inf
/// sentinel terminating the failing sequence.
struct CrossingIndices {
  std::vector<std::size_t> sigma;
  std::vector<std::size_t> tau;
};

inline CrossingIndices crossing_indices(const StepPath& phi, double a) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw std::invalid_argument("crossing_schedule: require finite a > 0");
  }
  const auto& v = phi.values();
  const std::size_t n = phi.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (v[k] < 0.0) {
      throw std::domain_error("crossing_schedule: phi must be nonnegative");
    }
  }
  CrossingIndices sched;
  // sigma_0: first time phi - a >= 0.
  std::size_t i = 0;
  while (i < n && !(v[i] - a >= 0.0)) ++i;
  if (i == n) {
    sched.sigma.push_back(npos);
    return sched;
  }
  sched.sigma.push_back(i);
  while (true) {
    // tau_k: first t >= sigma_{k-1} with phi(t) <= sup_{[sigma,t]} phi - a.
    std::size_t start = sched.sigma.back();
    double run_sup = v[start];
    std::size_t j = start;
    std::size_t tau = npos;
    for (; j < n; ++j) {
      run_sup = std::max(run_sup, v[j]);
      if (v[j] <= run_sup - a) {
        tau = j;
        break;
      }
    }
    sched.tau.push_back(tau);
    if (tau == npos) return sched;
    // sigma_k: first t >= tau_k with phi(t) - a >= inf_{[tau,t]} phi.
    double run_inf = v[tau];
    std::size_t sigma = npos;
    for (j = tau; j < n; ++j) {
      run_inf = std::min(run_inf, v[j]);
      if (v[j] - a >= run_inf) {
        sigma = j;
        break;
      }
    }
    sched.sigma.push_back(sigma);
    if (sigma == npos) return sched;
  }
}

inline CrossingSchedule to_times(const CrossingIndices& idx,
                                 const StepPath& phi) {
  const double inf = std::numeric_limits<double>::infinity();
  CrossingSchedule sched;
  for (std::size_t i : idx.sigma) {
    sched.sigma.push_back(i == npos ? inf : phi.times()[i]);
  }
  for (std::size_t i : idx.tau) {
    sched.tau.push_back(i == npos ? inf : phi.times()[i]);
  }
  return sched;
}

}  // namespace detail

/// Crossing times for a nonnegative path and level a, scanned with the
/// non-strict inequalities of the definitions (ties trigger the crossing;
/// sigma_0 = 0 is admissible when phi(0) >= a).
inline CrossingSchedule crossing_schedule(const StepPath& phi, double a) {
  return detail::to_times(detail::crossing_indices(phi, a), phi);
}

/// Piecewise assembly of the constraining term from the crossing schedule:
/// zero before sigma_0, a running max of (phi - a)^+ on each push-down
/// stretch [sigma_{k-1}, tau_k), a running min of phi on each push-up
/// stretch [tau_k, sigma_k). Must reproduce constraining_term exactly.
inline StepPath c_from_schedule(const StepPath& phi, double a,
                                const CrossingSchedule& sched) {
  const auto idx = detail::crossing_indices(phi, a);
  const auto recomputed = detail::to_times(idx, phi);
  if (recomputed.sigma != sched.sigma || recomputed.tau != sched.tau) {
    throw std::domain_error(
        "c_from_schedule: schedule inconsistent with phi and a");
  }
  const auto& v = phi.values();
  const std::size_t n = phi.size();
  std::vector<double> c(n, 0.0);
  if (idx.sigma.front() == detail::npos) {
    return StepPath(phi.grid(), std::move(c));
  }
  std::size_t episode = 0;
  std::size_t k = idx.sigma.front();
  while (k < n) {
    // Push-down stretch starting at sigma_episode.
    const std::size_t stop_tau = episode < idx.tau.size()
                                     ? idx.tau[episode]
                                     : detail::npos;
    double run = detail::pos(v[k] - a);
    for (; k < n && k != stop_tau; ++k) {
      run = std::max(run, detail::pos(v[k] - a));
      c[k] = run;
    }
    if (k == n) break;
    // Push-up stretch starting at tau_{episode+1}.
    const std::size_t stop_sigma = episode + 1 < idx.sigma.size()
                                       ? idx.sigma[episode + 1]
                                       : detail::npos;
    run = v[k];
    for (; k < n && k != stop_sigma; ++k) {
      run = std::min(run, v[k]);
      c[k] = run;
    }
    ++episode;
  }
  return StepPath(phi.grid(), std::move(c));
}

/// Minimal regulator decomposition: the positive and negative parts of the
/// per-step increments of etabar = phibar - psi. Step 0 uses the initial
/// projection jump phibar(0) - psi(0).
inline std::pair<StepPath, StepPath> decompose_regulator(
    const StepPath& psi, const StepPath& phibar) {
  if (!same_grid(psi, phibar)) {
    throw std::domain_error("decompose_regulator: grids differ");
  }
  const std::size_t n = psi.size();
  std::vector<double> lower(n);
  std::vector<double> upper(n);
  double delta = phibar.values()[0] - psi.values()[0];
  lower[0] = detail::pos(delta);
  upper[0] = detail::pos(-delta);
  for (std::size_t k = 1; k < n; ++k) {
    delta = (phibar.values()[k] - phibar.values()[k - 1]) -
            (psi.values()[k] - psi.values()[k - 1]);
    lower[k] = lower[k - 1] + detail::pos(delta);
    upper[k] = upper[k - 1] + detail::pos(-delta);
  }
  return {StepPath(psi.grid(), std::move(lower)),
          StepPath(psi.grid(), std::move(upper))};
}

namespace detail {

inline StepPath reflect_streaming(const StepPath& psi, const Band& band) {
  std::vector<double> out(psi.size());
  ReflectionStream stream(band, psi.values()[0]);
  out[0] = stream.phibar();
  for (std::size_t k = 1; k < psi.size(); ++k) {
    stream.step(psi.values()[k]);
    out[k] = stream.phibar();
  }
  return StepPath(psi.grid(), std::move(out));
}

/// Literal composition of the defining formulas, recomputing every supremum
/// and infimum from scratch: O(n^2), kept deliberately naive.
inline StepPath reflect_naive(const StepPath& psi, const Band& band) {
  const double z = band.lower();
  const double a = band.upper();
  const std::size_t n = psi.size();
  std::vector<double> phi(n);
  for (std::size_t k = 0; k < n; ++k) {
    double sup = 0.0;
    for (std::size_t j = 0; j <= k; ++j) {
      sup = std::max(sup, z - psi.values()[j]);
    }
    phi[k] = psi.values()[k] + sup;
  }
  std::vector<double> out(n);
  for (std::size_t t = 0; t < n; ++t) {
    double best = -std::numeric_limits<double>::infinity();
    double run_inf = std::numeric_limits<double>::infinity();
    for (std::size_t s = t + 1; s-- > 0;) {
      run_inf = std::min(run_inf, phi[s] - z);
      best = std::max(best, std::min(pos(phi[s] - a), run_inf));
    }
    out[t] = phi[t] - best;
  }
  return StepPath(psi.grid(), std::move(out));
}

/// Closed form that skips the intermediate one-sided path:
///   psi(t) - [ (psi(0)-a)^+ ∧ inf_{u<=t} psi(u) ]
///            ∨ sup_{s<=t} [ (psi(s)-a) ∧ inf_{u in [s,t]} psi(u) ],
/// stated for [0, a]; applied to psi - z with level a - z, then translated
/// back.
inline StepPath reflect_remark15(const StepPath& psi, const Band& band) {
  const double z = band.lower();
  const double width = band.width();
  const std::size_t n = psi.size();
  std::vector<double> out(n);
  const double head = pos(psi.values()[0] - z - width);
  double run_min = psi.values()[0] - z;
  // b carries sup_{s<=k} [ (theta_s - width) ∧ min_{u in [s,k]} theta_u ]
  // via the same distributive one-step update as the Lambda state.
  double b = std::min(psi.values()[0] - z - width, psi.values()[0] - z);
  for (std::size_t k = 0; k < n; ++k) {
    const double theta = psi.values()[k] - z;
    if (k > 0) {
      run_min = std::min(run_min, theta);
      b = std::max(std::min(b, theta), std::min(theta - width, theta));
    }
    const double correction = std::max(std::min(head, run_min), b);
    out[k] = z + theta - correction;
  }
  return StepPath(psi.grid(), std::move(out));
}

/// Per-step band projection of the increments; the classical step-function
/// solution.
inline StepPath reflect_clip(const StepPath& psi, const Band& band) {
  const std::size_t n = psi.size();
  std::vector<double> out(n);
  out[0] = project_band(psi.values()[0], band);
  for (std::size_t k = 1; k < n; ++k) {
    out[k] = project_band(
        out[k - 1] + psi.values()[k] - psi.values()[k - 1], band);
  }
  return StepPath(psi.grid(), std::move(out));
}

}  // namespace detail

/// The two-sided Skorokhod map Gamma_{z,a}. All four methods compute the
/// same function; they differ only in evaluation strategy and exist so each
/// can falsify the others.
inline TwoSidedSolution reflect(const StepPath& psi, const Band& band,
                                ReflectMethod method =
                                    ReflectMethod::streaming) {
  StepPath phibar = [&] {
    switch (method) {
      case ReflectMethod::streaming:
        return detail::reflect_streaming(psi, band);
      case ReflectMethod::naive:
        return detail::reflect_naive(psi, band);
      case ReflectMethod::remark15:
        return detail::reflect_remark15(psi, band);
      case ReflectMethod::clip:
        return detail::reflect_clip(psi, band);
    }
    throw std::invalid_argument("reflect: unknown method");
  }();
  auto [eta_l, eta_u] = decompose_regulator(psi, phibar);
  StepPath etabar = sub(phibar, psi);
  return TwoSidedSolution{std::move(phibar), std::move(etabar),
                          std::move(eta_l), std::move(eta_u)};
}

/// Verify the reflection symmetry of a candidate solution for psi against an
/// independent solve of the flipped input (z + a) - psi:
///   phibar(psi) = (z + a) - phibar(flip),  and the regulators swap roles.
inline ComplianceReport reflect_symmetric_check(const StepPath& psi,
                                                const Band& band,
                                                const TwoSidedSolution& sol,
                                                double tol = 1e-9) {
  const double flip_offset = band.lower() + band.upper();
  const StepPath flipped = affine(psi, -1.0, flip_offset);
  const TwoSidedSolution mirror = reflect(flipped, band);
  ComplianceReport report;
  for (std::size_t k = 0; k < psi.size(); ++k) {
    report.check("symmetry_phibar", k,
                 std::abs(sol.phibar.values()[k] -
                          (flip_offset - mirror.phibar.values()[k])),
                 tol);
    report.check("symmetry_eta_l", k,
                 std::abs(mirror.eta_l.values()[k] - sol.eta_u.values()[k]),
                 tol);
    report.check("symmetry_eta_u", k,
                 std::abs(mirror.eta_u.values()[k] - sol.eta_l.values()[k]),
                 tol);
  }
  return report;
}

inline ComplianceReport reflect_symmetric_check(const StepPath& psi,
                                                const Band& band,
                                                double tol = 1e-9) {
  return reflect_symmetric_check(psi, band, reflect(psi, band), tol);
}

}  // namespace skoromap
