#pragma once

// Finite-buffer queue simulator: the two-sided reflection map applied to a
// seeded Gaussian random-walk netflow. The reflection runs through the
// O(1)-state ReflectionStream, so paths are never materialized; regulator
// totals give the queue's loss (upper pushes) and enforced idleness (lower
// pushes).

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "skoromap/report.hpp"
#include "skoromap/rng.hpp"
#include "skoromap/step_path.hpp"
#include "skoromap/two_sided.hpp"

namespace skoromap {

struct SimConfig {
  std::uint64_t seed = 0;
  std::size_t steps = 1;
  double dt = 1.0;
  double mu = 0.0;      // drift per unit time
  double sigma = 0.0;   // volatility per sqrt unit time
  Band band{0.0, 1.0};
  double initial = 0.0;
  std::size_t replications = 1;
  std::size_t histogram_bins = 50;
  double burn_in_fraction = 0.2;

  void validate() const {
    if (steps < 1 || replications < 1 || histogram_bins < 1) {
      throw std::invalid_argument(
          "SimConfig: steps, replications, histogram_bins must be >= 1");
    }
    if (!(dt > 0.0) || !(sigma >= 0.0) || !std::isfinite(mu) ||
        !std::isfinite(dt) || !std::isfinite(sigma)) {
      throw std::invalid_argument("SimConfig: require dt > 0 and sigma >= 0");
    }
    if (!(initial >= band.lower()) || !(initial <= band.upper())) {
      throw std::invalid_argument("SimConfig: initial must lie in the band");
    }
    if (!(burn_in_fraction >= 0.0) || !(burn_in_fraction < 1.0)) {
      throw std::invalid_argument("SimConfig: burn_in_fraction in [0, 1)");
    }
  }
};

struct SimStats {
  double mean_occupancy = 0.0;
  double frac_at_lower = 0.0;
  double frac_at_upper = 0.0;
  double total_loss = 0.0;       // final eta_u summed over replications
  double total_idle_push = 0.0;  // final eta_l summed over replications
  std::vector<std::uint64_t> occupancy_histogram;
  Band band{0.0, 1.0};
  std::size_t steps = 0;
  std::size_t replications = 0;
};

namespace detail {

struct SimAccumulators {
  double occupancy_sum = 0.0;
  std::uint64_t at_lower = 0;
  std::uint64_t at_upper = 0;
  double loss = 0.0;
  double idle = 0.0;
  std::vector<std::uint64_t> histogram;
  std::uint64_t histogram_samples = 0;
};

/// One pass over all replications, in replication order, with one RNG per
/// replication; results are independent of any hypothetical execution
/// interleaving. Samples with index < hist_burn are kept out of the
/// histogram only.
inline SimAccumulators simulate_core(const SimConfig& cfg,
                                     std::size_t hist_burn) {
  const double z = cfg.band.lower();
  const double a = cfg.band.upper();
  const double w = cfg.band.width();
  const double contact_eps =
      1e-9 * std::max({1.0, std::abs(z), std::abs(a)});
  const double sqrt_dt = std::sqrt(cfg.dt);
  const double bins = static_cast<double>(cfg.histogram_bins);
  SimAccumulators acc;
  acc.histogram.assign(cfg.histogram_bins, 0);
  for (std::size_t r = 0; r < cfg.replications; ++r) {
    std::mt19937_64 engine(child_seed(cfg.seed, r));
    std::normal_distribution<double> gauss(0.0, 1.0);
    ReflectionStream stream(cfg.band, cfg.initial);
    double psi = cfg.initial;
    for (std::size_t k = 0; k < cfg.steps; ++k) {
      psi += cfg.mu * cfg.dt + cfg.sigma * sqrt_dt * gauss(engine);
      stream.step(psi);
      const double x = stream.phibar();
      acc.occupancy_sum += x;
      if (x <= z + contact_eps) ++acc.at_lower;
      if (x >= a - contact_eps) ++acc.at_upper;
      if (k >= hist_burn) {
        long bin = static_cast<long>(std::floor((x - z) / w * bins));
        if (bin < 0) bin = 0;
        if (bin >= static_cast<long>(cfg.histogram_bins)) {
          bin = static_cast<long>(cfg.histogram_bins) - 1;
        }
        ++acc.histogram[static_cast<std::size_t>(bin)];
        ++acc.histogram_samples;
      }
    }
    acc.loss += stream.total_upper();
    acc.idle += stream.total_lower();
  }
  return acc;
}

}  // namespace detail

/// Run the configured simulation. Deterministic for a fixed config: each
/// replication derives its own child seed and statistics merge in
/// replication order.
inline SimStats simulate(const SimConfig& cfg) {
  cfg.validate();
  const auto acc = detail::simulate_core(cfg, 0);
  const double samples =
      static_cast<double>(cfg.steps) * static_cast<double>(cfg.replications);
  SimStats stats;
  stats.mean_occupancy = acc.occupancy_sum / samples;
  stats.frac_at_lower = static_cast<double>(acc.at_lower) / samples;
  stats.frac_at_upper = static_cast<double>(acc.at_upper) / samples;
  stats.total_loss = acc.loss;
  stats.total_idle_push = acc.idle;
  stats.occupancy_histogram = acc.histogram;
  stats.band = cfg.band;
  stats.steps = cfg.steps;
  stats.replications = cfg.replications;
  return stats;
}

/// Compare the post-burn-in occupancy histogram against the stationary
/// density of reflected Brownian motion on the band, which is proportional
/// to exp(2 mu x / sigma^2) (uniform when mu = 0). Both histograms are
/// normalized to probability masses; the report carries their sup distance.
inline ComplianceReport occupancy_density_check(const SimConfig& cfg,
                                                double tolerance) {
  cfg.validate();
  if (!(cfg.sigma > 0.0)) {
    throw std::domain_error("occupancy_density_check: requires sigma > 0");
  }
  const std::size_t burn =
      static_cast<std::size_t>(cfg.burn_in_fraction *
                               static_cast<double>(cfg.steps));
  if (burn >= cfg.steps) {
    throw std::domain_error(
        "occupancy_density_check: no samples left after burn-in");
  }
  const auto acc = detail::simulate_core(cfg, burn);
  const double total = static_cast<double>(acc.histogram_samples);
  const std::size_t bins = cfg.histogram_bins;
  const double w = cfg.band.width();
  const double c = 2.0 * cfg.mu / (cfg.sigma * cfg.sigma);
  ComplianceReport report;
  for (std::size_t i = 0; i < bins; ++i) {
    const double left = w * static_cast<double>(i) / static_cast<double>(bins);
    const double right =
        w * static_cast<double>(i + 1) / static_cast<double>(bins);
    double reference;
    if (std::abs(c) * w < 1e-12) {
      reference = 1.0 / static_cast<double>(bins);
    } else {
      reference = (std::exp(c * right) - std::exp(c * left)) /
                  (std::exp(c * w) - 1.0);
    }
    const double empirical = static_cast<double>(acc.histogram[i]) / total;
    report.check("occupancy_bin", i, std::abs(empirical - reference),
                 tolerance);
  }
  return report;
}

}  // namespace skoromap
