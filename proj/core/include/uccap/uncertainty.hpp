#pragma once

#include <cstdint>
#include <optional>

#include "uccap/capability.hpp"
#include "uccap/types.hpp"

namespace uccap {

/// The estimation route a dimension was assigned: resamples are pushed
/// through the same route so the SE matches the reported estimate.
struct EstimatorRoute {
  CpkMethod method = CpkMethod::normal;
  DistFamily family = DistFamily::normal;  // percentile best-fit only
  bool empirical = false;                  // percentile empirical mode

  static EstimatorRoute from_estimate(const CapabilityEstimate& est) {
    return EstimatorRoute{est.method, est.best_fit, false};
  }
};

/// Capability of one resample under a fixed route. Throws
/// DegenerateSample/QuantileCollapse when the resample has no spread.
double cpk_along_route(std::span<const double> values, const SpecLimits& spec,
                       const EstimatorRoute& route);

/// Nonparametric bootstrap standard error of the capability estimate:
/// n_boot resamples with replacement of size n, each estimated through
/// `route`; degenerate resamples are redrawn (up to 10 retries).
double bootstrap_se(const DimensionSample& sample, int n_boot,
                    const EstimatorRoute& route, std::uint64_t rng_seed);

struct BaselineRisk {
  double se = 0.0;
  double pi_stat = 0.5;  // clipped failure probability
  double z_stat = 0.0;   // logit of the clipped probability
  double c0 = 1.33;
  double epsilon_clip = 1e-6;
};

/// Failure probability Phi((c0 - cpk_hat)/se) clipped away from {0, 1},
/// with its log-odds.
BaselineRisk baseline_risk(double cpk_hat, double se, double c0,
                           double epsilon_clip = 1e-6);

}  // namespace uccap
