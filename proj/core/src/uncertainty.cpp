#include "uccap/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "uccap/errors.hpp"
#include "uccap/math.hpp"
#include "uccap/rng.hpp"

namespace uccap {

double cpk_along_route(std::span<const double> values, const SpecLimits& spec,
                       const EstimatorRoute& route) {
  if (route.method == CpkMethod::normal) {
    const Moments m = compute_moments(values);
    return cpk_normal_value(m.mean, m.sd, spec);
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  if (route.empirical) {
    return cpk_from_quantiles(empirical_quantile(sorted, percentile_p_low()),
                              empirical_quantile(sorted, 0.5),
                              empirical_quantile(sorted, percentile_p_high()), spec);
  }
  auto fit = fit_family(sorted, route.family);
  if (!fit) {
    throw Error(ErrorCode::DegenerateSample, "resample cannot be fitted");
  }
  return cpk_from_quantiles(dist_quantile(*fit, percentile_p_low()),
                            dist_quantile(*fit, 0.5),
                            dist_quantile(*fit, percentile_p_high()), spec);
}

double bootstrap_se(const DimensionSample& sample, int n_boot,
                    const EstimatorRoute& route, std::uint64_t rng_seed) {
  if (n_boot < 50) {
    throw Error(ErrorCode::TooFewBoot, "bootstrap needs n_boot >= 50");
  }
  sample.validate();
  const std::size_t n = sample.values.size();
  Rng rng(rng_seed);

  std::vector<double> resample(n);
  std::vector<double> replicates;
  replicates.reserve(static_cast<std::size_t>(n_boot));
  for (int b = 0; b < n_boot; ++b) {
    bool done = false;
    for (int attempt = 0; attempt < 10 && !done; ++attempt) {
      for (std::size_t i = 0; i < n; ++i) {
        resample[i] = sample.values[rng.uniform_index(n)];
      }
      try {
        replicates.push_back(cpk_along_route(resample, sample.spec, route));
        done = true;
      } catch (const Error&) {
        // no spread in this resample; redraw
      }
    }
    if (!done) {
      throw Error(ErrorCode::DegenerateBootstrap,
                  "resample retries exhausted for '" + sample.dim_id + "'");
    }
  }

  const Moments m = compute_moments(replicates);
  return m.sd;
}

BaselineRisk baseline_risk(double cpk_hat, double se, double c0, double epsilon_clip) {
  if (!(se > 0.0)) {
    throw Error(ErrorCode::NonpositiveSE, "standard error must be positive");
  }
  BaselineRisk r;
  r.se = se;
  r.c0 = c0;
  r.epsilon_clip = epsilon_clip;
  r.pi_stat = clip(norm_cdf((c0 - cpk_hat) / se), r.epsilon_clip, 1.0 - r.epsilon_clip);
  r.z_stat = logit(r.pi_stat);
  return r;
}

}  // namespace uccap
