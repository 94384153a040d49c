#include "uccap/capability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "uccap/errors.hpp"
#include "uccap/math.hpp"

namespace uccap {

void SpecLimits::validate() const {
  if (!lsl && !usl) {
    throw Error(ErrorCode::MissingSpec, "at least one of lsl/usl is required");
  }
  if (lsl && usl && !(*lsl < *usl)) {
    throw Error(ErrorCode::InconsistentSpec, "lsl must be strictly below usl");
  }
}

void DimensionSample::validate() const {
  if (values.size() < 2) {
    throw Error(ErrorCode::TooFewSamples,
                "dimension '" + dim_id + "' needs at least 2 measurements");
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::ParseError,
                  "dimension '" + dim_id + "' contains a non-finite value");
    }
  }
  const Moments m = compute_moments(values);
  if (!(m.sd > 0.0)) {
    throw Error(ErrorCode::DegenerateSample,
                "dimension '" + dim_id + "' has zero spread");
  }
  spec.validate();
}

double cpk_normal_value(double mean, double sd, const SpecLimits& spec) {
  spec.validate();
  if (!(sd > 0.0)) {
    throw Error(ErrorCode::DegenerateSample, "standard deviation must be positive");
  }
  double cpk = std::numeric_limits<double>::infinity();
  if (spec.usl) cpk = std::min(cpk, (*spec.usl - mean) / (3.0 * sd));
  if (spec.lsl) cpk = std::min(cpk, (mean - *spec.lsl) / (3.0 * sd));
  return cpk;
}

double cpk_from_quantiles(double q_lo, double q50, double q_hi, const SpecLimits& spec) {
  spec.validate();
  double cpk = std::numeric_limits<double>::infinity();
  if (spec.usl) {
    const double denom = q_hi - q50;
    if (!(denom > 0.0)) {
      throw Error(ErrorCode::QuantileCollapse, "upper reference quantile equals the median");
    }
    cpk = std::min(cpk, (*spec.usl - q50) / denom);
  }
  if (spec.lsl) {
    const double denom = q50 - q_lo;
    if (!(denom > 0.0)) {
      throw Error(ErrorCode::QuantileCollapse, "lower reference quantile equals the median");
    }
    cpk = std::min(cpk, (q50 - *spec.lsl) / denom);
  }
  return cpk;
}

namespace {

/// Fills the shared diagnostic fields (moments, normality, best fit).
/// The normality test needs n >= 8; smaller samples default to the
/// normal path with a zero statistic.
void fill_diagnostics(const DimensionSample& sample, CapabilityEstimate& est) {
  const Moments m = compute_moments(sample.values);
  est.mean = m.mean;
  est.sd = m.sd;
  est.skewness = m.skewness;
  est.excess_kurtosis = m.excess_kurtosis;
  if (sample.values.size() >= 8) {
    const NormalityResult nr = normality_test(sample.values);
    est.normality_stat = nr.statistic;
    est.normality_pass = nr.pass;
    est.best_fit = fit_distribution(sample.values).family;
  } else {
    est.normality_stat = 0.0;
    est.normality_pass = true;
    est.best_fit = DistFamily::normal;
  }
}

}  // namespace

CapabilityEstimate estimate_cpk_normal(const DimensionSample& sample) {
  sample.validate();
  CapabilityEstimate est;
  fill_diagnostics(sample, est);
  est.method = CpkMethod::normal;
  est.cpk_hat = cpk_normal_value(est.mean, est.sd, sample.spec);
  return est;
}

CapabilityEstimate estimate_cpk_percentile(const DimensionSample& sample, DistFamily family) {
  sample.validate();
  auto fit = fit_family(sample.values, family);
  if (!fit) {
    throw Error(ErrorCode::NoFeasibleFamily,
                std::string("cannot fit family '") + dist_family_name(family) + "'");
  }
  CapabilityEstimate est;
  fill_diagnostics(sample, est);
  est.method = CpkMethod::percentile;
  est.best_fit = family;
  est.cpk_hat = cpk_from_quantiles(dist_quantile(*fit, percentile_p_low()),
                                   dist_quantile(*fit, 0.5),
                                   dist_quantile(*fit, percentile_p_high()), sample.spec);
  return est;
}

CapabilityEstimate estimate_cpk_percentile_empirical(const DimensionSample& sample) {
  sample.validate();
  std::vector<double> sorted(sample.values);
  std::sort(sorted.begin(), sorted.end());
  CapabilityEstimate est;
  fill_diagnostics(sample, est);
  est.method = CpkMethod::percentile;
  est.cpk_hat = cpk_from_quantiles(empirical_quantile(sorted, percentile_p_low()),
                                   empirical_quantile(sorted, 0.5),
                                   empirical_quantile(sorted, percentile_p_high()), sample.spec);
  return est;
}

NormalityResult normality_test(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 8) {
    throw Error(ErrorCode::TooFewSamples, "normality test needs n >= 8");
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const Moments m = compute_moments(sorted);
  if (!(m.sd > 0.0)) {
    throw Error(ErrorCode::DegenerateSample, "normality test on constant data");
  }

  // A^2 = -n - (1/n) sum (2i-1)[ln F(z_(i)) + ln(1 - F(z_(n+1-i)))],
  // tails evaluated through erfc and floored so extreme standardized
  // values give a large finite statistic instead of -inf logs.
  const double nd = static_cast<double>(n);
  double acc = 0.0;
  constexpr double floor_p = 1e-300;
  for (std::size_t i = 0; i < n; ++i) {
    const double zi = (sorted[i] - m.mean) / m.sd;
    const double zr = (sorted[n - 1 - i] - m.mean) / m.sd;
    const double lo = std::max(norm_cdf(zi), floor_p);
    const double hi = std::max(norm_cdf(-zr), floor_p);  // 1 - F(z_(n+1-i))
    acc += (2.0 * static_cast<double>(i) + 1.0) * (std::log(lo) + std::log(hi));
  }
  const double a2 = -nd - acc / nd;
  // Stephens' adjustment for estimated mean and variance; 5% critical
  // value 0.752 for the adjusted statistic.
  const double adjusted = a2 * (1.0 + 0.75 / nd + 2.25 / (nd * nd));
  return NormalityResult{adjusted, adjusted < 0.752};
}

DistFit fit_distribution(std::span<const double> values) {
  if (values.size() < 8) {
    throw Error(ErrorCode::TooFewSamples, "distribution fitting needs n >= 8");
  }
  // Preference order breaks likelihood ties toward simpler/symmetric
  // families: normal > logistic > lognormal > weibull.
  const DistFamily order[] = {DistFamily::normal, DistFamily::logistic,
                              DistFamily::lognormal, DistFamily::weibull};
  std::optional<DistFit> best;
  for (DistFamily family : order) {
    auto fit = fit_family(values, family);
    if (!fit) continue;
    if (!best || fit->log_likelihood > best->log_likelihood) best = fit;
  }
  if (!best) {
    throw Error(ErrorCode::NoFeasibleFamily, "no candidate family could be fitted");
  }
  return *best;
}

const char* estimator_policy_name(EstimatorPolicy p) {
  switch (p) {
    case EstimatorPolicy::auto_select: return "auto";
    case EstimatorPolicy::normal_only: return "normal_only";
    case EstimatorPolicy::percentile_only: return "percentile_only";
  }
  return "auto";
}

EstimatorPolicy estimator_policy_from_name(const std::string& name) {
  if (name == "auto") return EstimatorPolicy::auto_select;
  if (name == "normal_only") return EstimatorPolicy::normal_only;
  if (name == "percentile_only") return EstimatorPolicy::percentile_only;
  throw Error(ErrorCode::InvalidConfig, "unknown estimator policy '" + name + "'");
}

CapabilityEstimate analyze_sample(const DimensionSample& sample, EstimatorPolicy policy) {
  sample.validate();
  if (policy == EstimatorPolicy::normal_only || sample.values.size() < 8) {
    return estimate_cpk_normal(sample);
  }
  if (policy == EstimatorPolicy::percentile_only) {
    const DistFit fit = fit_distribution(sample.values);
    return estimate_cpk_percentile(sample, fit.family);
  }
  CapabilityEstimate est = estimate_cpk_normal(sample);
  if (!est.normality_pass) {
    return estimate_cpk_percentile(sample, est.best_fit);
  }
  return est;
}

}  // namespace uccap
