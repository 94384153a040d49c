#pragma once

#include <span>

#include "uccap/distributions.hpp"
#include "uccap/types.hpp"

namespace uccap {

/// min((USL - mu)/(3 sd), (mu - LSL)/(3 sd)); unilateral specs use the
/// available side only.
double cpk_normal_value(double mean, double sd, const SpecLimits& spec);

/// Quantile-based capability: min((USL - q50)/(q_hi - q50),
/// (q50 - LSL)/(q50 - q_lo)) with reference quantiles at the
/// percentile_p_low/high points.
double cpk_from_quantiles(double q_lo, double q50, double q_hi, const SpecLimits& spec);

CapabilityEstimate estimate_cpk_normal(const DimensionSample& sample);

/// Best-fit mode: quantiles come from an MLE fit of `family`.
CapabilityEstimate estimate_cpk_percentile(const DimensionSample& sample, DistFamily family);

/// Empirical mode: linearly interpolated order-statistic quantiles.
CapabilityEstimate estimate_cpk_percentile_empirical(const DimensionSample& sample);

/// Anderson-Darling normality statistic with the Stephens small-sample
/// adjustment; pass when the adjusted statistic is below the 5% critical
/// value. Requires n >= 8.
struct NormalityResult {
  double statistic = 0.0;  // adjusted A^2
  bool pass = true;
};
NormalityResult normality_test(std::span<const double> values);

/// Highest-likelihood family among {normal, logistic, lognormal, weibull};
/// positive-support families are skipped when the data contain
/// nonpositive values. Requires n >= 8.
DistFit fit_distribution(std::span<const double> values);

enum class EstimatorPolicy { auto_select, normal_only, percentile_only };

const char* estimator_policy_name(EstimatorPolicy p);
EstimatorPolicy estimator_policy_from_name(const std::string& name);

/// The production estimation path: normality diagnostics plus method
/// selection. auto_select falls back to best-fit percentile estimation
/// when the normality test fails.
CapabilityEstimate analyze_sample(const DimensionSample& sample,
                                  EstimatorPolicy policy = EstimatorPolicy::auto_select);

}  // namespace uccap
