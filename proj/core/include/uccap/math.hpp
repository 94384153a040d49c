#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace uccap {

/// Standard normal CDF via the complementary error function.
/// Absolute accuracy is that of std::erfc, well below 1e-12.
double norm_cdf(double x);

/// Standard normal density.
double norm_pdf(double x);

/// Inverse standard normal CDF (Wichura's PPND16 rational approximations).
/// Relative accuracy about 1e-15 over p in (0, 1).
double norm_quantile(double p);

/// Numerically stable logistic function 1 / (1 + exp(-t)).
double sigmoid(double t);

/// log(p / (1 - p)); p must lie strictly inside (0, 1).
double logit(double p);

double clip(double x, double lo, double hi);

struct Moments {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;        // n-1 denominator
  double skewness = 0.0;  // adjusted Fisher-Pearson G1 (0 when n < 3)
  double excess_kurtosis = 0.0;  // bias-corrected G2 (0 when n < 4)
};

Moments compute_moments(std::span<const double> values);

/// Linear-interpolation quantile of order statistics (type-7 convention).
/// `sorted` must be ascending and nonempty; p in [0, 1].
double empirical_quantile(std::span<const double> sorted, double p);

/// Percentile points used by the capability quantile convention.
/// Chosen so that for a normal distribution the reference quantiles land
/// exactly at mu -/+ 3 sigma (the nominal 0.135% / 99.865% points).
double percentile_p_low();   // norm_cdf(-3)
double percentile_p_high();  // norm_cdf(+3)

}  // namespace uccap
