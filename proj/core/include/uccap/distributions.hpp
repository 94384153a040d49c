#pragma once

#include <optional>
#include <span>

#include "uccap/rng.hpp"
#include "uccap/types.hpp"

namespace uccap {

/// Fitted location/scale-style parameters of one candidate family.
///   normal:    a = mean,          b = sigma (MLE, n denominator)
///   lognormal: a = mean of logs,  b = sigma of logs (MLE)
///   weibull:   a = shape k,       b = scale lambda
///   logistic:  a = location,      b = scale s
struct DistFit {
  DistFamily family = DistFamily::normal;
  double a = 0.0;
  double b = 1.0;
  double log_likelihood = 0.0;
};

/// Maximum-likelihood fit of a single family. Returns nullopt when the
/// family is infeasible for the data (nonpositive values for lognormal or
/// weibull) or the iteration fails to converge.
std::optional<DistFit> fit_family(std::span<const double> values, DistFamily family);

double dist_quantile(const DistFit& fit, double p);
double dist_log_pdf(const DistFit& fit, double x);
double dist_sample(const DistFit& fit, Rng& rng);

}  // namespace uccap
