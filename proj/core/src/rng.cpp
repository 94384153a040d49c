#include "uccap/rng.hpp"

#include <cmath>

#include "uccap/math.hpp"

namespace uccap {

double Rng::normal(double mu, double sigma) {
  return mu + sigma * norm_quantile(uniform01());
}

double Rng::lognormal(double mu_log, double sigma_log) {
  return std::exp(normal(mu_log, sigma_log));
}

double Rng::weibull(double shape, double scale) {
  const double u = uniform01();
  return scale * std::pow(-std::log1p(-u), 1.0 / shape);
}

double Rng::logistic(double location, double scale) {
  const double u = uniform01();
  return location + scale * (std::log(u) - std::log1p(-u));
}

}  // namespace uccap
