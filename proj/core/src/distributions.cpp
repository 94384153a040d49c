#include "uccap/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "uccap/errors.hpp"
#include "uccap/math.hpp"

namespace uccap {

const char* dist_family_name(DistFamily f) {
  switch (f) {
    case DistFamily::normal: return "normal";
    case DistFamily::lognormal: return "lognormal";
    case DistFamily::weibull: return "weibull";
    case DistFamily::logistic: return "logistic";
  }
  return "normal";
}

DistFamily dist_family_from_name(const std::string& name) {
  if (name == "normal") return DistFamily::normal;
  if (name == "lognormal" || name == "lognorm") return DistFamily::lognormal;
  if (name == "weibull") return DistFamily::weibull;
  if (name == "logistic") return DistFamily::logistic;
  throw Error(ErrorCode::ParseError, "unknown distribution family '" + name + "'");
}

namespace {

constexpr double kTwoPi = 6.283185307179586476925;

std::optional<DistFit> fit_normal(std::span<const double> x) {
  const double n = static_cast<double>(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  const double sigma = std::sqrt(ss / n);
  if (!(sigma > 0.0)) return std::nullopt;
  DistFit fit{DistFamily::normal, mean, sigma, 0.0};
  fit.log_likelihood = -0.5 * n * std::log(kTwoPi) - n * std::log(sigma) - 0.5 * n;
  return fit;
}

std::optional<DistFit> fit_lognormal(std::span<const double> x) {
  double sum_log = 0.0;
  std::vector<double> logs(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0)) return std::nullopt;
    logs[i] = std::log(x[i]);
    sum_log += logs[i];
  }
  auto base = fit_normal(logs);
  if (!base) return std::nullopt;
  DistFit fit{DistFamily::lognormal, base->a, base->b, 0.0};
  // Jacobian of the log transform.
  fit.log_likelihood = base->log_likelihood - sum_log;
  return fit;
}

// Profile likelihood equation for the Weibull shape; scale-invariant form
// evaluated on y = x / max(x) to avoid overflow of y^k.
class WeibullProfile {
 public:
  explicit WeibullProfile(std::span<const double> x) : y_(x.begin(), x.end()) {
    const double c = *std::max_element(y_.begin(), y_.end());
    scale_back_ = c;
    logs_.resize(y_.size());
    double mean_log = 0.0;
    for (std::size_t i = 0; i < y_.size(); ++i) {
      y_[i] /= c;
      logs_[i] = std::log(y_[i]);
      mean_log += logs_[i];
    }
    mean_log_ = mean_log / static_cast<double>(y_.size());
  }

  // g(k) and g'(k); g is strictly increasing in k.
  std::pair<double, double> eval(double k) const {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < y_.size(); ++i) {
      const double w = std::pow(y_[i], k);
      s0 += w;
      s1 += w * logs_[i];
      s2 += w * logs_[i] * logs_[i];
    }
    const double r = s1 / s0;
    const double g = r - 1.0 / k - mean_log_;
    const double gp = (s2 / s0 - r * r) + 1.0 / (k * k);
    return {g, gp};
  }

  double scale_for_shape(double k) const {
    double s0 = 0.0;
    for (double y : y_) s0 += std::pow(y, k);
    return scale_back_ * std::pow(s0 / static_cast<double>(y_.size()), 1.0 / k);
  }

 private:
  std::vector<double> y_;
  std::vector<double> logs_;
  double mean_log_ = 0.0;
  double scale_back_ = 1.0;
};

std::optional<DistFit> fit_weibull(std::span<const double> x) {
  for (double v : x) {
    if (!(v > 0.0)) return std::nullopt;
  }
  std::vector<double> logs(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) logs[i] = std::log(x[i]);
  const Moments lm = compute_moments(logs);
  if (!(lm.sd > 1e-12)) return std::nullopt;

  WeibullProfile profile(x);
  // Gumbel relation: sd(log X) = pi / (k sqrt(6)).
  double k = 1.28254983016186409 / lm.sd;
  double lo = 1e-3, hi = 1e4;
  bool converged = false;
  for (int iter = 0; iter < 200; ++iter) {
    auto [g, gp] = profile.eval(k);
    if (std::abs(g) < 1e-12) {
      converged = true;
      break;
    }
    if (g > 0.0) hi = std::min(hi, k); else lo = std::max(lo, k);
    double next = k - g / gp;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - k) < 1e-13 * k) {
      k = next;
      converged = true;
      break;
    }
    k = next;
  }
  if (!converged || !(k > 0.0) || !std::isfinite(k)) return std::nullopt;

  const double lambda = profile.scale_for_shape(k);
  DistFit fit{DistFamily::weibull, k, lambda, 0.0};
  double ll = 0.0;
  for (double v : x) ll += dist_log_pdf(fit, v);
  fit.log_likelihood = ll;
  return fit;
}

std::optional<DistFit> fit_logistic(std::span<const double> x) {
  const Moments m = compute_moments(x);
  if (!(m.sd > 0.0)) return std::nullopt;
  double loc = m.mean;
  double s = m.sd * 0.55132889542179204776;  // sqrt(3)/pi

  // Cyclic Newton on the two score equations; each one is monotone in
  // its own parameter, so plain damped steps converge quickly.
  for (int cycle = 0; cycle < 100; ++cycle) {
    double score_m = 0.0, hess_m = 0.0;
    for (double v : x) {
      const double z = (v - loc) / s;
      const double p = sigmoid(z);
      score_m += 2.0 * p - 1.0;
      hess_m += 2.0 * p * (1.0 - p);
    }
    const double dm = (hess_m > 0.0) ? s * score_m / hess_m : 0.0;
    loc += dm;

    double score_s = 0.0;
    double slope = 0.0;
    for (double v : x) {
      const double z = (v - loc) / s;
      const double p = sigmoid(z);
      score_s += z * (2.0 * p - 1.0) - 1.0;
      slope += z * (2.0 * p - 1.0) + 2.0 * z * z * p * (1.0 - p);
    }
    // d(score_s)/d(log s) = -slope; damped log-scale step keeps s > 0.
    double step = (slope > 0.0) ? score_s / slope : 0.0;
    step = std::clamp(step, -0.5, 0.5);
    s *= std::exp(step);

    if (std::abs(dm) < 1e-12 * (1.0 + std::abs(loc)) && std::abs(step) < 1e-12) break;
  }
  if (!std::isfinite(loc) || !(s > 0.0) || !std::isfinite(s)) return std::nullopt;

  DistFit fit{DistFamily::logistic, loc, s, 0.0};
  double ll = 0.0;
  for (double v : x) ll += dist_log_pdf(fit, v);
  if (!std::isfinite(ll)) return std::nullopt;
  fit.log_likelihood = ll;
  return fit;
}

}  // namespace

std::optional<DistFit> fit_family(std::span<const double> values, DistFamily family) {
  if (values.size() < 2) return std::nullopt;
  switch (family) {
    case DistFamily::normal: return fit_normal(values);
    case DistFamily::lognormal: return fit_lognormal(values);
    case DistFamily::weibull: return fit_weibull(values);
    case DistFamily::logistic: return fit_logistic(values);
  }
  return std::nullopt;
}

double dist_quantile(const DistFit& fit, double p) {
  switch (fit.family) {
    case DistFamily::normal:
      return fit.a + fit.b * norm_quantile(p);
    case DistFamily::lognormal:
      return std::exp(fit.a + fit.b * norm_quantile(p));
    case DistFamily::weibull:
      return fit.b * std::pow(-std::log1p(-p), 1.0 / fit.a);
    case DistFamily::logistic:
      return fit.a + fit.b * (std::log(p) - std::log1p(-p));
  }
  return 0.0;
}

double dist_log_pdf(const DistFit& fit, double x) {
  static const double log_sqrt_2pi = 0.91893853320467274178;
  switch (fit.family) {
    case DistFamily::normal: {
      const double z = (x - fit.a) / fit.b;
      return -log_sqrt_2pi - std::log(fit.b) - 0.5 * z * z;
    }
    case DistFamily::lognormal: {
      if (!(x > 0.0)) return -std::numeric_limits<double>::infinity();
      const double lx = std::log(x);
      const double z = (lx - fit.a) / fit.b;
      return -log_sqrt_2pi - std::log(fit.b) - 0.5 * z * z - lx;
    }
    case DistFamily::weibull: {
      if (!(x > 0.0)) return -std::numeric_limits<double>::infinity();
      const double k = fit.a, lambda = fit.b;
      const double r = x / lambda;
      return std::log(k / lambda) + (k - 1.0) * std::log(r) - std::pow(r, k);
    }
    case DistFamily::logistic: {
      const double z = (x - fit.a) / fit.b;
      // log f = -z - log s - 2 log(1 + e^{-z}), stable for both signs
      const double az = std::abs(z);
      return -az - std::log(fit.b) - 2.0 * std::log1p(std::exp(-az));
    }
  }
  return -std::numeric_limits<double>::infinity();
}

double dist_sample(const DistFit& fit, Rng& rng) {
  switch (fit.family) {
    case DistFamily::normal: return rng.normal(fit.a, fit.b);
    case DistFamily::lognormal: return rng.lognormal(fit.a, fit.b);
    case DistFamily::weibull: return rng.weibull(fit.a, fit.b);
    case DistFamily::logistic: return rng.logistic(fit.a, fit.b);
  }
  return 0.0;
}

}  // namespace uccap
