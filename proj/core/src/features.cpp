#include "uccap/features.hpp"

#include <cmath>

#include "uccap/errors.hpp"

namespace uccap {

const char* feature_slot_name(std::size_t slot) {
  switch (slot) {
    case kSkewness: return "skewness";
    case kExcessKurtosis: return "excess_kurtosis";
    case kNormalityStat: return "normality_stat";
    case kSpecType: return "spec_type";
    case kRelPosition: return "rel_position";
    case kSpecWidthRatio: return "spec_width_ratio";
    case kTailMarginLo: return "tail_margin_lo";
    case kLslPresent: return "lsl_present";
    case kTailMarginHi: return "tail_margin_hi";
    case kUslPresent: return "usl_present";
    case kCv: return "cv";
    case kLogN: return "n_log";
    case kPathPercentile: return "path_percentile";
    default: return "?";
  }
}

double relative_position(const DimensionSample& sample, const CapabilityEstimate& est) {
  if (!sample.spec.bilateral()) return 0.0;
  const double mid = 0.5 * (*sample.spec.lsl + *sample.spec.usl);
  const double half_width = 0.5 * (*sample.spec.usl - *sample.spec.lsl);
  return (est.mean - mid) / half_width;
}

FeatureVector extract_features(const DimensionSample& sample, const CapabilityEstimate& est) {
  const SpecLimits& spec = sample.spec;
  FeatureVector x{};
  x[kSkewness] = est.skewness;
  x[kExcessKurtosis] = est.excess_kurtosis;
  x[kNormalityStat] = est.normality_stat;
  x[kSpecType] = spec.bilateral() ? 0.0 : 1.0;
  x[kRelPosition] = relative_position(sample, est);
  x[kSpecWidthRatio] = spec.bilateral() ? (*spec.usl - *spec.lsl) / (6.0 * est.sd) : 0.0;
  x[kTailMarginLo] = spec.lsl ? (est.mean - *spec.lsl) / est.sd : 0.0;
  x[kLslPresent] = spec.lsl ? 1.0 : 0.0;
  x[kTailMarginHi] = spec.usl ? (*spec.usl - est.mean) / est.sd : 0.0;
  x[kUslPresent] = spec.usl ? 1.0 : 0.0;
  x[kCv] = est.mean != 0.0 ? est.sd / std::abs(est.mean) : 0.0;
  x[kLogN] = std::log(static_cast<double>(sample.values.size()));
  x[kPathPercentile] = est.method == CpkMethod::percentile ? 1.0 : 0.0;
  return x;
}

Standardizer fit_standardizer(const std::vector<FeatureVector>& train) {
  if (train.empty()) {
    throw Error(ErrorCode::EmptyTrainingSet, "standardizer needs at least one row");
  }
  const double n = static_cast<double>(train.size());
  Standardizer s;
  s.mean.assign(kFeatureDim, 0.0);
  s.sd.assign(kFeatureDim, 0.0);
  for (const auto& x : train) {
    for (std::size_t j = 0; j < kFeatureDim; ++j) s.mean[j] += x[j];
  }
  for (std::size_t j = 0; j < kFeatureDim; ++j) s.mean[j] /= n;
  for (const auto& x : train) {
    for (std::size_t j = 0; j < kFeatureDim; ++j) {
      const double d = x[j] - s.mean[j];
      s.sd[j] += d * d;
    }
  }
  for (std::size_t j = 0; j < kFeatureDim; ++j) {
    // population sd; constant columns standardize to exactly 0
    s.sd[j] = std::sqrt(s.sd[j] / n);
    if (s.sd[j] < 1e-12) s.sd[j] = 1.0;
  }
  return s;
}

FeatureVector apply_standardizer(const Standardizer& s, const FeatureVector& x) {
  if (s.mean.size() != kFeatureDim || s.sd.size() != kFeatureDim) {
    throw Error(ErrorCode::SchemaMismatch, "standardizer dimension mismatch");
  }
  FeatureVector out{};
  for (std::size_t j = 0; j < kFeatureDim; ++j) {
    out[j] = (x[j] - s.mean[j]) / s.sd[j];
  }
  return out;
}

}  // namespace uccap
