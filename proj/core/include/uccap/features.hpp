#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "uccap/types.hpp"

namespace uccap {

/// Fixed, versioned order of the residual-model inputs. The schema
/// deliberately carries no capability estimate, standard error, or any
/// transform of them: the baseline log-odds stays the only channel for
/// that signal.
enum FeatureSlot : std::size_t {
  kSkewness = 0,
  kExcessKurtosis,
  kNormalityStat,
  kSpecType,       // 0 bilateral, 1 unilateral
  kRelPosition,    // (mean - mid)/half_width, bilateral only
  kSpecWidthRatio, // (usl - lsl)/(6 sd), bilateral only
  kTailMarginLo,   // (mean - lsl)/sd, 0 when lsl absent
  kLslPresent,
  kTailMarginHi,   // (usl - mean)/sd, 0 when usl absent
  kUslPresent,
  kCv,             // sd/|mean|, 0 when mean == 0
  kLogN,
  kPathPercentile,
  kFeatureCount
};

inline constexpr std::size_t kFeatureDim = kFeatureCount;
inline constexpr const char* kFeatureSchemaVersion = "uccap.features.v1";

using FeatureVector = std::array<double, kFeatureDim>;

const char* feature_slot_name(std::size_t slot);

FeatureVector extract_features(const DimensionSample& sample, const CapabilityEstimate& est);

/// Signed relative position of the mean inside a bilateral tolerance;
/// 0 for unilateral specs. Also used by the decision chain.
double relative_position(const DimensionSample& sample, const CapabilityEstimate& est);

struct Standardizer {
  std::vector<double> mean;
  std::vector<double> sd;  // entries below 1e-12 replaced by 1
};

Standardizer fit_standardizer(const std::vector<FeatureVector>& train);
FeatureVector apply_standardizer(const Standardizer& s, const FeatureVector& x);

}  // namespace uccap
