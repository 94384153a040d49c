#pragma once

#include <optional>
#include <string>
#include <vector>

namespace uccap {

struct SpecLimits {
  std::optional<double> lsl;
  std::optional<double> usl;
  std::optional<double> nominal;

  bool bilateral() const { return lsl.has_value() && usl.has_value(); }

  /// At least one limit present; lsl < usl when both are.
  void validate() const;
};

/// Raw measurements plus specification limits for one dimension;
/// the unit of analysis throughout the toolkit.
struct DimensionSample {
  std::string dim_id;
  std::vector<double> values;  // >= 2 finite entries, nonzero spread
  SpecLimits spec;

  void validate() const;
};

enum class CpkMethod { normal, percentile };

enum class DistFamily { normal, lognormal, weibull, logistic };

const char* dist_family_name(DistFamily f);
DistFamily dist_family_from_name(const std::string& name);

struct CapabilityEstimate {
  double cpk_hat = 0.0;
  CpkMethod method = CpkMethod::normal;
  double mean = 0.0;
  double sd = 0.0;  // n-1 denominator
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  double normality_stat = 0.0;  // adjusted Anderson-Darling statistic
  bool normality_pass = true;
  DistFamily best_fit = DistFamily::normal;
};

}  // namespace uccap
