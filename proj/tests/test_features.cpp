#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "uccap/capability.hpp"
#include "uccap/errors.hpp"
#include "uccap/features.hpp"
#include "uccap/math.hpp"
#include "uccap/rng.hpp"
#include "uccap/uncertainty.hpp"

using namespace uccap;

namespace {

DimensionSample sample_of(std::vector<double> values, std::optional<double> lsl,
                          std::optional<double> usl) {
  DimensionSample s;
  s.dim_id = "F0001";
  s.values = std::move(values);
  s.spec.lsl = lsl;
  s.spec.usl = usl;
  return s;
}

}  // namespace

TEST_CASE("symmetric centered sample has zero relative position and skewness") {
  std::vector<double> v;
  for (int i = 1; i <= 16; ++i) {
    v.push_back(10.0 + i * 0.01);
    v.push_back(10.0 - i * 0.01);
  }
  auto s = sample_of(v, 9.0, 11.0);
  const CapabilityEstimate est = estimate_cpk_normal(s);
  const FeatureVector x = extract_features(s, est);
  CHECK(x[kRelPosition] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(x[kSkewness] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(x[kSpecType] == 0.0);
  CHECK(x[kLslPresent] == 1.0);
  CHECK(x[kUslPresent] == 1.0);
}

TEST_CASE("unilateral spec uses sentinel plus presence flag") {
  Rng rng(3);
  std::vector<double> v(40);
  for (auto& d : v) d = rng.normal(4.0, 0.2);
  auto s = sample_of(v, std::nullopt, 5.0);
  const CapabilityEstimate est = estimate_cpk_normal(s);
  const FeatureVector x = extract_features(s, est);
  CHECK(x[kSpecType] == 1.0);
  CHECK(x[kTailMarginLo] == 0.0);
  CHECK(x[kLslPresent] == 0.0);
  CHECK(x[kUslPresent] == 1.0);
  CHECK(x[kRelPosition] == 0.0);
  CHECK(x[kSpecWidthRatio] == 0.0);
  CHECK(x[kTailMarginHi] == doctest::Approx((5.0 - est.mean) / est.sd));
}

TEST_CASE("skewness slot matches the moment oracle on lognormal data") {
  Rng rng(17);
  std::vector<double> v(500);
  for (auto& d : v) d = rng.lognormal(0.0, 0.6);
  auto s = sample_of(v, std::nullopt, 20.0);
  const CapabilityEstimate est = analyze_sample(s);
  const FeatureVector x = extract_features(s, est);
  const Moments m = compute_moments(v);
  CHECK(x[kSkewness] == doctest::Approx(m.skewness).epsilon(1e-9));
  CHECK(x[kLogN] == doctest::Approx(std::log(500.0)).epsilon(1e-12));
}

TEST_CASE("feature extraction ignores the order of measurements") {
  Rng rng(5);
  std::vector<double> v(64);
  for (auto& d : v) d = rng.normal(1.0, 0.1);
  auto s1 = sample_of(v, 0.5, 1.5);
  std::reverse(v.begin(), v.end());
  std::swap(v[3], v[40]);
  auto s2 = sample_of(v, 0.5, 1.5);
  const FeatureVector a = extract_features(s1, analyze_sample(s1));
  const FeatureVector b = extract_features(s2, analyze_sample(s2));
  for (std::size_t j = 0; j < kFeatureDim; ++j) {
    CHECK(a[j] == doctest::Approx(b[j]).epsilon(1e-12));
  }
}

TEST_CASE("schema carries no baseline transform: changing c0 moves z but not x") {
  Rng rng(6);
  std::vector<double> v(50);
  for (auto& d : v) d = rng.normal(2.0, 0.05);
  auto s = sample_of(v, 1.8, 2.2);
  const CapabilityEstimate est = analyze_sample(s);
  const double se = bootstrap_se(s, 100, EstimatorRoute::from_estimate(est), 10);
  const FeatureVector x = extract_features(s, est);
  const double z1 = baseline_risk(est.cpk_hat, se, 1.33).z_stat;
  const double z2 = baseline_risk(est.cpk_hat, se, 1.67).z_stat;
  CHECK(z1 != z2);
  const FeatureVector x2 = extract_features(s, est);
  for (std::size_t j = 0; j < kFeatureDim; ++j) CHECK(x[j] == x2[j]);
}

TEST_CASE("standardizer normalizes train columns to mean 0 and variance 1") {
  Rng rng(8);
  std::vector<FeatureVector> rows;
  for (int i = 0; i < 200; ++i) {
    FeatureVector x{};
    for (std::size_t j = 0; j < kFeatureDim; ++j) x[j] = rng.normal(j * 1.0, 1.0 + j);
    rows.push_back(x);
  }
  const Standardizer s = fit_standardizer(rows);
  std::vector<double> mean(kFeatureDim, 0.0), var(kFeatureDim, 0.0);
  for (const auto& r : rows) {
    const FeatureVector z = apply_standardizer(s, r);
    for (std::size_t j = 0; j < kFeatureDim; ++j) mean[j] += z[j];
  }
  for (auto& m : mean) m /= rows.size();
  for (const auto& r : rows) {
    const FeatureVector z = apply_standardizer(s, r);
    for (std::size_t j = 0; j < kFeatureDim; ++j) {
      var[j] += (z[j] - mean[j]) * (z[j] - mean[j]);
    }
  }
  for (std::size_t j = 0; j < kFeatureDim; ++j) {
    CHECK(mean[j] == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(var[j] / rows.size() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("constant columns standardize to zero") {
  std::vector<FeatureVector> rows(10);
  for (auto& r : rows) r.fill(3.25);
  const Standardizer s = fit_standardizer(rows);
  const FeatureVector z = apply_standardizer(s, rows[0]);
  for (double v : z) CHECK(v == 0.0);
}

TEST_CASE("held-out rows standardize with the training statistics") {
  std::vector<FeatureVector> rows(2);
  rows[0].fill(1.0);
  rows[1].fill(3.0);
  const Standardizer s = fit_standardizer(rows);  // mean 2, population sd 1
  FeatureVector held{};
  held.fill(5.0);
  const FeatureVector z = apply_standardizer(s, held);
  for (double v : z) CHECK(v == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("empty training set is rejected") {
  try {
    fit_standardizer({});
    FAIL("expected EmptyTrainingSet");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyTrainingSet);
  }
}
