#pragma once

#include <optional>
#include <span>
#include <vector>

namespace uccap {

double brier(std::span<const double> pred, std::span<const double> target);
double logloss(std::span<const double> pred, std::span<const double> target);

struct ReliabilityBin {
  double bin_lo = 0.0;
  double bin_hi = 0.0;
  double mean_pred = 0.0;
  double mean_target = 0.0;
  std::size_t count = 0;
};

/// Expected calibration error over equal-width bins; empty bins are
/// skipped. Targets may be soft.
double ece(std::span<const double> pred, std::span<const double> target, int n_bins = 10);

std::vector<ReliabilityBin> reliability_bins(std::span<const double> pred,
                                             std::span<const double> target,
                                             int n_bins = 10);

struct DecisionRates {
  double accuracy = 0.0;
  double false_accept = 0.0;  // accepted failures / all items
  double false_reject = 0.0;  // rejected passes / all items
  double precision = 0.0;     // failure class; "reject" is the positive call
  double recall = 0.0;
  double f1 = 0.0;
};

/// Accept iff pred <= alpha_decision; y_hard in {0,1} with 1 = failure.
DecisionRates decision_rates(std::span<const double> pred, std::span<const double> y_hard,
                             double alpha_decision);

/// Rank statistic with midrank tie handling; nullopt when only one class
/// is present.
std::optional<double> roc_auc(std::span<const double> pred, std::span<const double> y_hard);

/// Average precision by step interpolation over descending thresholds.
std::optional<double> pr_auc(std::span<const double> pred, std::span<const double> y_hard);

double pearson(std::span<const double> a, std::span<const double> b);

struct PrPoint {
  double threshold = 0.0;
  double precision = 1.0;
  double recall = 0.0;
};
std::vector<PrPoint> pr_curve(std::span<const double> pred, std::span<const double> y_hard);

enum class NearMode { by_estimate, by_true };

/// Indices with |cpk - c0| <= epsilon, using the estimated or the true
/// capability per `mode` (boundary inclusive).
std::vector<std::size_t> near_filter(std::span<const double> cpk_values, double c0,
                                     double epsilon);

/// Affine recalibration in logit space fitted by soft cross-entropy;
/// an evaluation comparator, not a model component.
struct PlattMap {
  double a = 1.0;
  double b = 0.0;
};
PlattMap platt_recalibrate(std::span<const double> pred_train,
                           std::span<const double> target_train);
double platt_apply(const PlattMap& map, double pred);

struct CalibrationReport {
  std::size_t n = 0;
  double brier = 0.0;
  double logloss = 0.0;
  double ece = 0.0;
  double correlation = 0.0;
  std::optional<double> roc_auc;
  std::optional<double> pr_auc;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double false_accept = 0.0;
  double false_reject = 0.0;
  std::size_t near_n = 0;
  double near_brier = 0.0;
  double near_logloss = 0.0;
  double near_ece = 0.0;
  double near_recall = 0.0;
  double near_accuracy = 0.0;
  std::vector<ReliabilityBin> bins;
};

/// Bundles the probability-quality and decision-quality metrics, overall
/// and on the near-threshold subset given by `near_index`.
CalibrationReport calibration_report(std::span<const double> pred,
                                     std::span<const double> target_soft,
                                     std::span<const double> y_hard,
                                     std::span<const std::size_t> near_index,
                                     double alpha_decision, int n_bins = 10);

}  // namespace uccap
