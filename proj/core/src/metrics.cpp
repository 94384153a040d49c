#include "uccap/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "uccap/errors.hpp"
#include "uccap/math.hpp"

namespace uccap {

namespace {

constexpr double kLogClip = 1e-12;

void check_pair(std::size_t a, std::size_t b) {
  if (a != b) {
    throw Error(ErrorCode::LengthMismatch, "metric input lengths differ");
  }
  if (a == 0) {
    throw Error(ErrorCode::EmptyInput, "metric on empty input");
  }
}

}  // namespace

double brier(std::span<const double> pred, std::span<const double> target) {
  check_pair(pred.size(), target.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - target[i];
    acc += d * d;
  }
  return acc / static_cast<double>(pred.size());
}

double logloss(std::span<const double> pred, std::span<const double> target) {
  check_pair(pred.size(), target.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double p = clip(pred[i], kLogClip, 1.0 - kLogClip);
    acc -= target[i] * std::log(p) + (1.0 - target[i]) * std::log(1.0 - p);
  }
  return acc / static_cast<double>(pred.size());
}

std::vector<ReliabilityBin> reliability_bins(std::span<const double> pred,
                                             std::span<const double> target, int n_bins) {
  check_pair(pred.size(), target.size());
  if (n_bins < 1) {
    throw Error(ErrorCode::InvalidConfig, "need at least one bin");
  }
  std::vector<ReliabilityBin> bins(static_cast<std::size_t>(n_bins));
  const double width = 1.0 / n_bins;
  for (int b = 0; b < n_bins; ++b) {
    bins[b].bin_lo = b * width;
    bins[b].bin_hi = (b + 1) * width;
  }
  for (std::size_t i = 0; i < pred.size(); ++i) {
    int b = static_cast<int>(pred[i] * n_bins);
    b = std::clamp(b, 0, n_bins - 1);  // pred == 1 joins the last bin
    bins[b].mean_pred += pred[i];
    bins[b].mean_target += target[i];
    bins[b].count += 1;
  }
  for (auto& bin : bins) {
    if (bin.count > 0) {
      bin.mean_pred /= static_cast<double>(bin.count);
      bin.mean_target /= static_cast<double>(bin.count);
    }
  }
  return bins;
}

double ece(std::span<const double> pred, std::span<const double> target, int n_bins) {
  const auto bins = reliability_bins(pred, target, n_bins);
  const double n = static_cast<double>(pred.size());
  double acc = 0.0;
  for (const auto& bin : bins) {
    if (bin.count == 0) continue;
    acc += (static_cast<double>(bin.count) / n) * std::abs(bin.mean_pred - bin.mean_target);
  }
  return acc;
}

DecisionRates decision_rates(std::span<const double> pred, std::span<const double> y_hard,
                             double alpha_decision) {
  check_pair(pred.size(), y_hard.size());
  double tp = 0.0, fp = 0.0, tn = 0.0, fn = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const bool accept = pred[i] <= alpha_decision;
    const bool fails = y_hard[i] >= 0.5;
    if (accept && fails) fn += 1.0;        // accepted a failure
    else if (accept && !fails) tn += 1.0;
    else if (!accept && fails) tp += 1.0;  // rejected a failure
    else fp += 1.0;
  }
  const double n = static_cast<double>(pred.size());
  DecisionRates r;
  r.accuracy = (tp + tn) / n;
  r.false_accept = fn / n;
  r.false_reject = fp / n;
  r.precision = (tp + fp) > 0.0 ? tp / (tp + fp) : 0.0;
  r.recall = (tp + fn) > 0.0 ? tp / (tp + fn) : 0.0;
  r.f1 = (r.precision + r.recall) > 0.0
             ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
             : 0.0;
  return r;
}

std::optional<double> roc_auc(std::span<const double> pred, std::span<const double> y_hard) {
  check_pair(pred.size(), y_hard.size());
  const std::size_t n = pred.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return pred[a] < pred[b]; });

  double rank_sum_pos = 0.0;
  double n_pos = 0.0, n_neg = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && pred[order[j]] == pred[order[i]]) ++j;
    const double midrank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
    for (std::size_t k = i; k < j; ++k) {
      if (y_hard[order[k]] >= 0.5) {
        rank_sum_pos += midrank;
        n_pos += 1.0;
      } else {
        n_neg += 1.0;
      }
    }
    i = j;
  }
  if (n_pos == 0.0 || n_neg == 0.0) return std::nullopt;
  return (rank_sum_pos - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg);
}

std::vector<PrPoint> pr_curve(std::span<const double> pred, std::span<const double> y_hard) {
  check_pair(pred.size(), y_hard.size());
  const std::size_t n = pred.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return pred[a] > pred[b]; });
  double total_pos = 0.0;
  for (double y : y_hard) {
    if (y >= 0.5) total_pos += 1.0;
  }
  std::vector<PrPoint> points;
  if (total_pos == 0.0) return points;

  double tp = 0.0, predicted_pos = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && pred[order[j]] == pred[order[i]]) ++j;
    for (std::size_t k = i; k < j; ++k) {
      predicted_pos += 1.0;
      if (y_hard[order[k]] >= 0.5) tp += 1.0;
    }
    points.push_back(PrPoint{pred[order[i]], tp / predicted_pos, tp / total_pos});
    i = j;
  }
  return points;
}

std::optional<double> pr_auc(std::span<const double> pred, std::span<const double> y_hard) {
  bool has_pos = false, has_neg = false;
  for (double y : y_hard) {
    (y >= 0.5 ? has_pos : has_neg) = true;
  }
  if (!has_pos || !has_neg) return std::nullopt;
  const auto points = pr_curve(pred, y_hard);
  double auc = 0.0;
  double prev_recall = 0.0;
  for (const auto& pt : points) {
    auc += (pt.recall - prev_recall) * pt.precision;
    prev_recall = pt.recall;
  }
  return auc;
}

double pearson(std::span<const double> a, std::span<const double> b) {
  check_pair(a.size(), b.size());
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma, db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa <= 0.0 || sbb <= 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

std::vector<std::size_t> near_filter(std::span<const double> cpk_values, double c0,
                                     double epsilon) {
  std::vector<std::size_t> index;
  for (std::size_t i = 0; i < cpk_values.size(); ++i) {
    if (std::abs(cpk_values[i] - c0) <= epsilon) index.push_back(i);
  }
  return index;
}

PlattMap platt_recalibrate(std::span<const double> pred_train,
                           std::span<const double> target_train) {
  check_pair(pred_train.size(), target_train.size());
  std::vector<double> logits(pred_train.size());
  for (std::size_t i = 0; i < pred_train.size(); ++i) {
    logits[i] = logit(clip(pred_train[i], kLogClip, 1.0 - kLogClip));
  }
  PlattMap map;
  const double n = static_cast<double>(logits.size());
  for (int epoch = 0; epoch < 50000; ++epoch) {
    double ga = 0.0, gb = 0.0, curvature = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
      const double err = sigmoid(map.a * logits[i] + map.b) - target_train[i];
      ga += err * logits[i];
      gb += err;
      curvature += 0.25 * (logits[i] * logits[i] + 1.0);
    }
    ga /= n;
    gb /= n;
    const double rate = std::min(0.5, 0.9 * n / std::max(curvature, 1e-12));
    if (std::sqrt(ga * ga + gb * gb) < 1e-12) break;
    map.a -= rate * ga;
    map.b -= rate * gb;
  }
  return map;
}

double platt_apply(const PlattMap& map, double pred) {
  const double l = logit(clip(pred, kLogClip, 1.0 - kLogClip));
  return sigmoid(map.a * l + map.b);
}

CalibrationReport calibration_report(std::span<const double> pred,
                                     std::span<const double> target_soft,
                                     std::span<const double> y_hard,
                                     std::span<const std::size_t> near_index,
                                     double alpha_decision, int n_bins) {
  check_pair(pred.size(), target_soft.size());
  check_pair(pred.size(), y_hard.size());
  CalibrationReport rep;
  rep.n = pred.size();
  rep.brier = brier(pred, target_soft);
  rep.logloss = logloss(pred, target_soft);
  rep.ece = ece(pred, target_soft, n_bins);
  rep.correlation = pearson(pred, target_soft);
  rep.roc_auc = roc_auc(pred, y_hard);
  rep.pr_auc = pr_auc(pred, y_hard);
  const DecisionRates rates = decision_rates(pred, y_hard, alpha_decision);
  rep.accuracy = rates.accuracy;
  rep.precision = rates.precision;
  rep.recall = rates.recall;
  rep.f1 = rates.f1;
  rep.false_accept = rates.false_accept;
  rep.false_reject = rates.false_reject;
  rep.bins = reliability_bins(pred, target_soft, n_bins);

  rep.near_n = near_index.size();
  if (rep.near_n > 0) {
    std::vector<double> np, nt, ny;
    np.reserve(rep.near_n);
    nt.reserve(rep.near_n);
    ny.reserve(rep.near_n);
    for (std::size_t idx : near_index) {
      np.push_back(pred[idx]);
      nt.push_back(target_soft[idx]);
      ny.push_back(y_hard[idx]);
    }
    rep.near_brier = brier(np, nt);
    rep.near_logloss = logloss(np, nt);
    rep.near_ece = ece(np, nt, n_bins);
    const DecisionRates nr = decision_rates(np, ny, alpha_decision);
    rep.near_recall = nr.recall;
    rep.near_accuracy = nr.accuracy;
  }
  return rep;
}

}  // namespace uccap
