#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "uccap/errors.hpp"
#include "uccap/math.hpp"
#include "uccap/metrics.hpp"
#include "uccap/rng.hpp"

using namespace uccap;

namespace {

struct SeededData {
  std::vector<double> pred;
  std::vector<double> target;
  std::vector<double> y;
};

SeededData make_data(int n, std::uint64_t seed) {
  Rng rng(seed);
  SeededData d;
  for (int i = 0; i < n; ++i) {
    d.pred.push_back(rng.uniform01());
    d.target.push_back(rng.uniform01());
    d.y.push_back(rng.uniform01() < 0.35 ? 1.0 : 0.0);
  }
  return d;
}

}  // namespace

TEST_CASE("brier and logloss basics") {
  std::vector<double> p = {0.2, 0.7};
  CHECK(brier(p, p) == 0.0);
  std::vector<double> half = {0.5}, one = {1.0};
  CHECK(logloss(half, one) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("brier and logloss match scalar loops on seeded vectors") {
  const SeededData d = make_data(200, 71);
  double ref_b = 0.0, ref_l = 0.0;
  for (std::size_t i = 0; i < d.pred.size(); ++i) {
    ref_b += (d.pred[i] - d.target[i]) * (d.pred[i] - d.target[i]);
    const double p = clip(d.pred[i], 1e-12, 1.0 - 1e-12);
    ref_l -= d.target[i] * std::log(p) + (1.0 - d.target[i]) * std::log(1.0 - p);
  }
  CHECK(brier(d.pred, d.target) == doctest::Approx(ref_b / 200).epsilon(1e-12));
  CHECK(logloss(d.pred, d.target) == doctest::Approx(ref_l / 200).epsilon(1e-12));
}

TEST_CASE("label symmetry of the brier score") {
  for (std::uint64_t seed = 72; seed < 78; ++seed) {
    const SeededData d = make_data(50, seed);
    std::vector<double> p1(d.pred), t1(d.target);
    for (auto& v : p1) v = 1.0 - v;
    for (auto& v : t1) v = 1.0 - v;
    CHECK(brier(p1, t1) == doctest::Approx(brier(d.pred, d.target)).epsilon(1e-12));
  }
}

TEST_CASE("ece trivial cases") {
  std::vector<double> p = {0.2, 0.2, 0.8, 0.8};
  std::vector<double> t = {0.0, 0.4, 1.0, 0.6};  // bins average exactly to pred
  CHECK(ece(p, t, 10) == doctest::Approx(0.0).epsilon(1e-12));
  std::vector<double> p9(40, 0.9), t0(40, 0.0);
  CHECK(ece(p9, t0, 10) == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("ece matches a hand-binned oracle") {
  const SeededData d = make_data(200, 73);
  const int n_bins = 10;
  std::vector<double> sum_p(n_bins, 0.0), sum_t(n_bins, 0.0);
  std::vector<int> count(n_bins, 0);
  for (std::size_t i = 0; i < d.pred.size(); ++i) {
    int b = std::min(static_cast<int>(d.pred[i] * n_bins), n_bins - 1);
    sum_p[b] += d.pred[i];
    sum_t[b] += d.target[i];
    count[b] += 1;
  }
  double ref = 0.0;
  for (int b = 0; b < n_bins; ++b) {
    if (count[b] == 0) continue;
    ref += (count[b] / 200.0) * std::abs(sum_p[b] / count[b] - sum_t[b] / count[b]);
  }
  CHECK(ece(d.pred, d.target, n_bins) == doctest::Approx(ref).epsilon(1e-12));
  CHECK(ece(d.pred, d.target, n_bins) >= 0.0);
  CHECK(ece(d.pred, d.target, n_bins) <= 1.0);
}

TEST_CASE("reliability bins cover all items and are ordered") {
  const SeededData d = make_data(150, 74);
  const auto bins = reliability_bins(d.pred, d.target, 10);
  std::size_t total = 0;
  double prev = -1.0;
  for (const auto& b : bins) {
    total += b.count;
    if (b.count > 0) {
      CHECK(b.mean_pred >= prev);
      prev = b.mean_pred;
    }
  }
  CHECK(total == d.pred.size());
}

TEST_CASE("decision rates on simple patterns") {
  std::vector<double> exact = {0.0, 1.0, 0.0, 1.0};
  std::vector<double> y = {0.0, 1.0, 0.0, 1.0};
  const DecisionRates r = decision_rates(exact, y, 0.5);
  CHECK(r.accuracy == 1.0);
  CHECK(r.false_accept == 0.0);
  CHECK(r.false_reject == 0.0);

  std::vector<double> all_accept(10, 0.0);
  std::vector<double> half(10, 0.0);
  for (int i = 0; i < 5; ++i) half[i] = 1.0;
  const DecisionRates r2 = decision_rates(all_accept, half, 0.5);
  CHECK(r2.false_accept == doctest::Approx(0.5));
  CHECK(r2.false_reject == 0.0);
  CHECK(r2.recall == 0.0);
}

TEST_CASE("decision rates match a confusion-matrix oracle and sum to n") {
  const SeededData d = make_data(200, 75);
  for (double alpha : {0.2, 0.5, 0.8}) {
    int tp = 0, fp = 0, tn = 0, fn = 0;
    for (std::size_t i = 0; i < d.pred.size(); ++i) {
      const bool accept = d.pred[i] <= alpha;
      const bool fails = d.y[i] >= 0.5;
      if (accept && fails) ++fn;
      else if (accept) ++tn;
      else if (fails) ++tp;
      else ++fp;
    }
    CHECK(tp + fp + tn + fn == 200);
    const DecisionRates r = decision_rates(d.pred, d.y, alpha);
    CHECK(r.accuracy == doctest::Approx((tp + tn) / 200.0).epsilon(1e-12));
    CHECK(r.false_accept == doctest::Approx(fn / 200.0).epsilon(1e-12));
    CHECK(r.false_reject == doctest::Approx(fp / 200.0).epsilon(1e-12));
    if (tp + fp > 0) CHECK(r.precision == doctest::Approx(tp / double(tp + fp)).epsilon(1e-12));
    if (tp + fn > 0) CHECK(r.recall == doctest::Approx(tp / double(tp + fn)).epsilon(1e-12));
  }
}

TEST_CASE("roc auc endpoints and brute-force pair counting with ties") {
  std::vector<double> perfect = {0.1, 0.2, 0.8, 0.9};
  std::vector<double> y = {0.0, 0.0, 1.0, 1.0};
  CHECK(*roc_auc(perfect, y) == doctest::Approx(1.0));
  std::vector<double> reversed = {0.9, 0.8, 0.2, 0.1};
  CHECK(*roc_auc(reversed, y) == doctest::Approx(0.0));

  Rng rng(76);
  std::vector<double> pred(20), yy(20);
  for (auto& p : pred) p = std::round(rng.uniform01() * 10.0) / 10.0;  // forced ties
  for (auto& v : yy) v = rng.uniform01() < 0.5 ? 1.0 : 0.0;
  yy[0] = 1.0;
  yy[1] = 0.0;
  double wins = 0.0, pairs = 0.0;
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 20; ++j) {
      if (yy[i] >= 0.5 && yy[j] < 0.5) {
        pairs += 1.0;
        if (pred[i] > pred[j]) wins += 1.0;
        else if (pred[i] == pred[j]) wins += 0.5;
      }
    }
  }
  CHECK(*roc_auc(pred, yy) == doctest::Approx(wins / pairs).epsilon(1e-12));
}

TEST_CASE("roc auc is invariant under strictly increasing transforms") {
  const SeededData d = make_data(100, 77);
  std::vector<double> squashed(d.pred);
  for (auto& p : squashed) p = sigmoid(5.0 * p - 1.0);
  CHECK(*roc_auc(squashed, d.y) == doctest::Approx(*roc_auc(d.pred, d.y)).epsilon(1e-12));
}

TEST_CASE("single-class inputs yield the distinguished missing value") {
  std::vector<double> p = {0.1, 0.5, 0.9};
  std::vector<double> ones = {1.0, 1.0, 1.0};
  CHECK_FALSE(roc_auc(p, ones).has_value());
  CHECK_FALSE(pr_auc(p, ones).has_value());
}

TEST_CASE("pr auc equals the step-interpolated average precision oracle") {
  const SeededData d = make_data(60, 78);
  // brute force over distinct thresholds, descending
  std::vector<double> thresholds(d.pred);
  std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  double total_pos = 0.0;
  for (double v : d.y) total_pos += v;
  double ref = 0.0, prev_recall = 0.0;
  for (double thr : thresholds) {
    double tp = 0.0, pp = 0.0;
    for (std::size_t i = 0; i < d.pred.size(); ++i) {
      if (d.pred[i] >= thr) {
        pp += 1.0;
        tp += d.y[i];
      }
    }
    const double recall = tp / total_pos;
    ref += (recall - prev_recall) * (tp / pp);
    prev_recall = recall;
  }
  CHECK(*pr_auc(d.pred, d.y) == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("pearson correlation standard oracle") {
  std::vector<double> a = {1.0, 2.0, 3.0, 4.0};
  std::vector<double> b = {2.0, 4.0, 6.0, 8.0};
  CHECK(pearson(a, b) == doctest::Approx(1.0).epsilon(1e-12));
  std::vector<double> c = {4.0, 3.0, 2.0, 1.0};
  CHECK(pearson(a, c) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("near filter keeps the boundary inclusive") {
  // binary-exact values so the boundary comparison is unambiguous
  std::vector<double> cpk = {1.5, 1.53125, 1.0, 0.96875, 1.25};
  const auto idx = near_filter(cpk, 1.25, 0.25);
  CHECK(idx == std::vector<std::size_t>{0, 2, 4});
}

TEST_CASE("platt recalibration finds the identity for calibrated input") {
  Rng rng(79);
  std::vector<double> pred(400), target(400);
  for (int i = 0; i < 400; ++i) {
    pred[i] = clip(rng.uniform01(), 0.02, 0.98);
    target[i] = pred[i];
  }
  const PlattMap map = platt_recalibrate(pred, target);
  CHECK(map.a == doctest::Approx(1.0).epsilon(0.05));
  CHECK(map.b == doctest::Approx(0.0).epsilon(0.05));
}

TEST_CASE("platt recalibration toward a constant target") {
  Rng rng(80);
  std::vector<double> pred(200), target(200, 0.5);
  for (auto& p : pred) p = clip(rng.uniform01(), 0.02, 0.98);
  const PlattMap map = platt_recalibrate(pred, target);
  for (double p : {0.1, 0.4, 0.9}) {
    CHECK(platt_apply(map, p) == doctest::Approx(0.5).epsilon(0.05));
  }
}

TEST_CASE("platt recalibration lowers the soft cross-entropy vs identity") {
  Rng rng(81);
  std::vector<double> pred(300), target(300);
  for (int i = 0; i < 300; ++i) {
    const double l = rng.normal(0.0, 1.5);
    pred[i] = sigmoid(1.8 * l + 0.7);  // systematically distorted
    target[i] = sigmoid(l);
  }
  const PlattMap map = platt_recalibrate(pred, target);
  std::vector<double> fixed(pred);
  for (auto& p : fixed) p = platt_apply(map, p);
  CHECK(logloss(fixed, target) < logloss(pred, target));
}

TEST_CASE("empty input is rejected") {
  std::vector<double> empty;
  CHECK_THROWS_AS(brier(empty, empty), Error);
  CHECK_THROWS_AS(ece(empty, empty, 10), Error);
}

TEST_CASE("calibration report aggregates the near subset") {
  const SeededData d = make_data(120, 82);
  std::vector<std::size_t> near = {1, 5, 9, 33, 70};
  const CalibrationReport rep = calibration_report(d.pred, d.target, d.y, near, 0.5);
  CHECK(rep.n == 120);
  CHECK(rep.near_n == 5);
  std::vector<double> np, nt;
  for (auto i : near) {
    np.push_back(d.pred[i]);
    nt.push_back(d.target[i]);
  }
  CHECK(rep.near_brier == doctest::Approx(brier(np, nt)).epsilon(1e-12));
}
