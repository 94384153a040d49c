// Acceptance suite: runs every release criterion end to end and prints
// one PASS/FAIL line per criterion. Exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>
#include <vector>

#include "uccap/capability.hpp"
#include "uccap/decision.hpp"
#include "uccap/math.hpp"
#include "uccap/metrics.hpp"
#include "uccap/pipeline.hpp"
#include "uccap/rng.hpp"
#include "uccap/risk_model.hpp"
#include "uccap/simulation.hpp"
#include "uccap/uncertainty.hpp"

using namespace uccap;

namespace {

int failures = 0;

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const auto start = clock::now();
  return std::chrono::duration<double>(clock::now() - start).count();
}

struct Timer {
  double t0 = now_seconds();
  double elapsed() const { return now_seconds() - t0; }
};

void report(const std::string& name, bool pass, double seconds, const std::string& detail) {
  std::printf("[%s] %-34s (%6.2fs) %s\n", pass ? "PASS" : "FAIL", name.c_str(), seconds,
              detail.c_str());
  if (!pass) ++failures;
}

ResidualModel residual_only_model(double alpha_r, double bias) {
  ResidualModel m;
  m.standardizer.mean.assign(kFeatureDim, 0.0);
  m.standardizer.sd.assign(kFeatureDim, 1.0);
  m.alpha_r = alpha_r;
  m.bias = bias;
  return m;
}

// ---------------------------------------------------------------- 1
// Reference-case golden values: pi_stat, z_stat and the corrected pi
// for the clearly-capable / boundary / sub-threshold cases, within
// 1e-3. The printed z of the boundary case is the log-odds of the
// *rounded* probability, so z values are compared through the same
// 3-decimal rounding.
void criterion_risk_goldens() {
  Timer timer;
  const double tol = 1e-3;
  bool pass = true;
  std::string detail;

  const BaselineRisk b = baseline_risk(1.34, 0.14, 1.33);
  const BaselineRisk c = baseline_risk(1.26, 0.10, 1.33);
  const BaselineRisk a = baseline_risk(1.70, 0.08, 1.33);

  auto rounded_z = [](double pi) { return logit(std::round(pi * 1000.0) / 1000.0); };
  pass &= std::abs(b.pi_stat - 0.472) <= tol;
  pass &= std::abs(rounded_z(b.pi_stat) - (-0.112)) <= tol;
  pass &= std::abs(c.pi_stat - 0.758) <= tol;
  pass &= std::abs(rounded_z(c.pi_stat) - 1.142) <= tol;
  pass &= std::abs(c.z_stat - 1.142) <= tol;  // exact value agrees directly here
  pass &= a.pi_stat <= tol && a.pi_stat >= 1e-6;

  const FeatureVector x{};
  const double pi_b = predict(residual_only_model(0.5, 1.1), b.z_stat, x);   // +0.55
  const double pi_c = predict(residual_only_model(0.5, -0.8), c.z_stat, x);  // -0.40
  const double pi_a = predict(residual_only_model(0.5, 0.0), a.z_stat, x);   // ~0
  pass &= std::abs(pi_b - 0.608) <= tol;
  pass &= std::abs(pi_c - 0.678) <= tol;
  pass &= pi_a <= tol;

  char buf[160];
  std::snprintf(buf, sizeof(buf), "pi_stat B/C=%.4f/%.4f pi B/C=%.4f/%.4f", b.pi_stat,
                c.pi_stat, pi_b, pi_c);
  detail = buf;
  const double secs = timer.elapsed();
  pass &= secs < 1.0;
  report("reference-risk-goldens", pass, secs, detail);
}

// ---------------------------------------------------------------- 2
// At the capability boundary the decision is effectively random:
// oracle risk for a margin-zero normal process lands in [0.43, 0.57].
void criterion_boundary() {
  Timer timer;
  DistFit normal{DistFamily::normal, 10.0, 0.02, 0.0};
  const SimProcess proc = make_process("B", normal, 100, 1.33, true, 0.3, true);
  const double pi = oracle_risk(proc, 2000, 1.33, EstimatorPolicy::auto_select, 424242);
  const double secs = timer.elapsed();
  const bool pass = pi >= 0.43 && pi <= 0.57 && secs < 30.0;
  char buf[80];
  std::snprintf(buf, sizeof(buf), "pi_true=%.4f", pi);
  report("boundary-randomness", pass, secs, buf);
}

// ---------------------------------------------------------------- 3
// Four-model calibration ordering under
// nested Monte Carlo defaults; the ordering must hold on ECE,
// near-threshold ECE and Brier-vs-oracle, plus a correlation margin,
// in at least 4 of 5 seeds.
void criterion_nested_ordering() {
  Timer timer;
  int ok = 0;
  std::string detail;
  for (std::uint64_t seed : {101ull, 202ull, 303ull, 404ull, 505ull}) {
    SimConfig cfg;
    cfg.seed = seed;
    const NestedMcResult res = run_nested_mc(cfg, seed);
    const CalibrationReport& base = res.models[0].report;
    const CalibrationReport& v3 = res.models[1].report;
    const CalibrationReport& fr = res.models[2].report;
    const CalibrationReport& an = res.models[3].report;

    const bool ece_ok = an.ece < fr.ece && fr.ece < v3.ece && v3.ece < base.ece;
    const bool near_ok = an.near_ece < fr.near_ece && fr.near_ece < v3.near_ece &&
                         v3.near_ece < base.near_ece;
    const bool brier_ok =
        an.brier < fr.brier && fr.brier < v3.brier && v3.brier < base.brier;
    const bool corr_ok = an.correlation >= base.correlation + 0.02;
    const bool seed_ok = ece_ok && near_ok && brier_ok && corr_ok;
    ok += seed_ok ? 1 : 0;

    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "  seed %llu: %s (ECE anch/free/v3/base = %.4f/%.4f/%.4f/%.4f, corr "
                  "%.3f vs %.3f)\n",
                  static_cast<unsigned long long>(seed), seed_ok ? "ordered" : "violated",
                  an.ece, fr.ece, v3.ece, base.ece, an.correlation, base.correlation);
    detail += buf;
  }
  const double secs = timer.elapsed();
  const bool pass = ok >= 4 && secs < 600.0;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "ordered seeds %d/5", ok);
  report("nested-mc-ordinal", pass, secs, buf);
  std::fputs(detail.c_str(), stdout);
}

// ---------------------------------------------------------------- 4
// Estimation error falls with sample size, and empirical percentile
// estimation is noisier than best-fit estimation under a correctly
// specified family at n = 20.
void criterion_estimation_error() {
  Timer timer;
  const std::size_t n_grid[] = {20, 50, 100, 200};
  const int processes = 200;
  std::vector<double> rmse;
  double rmse_emp20 = 0.0, rmse_fit20 = 0.0;

  for (std::size_t n : n_grid) {
    double se_acc = 0.0, emp_acc = 0.0, fit_acc = 0.0;
    for (int i = 0; i < processes; ++i) {
      Rng rng(derive_seed(7000 + n, static_cast<std::uint64_t>(i)));
      DistFit dist{DistFamily::normal, 10.0,
                   std::exp(rng.uniform(std::log(0.01), std::log(0.5))), 0.0};
      const double target = 1.33 + rng.uniform(-0.4, 0.6);
      const SimProcess proc =
          make_process("E", dist, n, target, true, rng.uniform(0.1, 0.5), true);
      DimensionSample s;
      s.dim_id = proc.id;
      s.spec = proc.spec;
      s.values.resize(n);
      for (auto& v : s.values) v = dist_sample(dist, rng);

      const double err = estimate_cpk_normal(s).cpk_hat - proc.cpk_true;
      se_acc += err * err;
      if (n == 20) {
        const double fit_err =
            estimate_cpk_percentile(s, DistFamily::normal).cpk_hat - proc.cpk_true;
        const double emp_err =
            estimate_cpk_percentile_empirical(s).cpk_hat - proc.cpk_true;
        fit_acc += fit_err * fit_err;
        emp_acc += emp_err * emp_err;
      }
    }
    rmse.push_back(std::sqrt(se_acc / processes));
    if (n == 20) {
      rmse_fit20 = std::sqrt(fit_acc / processes);
      rmse_emp20 = std::sqrt(emp_acc / processes);
    }
  }

  bool decreasing = true;
  for (std::size_t i = 1; i < rmse.size(); ++i) decreasing &= rmse[i] < rmse[i - 1];
  const double secs = timer.elapsed();
  const bool pass = decreasing && rmse_emp20 > rmse_fit20 && secs < 120.0;
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "rmse(n)=%.3f/%.3f/%.3f/%.3f emp20=%.3f fit20=%.3f", rmse[0], rmse[1],
                rmse[2], rmse[3], rmse_emp20, rmse_fit20);
  report("estimation-error-vs-n", pass, secs, buf);
}

// ---------------------------------------------------------------- 5
// Analytic gradients against central finite differences for all four
// training objectives at 20 random parameter points each.
void criterion_gradients() {
  Timer timer;
  Rng rng(31337);
  std::vector<PreparedRow> rows(40);
  for (auto& r : rows) {
    for (auto& v : r.x_std) v = rng.normal(0.0, 1.0);
    r.z_stat = rng.normal(0.0, 1.5);
    r.target = rng.uniform01();
    r.weight = 0.5 + 2.0 * rng.uniform01();
  }
  // latent draws keep the probit argument inside the unclipped band so
  // the objective stays differentiable at every probed point
  std::vector<LatentRow> latent_rows(40);
  for (auto& r : latent_rows) {
    for (auto& v : r.x_std) v = rng.normal(0.0, 1.0);
    r.cpk_hat = rng.normal(1.33, 0.08);
    r.se = 0.15 + 0.15 * rng.uniform01();
    r.c_stat = r.cpk_hat;
    r.target = rng.uniform01() < 0.5 ? 0.0 : 1.0;
    r.weight = 0.5 + rng.uniform01();
  }

  double worst = 0.0;
  bool pass = true;
  const double h = 1e-6;

  for (int point = 0; point < 20; ++point) {
    for (LossKind loss : {LossKind::bce, LossKind::soft_ce, LossKind::brier}) {
      ParamPoint p;
      for (auto& t : p.theta) t = rng.normal(0.0, 0.5);
      p.bias = rng.normal(0.0, 0.5);
      p.anchor_coef = 1.0 + rng.normal(0.0, 0.2);
      ParamPoint grad;
      objective_and_gradient(p, rows, loss, AnchorMode::free, 0.2, 0.3, &grad);

      double num = 0.0, den = 0.0;
      auto accumulate = [&](double analytic, double fd) {
        num += (analytic - fd) * (analytic - fd);
        den += std::max(analytic * analytic, fd * fd);
      };
      for (std::size_t j = 0; j < kFeatureDim; ++j) {
        ParamPoint up = p, dn = p;
        up.theta[j] += h;
        dn.theta[j] -= h;
        accumulate(grad.theta[j],
                   (objective_and_gradient(up, rows, loss, AnchorMode::free, 0.2, 0.3,
                                           nullptr) -
                    objective_and_gradient(dn, rows, loss, AnchorMode::free, 0.2, 0.3,
                                           nullptr)) /
                       (2 * h));
      }
      {
        ParamPoint up = p, dn = p;
        up.bias += h;
        dn.bias -= h;
        accumulate(grad.bias,
                   (objective_and_gradient(up, rows, loss, AnchorMode::free, 0.2, 0.3,
                                           nullptr) -
                    objective_and_gradient(dn, rows, loss, AnchorMode::free, 0.2, 0.3,
                                           nullptr)) /
                       (2 * h));
      }
      {
        ParamPoint up = p, dn = p;
        up.anchor_coef += h;
        dn.anchor_coef -= h;
        accumulate(grad.anchor_coef,
                   (objective_and_gradient(up, rows, loss, AnchorMode::free, 0.2, 0.3,
                                           nullptr) -
                    objective_and_gradient(dn, rows, loss, AnchorMode::free, 0.2, 0.3,
                                           nullptr)) /
                       (2 * h));
      }
      const double rel = std::sqrt(num / std::max(den, 1e-30));
      worst = std::max(worst, rel);
      pass &= rel < 1e-5;
    }

    // composite objective drives the latent head
    LatentHead head;
    for (auto& g : head.g) g = rng.normal(0.0, 0.05);
    head.g_bias = rng.normal(0.0, 0.02);
    LatentHead grad;
    latent_objective_and_gradient(head, latent_rows, 1.33, 0.7, &grad);
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < kFeatureDim; ++j) {
      LatentHead up = head, dn = head;
      up.g[j] += h;
      dn.g[j] -= h;
      const double fd =
          (latent_objective_and_gradient(up, latent_rows, 1.33, 0.7, nullptr) -
           latent_objective_and_gradient(dn, latent_rows, 1.33, 0.7, nullptr)) /
          (2 * h);
      num += (grad.g[j] - fd) * (grad.g[j] - fd);
      den += std::max(grad.g[j] * grad.g[j], fd * fd);
    }
    const double rel = std::sqrt(num / std::max(den, 1e-30));
    worst = std::max(worst, rel);
    pass &= rel < 1e-5;
  }

  char buf[64];
  std::snprintf(buf, sizeof(buf), "worst rel err %.2e", worst);
  report("gradient-suite", pass, timer.elapsed(), buf);
}

// ---------------------------------------------------------------- 6
// Strictly convex anchored training: two runs with different
// learning-rate warmups reach the same parameters and validation Brier.
void criterion_training_determinism() {
  Timer timer;
  Rng rng(2101);
  Dataset rows;
  for (int i = 0; i < 240; ++i) {
    TrainRow r;
    r.dim_id = "T" + std::to_string(i);
    for (auto& v : r.x) v = rng.normal(0.0, 1.0);
    r.z_stat = rng.normal(0.0, 2.0);
    r.target = sigmoid(r.z_stat + 0.6 * r.x[0] + rng.normal(0.0, 0.4));
    r.near_flag = std::abs(r.z_stat) < 0.5;
    r.pos_flag = r.target >= 0.5;
    rows.push_back(r);
  }
  Dataset val(rows.begin() + 200, rows.end());
  Dataset train_rows(rows.begin(), rows.begin() + 200);

  TrainConfig cfg;
  cfg.loss = LossKind::soft_ce;
  cfg.anchor_mode = AnchorMode::anchored;
  cfg.alpha_r = 0.2;
  cfg.lambda2 = 1.0;
  cfg.epochs = 400000;
  cfg.grad_tol = 1e-11;
  cfg.learning_rate = 0.3;
  const ResidualModel a = train(train_rows, val, cfg);

  TrainConfig warm = cfg;
  warm.warmup_epochs = 500;
  warm.warmup_learning_rate = 0.01;
  const ResidualModel b = train(train_rows, val, warm);

  double max_diff = std::abs(a.bias - b.bias);
  for (std::size_t j = 0; j < kFeatureDim; ++j) {
    max_diff = std::max(max_diff, std::abs(a.theta[j] - b.theta[j]));
  }

  auto val_brier = [&](const ResidualModel& m) {
    double acc = 0.0;
    for (const auto& r : val) {
      const double d = predict(m, r.z_stat, r.x) - r.target;
      acc += d * d;
    }
    return acc / static_cast<double>(val.size());
  };
  const double brier_diff = std::abs(val_brier(a) - val_brier(b));
  const bool pass = max_diff < 1e-4 && brier_diff < 1e-6;
  char buf[96];
  std::snprintf(buf, sizeof(buf), "param diff %.2e, brier diff %.2e", max_diff, brier_diff);
  report("convex-training-determinism", pass, timer.elapsed(), buf);
}

// ---------------------------------------------------------------- 7
// Metric implementations against independent scalar oracles on a
// 200-point fixed-seed instance.
void criterion_metric_oracles() {
  Timer timer;
  Rng rng(404040);
  const int n = 200;
  std::vector<double> pred(n), target(n), y(n);
  for (int i = 0; i < n; ++i) {
    pred[i] = rng.uniform01();
    target[i] = rng.uniform01();
    y[i] = rng.uniform01() < 0.4 ? 1.0 : 0.0;
  }

  bool pass = true;

  double ref_brier = 0.0, ref_ll = 0.0;
  for (int i = 0; i < n; ++i) {
    ref_brier += (pred[i] - target[i]) * (pred[i] - target[i]);
    const double p = std::min(std::max(pred[i], 1e-12), 1.0 - 1e-12);
    ref_ll -= target[i] * std::log(p) + (1.0 - target[i]) * std::log(1.0 - p);
  }
  pass &= std::abs(brier(pred, target) - ref_brier / n) < 1e-12;
  pass &= std::abs(logloss(pred, target) - ref_ll / n) < 1e-12;

  {  // hand-binned calibration error
    const int bins = 10;
    std::vector<double> sp(bins, 0.0), st(bins, 0.0);
    std::vector<int> cnt(bins, 0);
    for (int i = 0; i < n; ++i) {
      int b = std::min(static_cast<int>(pred[i] * bins), bins - 1);
      sp[b] += pred[i];
      st[b] += target[i];
      cnt[b] += 1;
    }
    double ref = 0.0;
    for (int b = 0; b < bins; ++b) {
      if (cnt[b]) ref += (static_cast<double>(cnt[b]) / n) *
                         std::abs(sp[b] / cnt[b] - st[b] / cnt[b]);
    }
    pass &= std::abs(ece(pred, target, bins) - ref) < 1e-10;
  }

  {  // pair-counting AUC with midrank ties
    double wins = 0.0, pairs = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (y[i] >= 0.5 && y[j] < 0.5) {
          pairs += 1.0;
          if (pred[i] > pred[j]) wins += 1.0;
          else if (pred[i] == pred[j]) wins += 0.5;
        }
      }
    }
    pass &= std::abs(*roc_auc(pred, y) - wins / pairs) < 1e-12;
  }

  for (double alpha : {0.25, 0.5, 0.75}) {  // confusion-matrix oracle
    double tp = 0, fp = 0, tn = 0, fn = 0;
    for (int i = 0; i < n; ++i) {
      const bool accept = pred[i] <= alpha;
      const bool fails = y[i] >= 0.5;
      if (accept && fails) fn += 1;
      else if (accept) tn += 1;
      else if (fails) tp += 1;
      else fp += 1;
    }
    const DecisionRates r = decision_rates(pred, y, alpha);
    pass &= std::abs(r.accuracy - (tp + tn) / n) < 1e-10;
    pass &= std::abs(r.false_accept - fn / n) < 1e-10;
    pass &= std::abs(r.false_reject - fp / n) < 1e-10;
    pass &= std::abs(r.precision - tp / (tp + fp)) < 1e-10;
    pass &= std::abs(r.recall - tp / (tp + fn)) < 1e-10;
  }

  report("metric-oracles", pass, timer.elapsed(), "brier/logloss/ece/auc/rates");
}

// ---------------------------------------------------------------- 8
// Bootstrap standard error against the analytic approximation
// sqrt(1/(9n) + cpk^2/(2(n-1))) for n = 32 normal samples.
void criterion_bootstrap_se() {
  Timer timer;
  double ratio = 0.0;
  const int reps = 50;
  for (int r = 0; r < reps; ++r) {
    Rng rng(9000 + r);
    DimensionSample s;
    s.dim_id = "B";
    s.values.resize(32);
    for (auto& v : s.values) v = rng.normal(10.0, 0.02);
    s.spec.lsl = 9.9;
    s.spec.usl = 10.1;
    const CapabilityEstimate est = estimate_cpk_normal(s);
    const double analytic =
        std::sqrt(1.0 / (9.0 * 32) + est.cpk_hat * est.cpk_hat / (2.0 * 31));
    ratio += bootstrap_se(s, 100, EstimatorRoute::from_estimate(est), 700 + r) / analytic;
  }
  ratio /= reps;
  const bool pass = std::abs(ratio - 1.0) < 0.25;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "mean ratio %.4f", ratio);
  report("bootstrap-se-sanity", pass, timer.elapsed(), buf);
}

// ---------------------------------------------------------------- 9
// Aggregated leak-free protocol: zero dim_id overlap across 10 splits,
// and the anchored model's Brier within 0.03 of the logistic model that
// takes the baseline log-odds as an input.
void criterion_leakfree() {
  Timer timer;

  // synthetic multi-dimension dataset: 240 dimensions of 100 readings
  std::vector<DimensionSample> samples;
  SimConfig gen;
  gen.n_outer = 240;
  gen.n_grid = {100};
  gen.n_weights = {1.0};
  const auto processes = generate_processes(gen, 321);
  for (std::size_t i = 0; i < processes.size(); ++i) {
    Rng rng(derive_seed(888, i));
    DimensionSample s;
    s.dim_id = processes[i].id;
    s.spec = processes[i].spec;
    s.values.resize(processes[i].n);
    for (auto& v : s.values) v = dist_sample(processes[i].dist, rng);
    samples.push_back(std::move(s));
  }

  RunConfig cfg;
  cfg.seed = 13;
  cfg.k_splits = 10;
  cfg.lambda2 = 0.1;  // residual-scale grid stays active
  const LeakfreeReport rep = run_leakfree_evaluation(samples, cfg);

  // independent audit of the same splits
  std::vector<std::string> ids;
  for (const auto& s : samples) ids.push_back(s.dim_id);
  bool audit = true;
  for (const auto& split :
       leakfree_splits(ids, cfg.k_splits, cfg.split_ratios, derive_seed(cfg.seed, 0x51EEull))) {
    std::vector<std::string> tr, va, te;
    for (auto i : split.train) tr.push_back(ids[i]);
    for (auto i : split.val) va.push_back(ids[i]);
    for (auto i : split.test) te.push_back(ids[i]);
    std::sort(tr.begin(), tr.end());
    std::sort(va.begin(), va.end());
    std::sort(te.begin(), te.end());
    auto disjoint = [](const std::vector<std::string>& a, const std::vector<std::string>& b) {
      std::vector<std::string> inter;
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                            std::back_inserter(inter));
      return inter.empty();
    };
    audit &= disjoint(tr, va) && disjoint(tr, te) && disjoint(va, te);
  }

  double uccap_brier = 0.0, logistic_brier = 0.0;
  for (const auto& m : rep.models) {
    if (m.name == "uccap") uccap_brier = m.brier_mean;
    if (m.name == "logistic_z") logistic_brier = m.brier_mean;
  }
  const double gap = std::abs(uccap_brier - logistic_brier);
  const bool pass = audit && rep.audit_clean && gap <= 0.03;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "audit %s, brier uccap %.4f vs logistic+z %.4f",
                audit && rep.audit_clean ? "clean" : "DIRTY", uccap_brier, logistic_brier);
  report("leakfree-hygiene", pass, timer.elapsed(), buf);
}

// ---------------------------------------------------------------- 10
// The four reference decision rows map to their exact printed strings.
void criterion_decision_chain() {
  Timer timer;
  bool pass = true;

  auto check_row = [&](double pi, double cpk, bool normality_pass, double skewness,
                       double rel_position, const char* level, const char* reason,
                       const char* action) {
    CapabilityEstimate est;
    est.cpk_hat = cpk;
    est.normality_pass = normality_pass;
    est.skewness = skewness;
    const RiskAssessment a =
        decision_chain("row", pi, pi, logit(std::min(std::max(pi, 1e-6), 1.0 - 1e-6)), 0.0,
                       est, rel_position);
    pass &= std::string(risk_level_name(a.level)) == level;
    pass &= std::string(reason_name(a.reason)) == reason;
    pass &= std::string(action_name(a.action)) == action;
  };

  check_row(0.023, 1.883, true, 0.10, 0.05, "Low", "Acceptable", "Accept");
  check_row(0.999, 0.302, true, 0.00, 0.58, "High", "Mixed mechanism",
            "Reduce sd + re-center");
  check_row(0.485, 1.389, false, 1.20, 0.08, "Med", "Skewed", "Review distribution");
  check_row(0.537, 1.334, true, 0.20, 0.08, "Med", "Latent model risk",
            "Investigate latent risk");

  report("decision-chain-goldens", pass, timer.elapsed(), "4 reference rows");
}

}  // namespace

int main() {
  std::printf("uccap acceptance suite\n");
  criterion_risk_goldens();
  criterion_boundary();
  criterion_nested_ordering();
  criterion_estimation_error();
  criterion_gradients();
  criterion_training_determinism();
  criterion_metric_oracles();
  criterion_bootstrap_se();
  criterion_leakfree();
  criterion_decision_chain();
  std::printf("%d of 10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
