#include "uccap/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "uccap/errors.hpp"
#include "uccap/math.hpp"
#include "uccap/rng.hpp"

namespace uccap {

namespace {

// Disjoint deterministic sub-streams for the per-process work units.
constexpr std::uint64_t kMix = 0x9E3779B97F4A7C15ull;
enum Stream : std::uint64_t { kObserved = 1, kInner = 2, kBoot = 3, kSoft = 4 };

std::uint64_t sub_seed(std::uint64_t base, std::uint64_t index, Stream stream) {
  return derive_seed(base, index) + static_cast<std::uint64_t>(stream) * kMix;
}

DimensionSample as_sample(const std::string& id, std::vector<double> values,
                          const SpecLimits& spec) {
  DimensionSample s;
  s.dim_id = id;
  s.values = std::move(values);
  s.spec = spec;
  return s;
}

std::vector<double> draw_dataset(const DistFit& dist, std::size_t n, Rng& rng) {
  std::vector<double> values(n);
  for (auto& v : values) v = dist_sample(dist, rng);
  return values;
}

}  // namespace

SimProcess make_process(const std::string& id, const DistFit& dist, std::size_t n,
                        double cpk_true, bool bilateral, double slack, bool upper_binding) {
  const double q_lo = dist_quantile(dist, percentile_p_low());
  const double q50 = dist_quantile(dist, 0.5);
  const double q_hi = dist_quantile(dist, percentile_p_high());
  if (!(q_hi > q50) || !(q50 > q_lo)) {
    throw Error(ErrorCode::InfeasibleSpec, "degenerate quantile spread for '" + id + "'");
  }
  const bool positive_support =
      dist.family == DistFamily::lognormal || dist.family == DistFamily::weibull;

  SimProcess p;
  p.id = id;
  p.dist = dist;
  p.n = n;
  p.cpk_true = cpk_true;

  if (upper_binding || positive_support) {
    p.spec.usl = q50 + cpk_true * (q_hi - q50);
    if (bilateral) {
      const double lsl = q50 - (cpk_true + slack) * (q50 - q_lo);
      // positive-support families keep a single-sided spec when the
      // slacked lower limit would cross zero
      if (!positive_support || lsl > 0.0) p.spec.lsl = lsl;
    }
  } else {
    p.spec.lsl = q50 - cpk_true * (q50 - q_lo);
    if (bilateral) {
      p.spec.usl = q50 + (cpk_true + slack) * (q_hi - q50);
    }
  }
  p.spec.validate();
  const double check = cpk_from_quantiles(q_lo, q50, q_hi, p.spec);
  if (std::abs(check - cpk_true) > 1e-9 * std::max(1.0, std::abs(cpk_true))) {
    throw Error(ErrorCode::InfeasibleSpec, "spec solving failed for '" + id + "'");
  }
  return p;
}

namespace {

DistFit draw_family_params(DistFamily family, Rng& rng) {
  DistFit d;
  d.family = family;
  switch (family) {
    case DistFamily::normal: {
      d.a = std::exp(rng.uniform(std::log(0.1), std::log(100.0)));
      const double cv = std::exp(rng.uniform(std::log(0.002), std::log(0.1)));
      d.b = d.a * cv;
      break;
    }
    case DistFamily::lognormal:
      d.a = rng.uniform(-1.0, 2.0);
      d.b = rng.uniform(0.05, 0.6);
      break;
    case DistFamily::weibull:
      d.a = rng.uniform(1.1, 5.0);
      d.b = std::exp(rng.uniform(std::log(0.5), std::log(50.0)));
      break;
    case DistFamily::logistic: {
      d.a = std::exp(rng.uniform(std::log(0.1), std::log(100.0)));
      const double cv = std::exp(rng.uniform(std::log(0.002), std::log(0.1)));
      d.b = d.a * cv * 0.55132889542179204776;  // sd * sqrt(3)/pi
      break;
    }
  }
  return d;
}

}  // namespace

namespace {

std::size_t weighted_index(const std::vector<double>& weights, std::size_t n, Rng& rng) {
  if (weights.size() != n) return rng.uniform_index(n);
  double total = 0.0;
  for (double w : weights) total += w;
  double u = rng.uniform(0.0, total);
  for (std::size_t i = 0; i < n; ++i) {
    u -= weights[i];
    if (u < 0.0) return i;
  }
  return n - 1;
}

}  // namespace

std::vector<SimProcess> generate_processes(const SimConfig& cfg, std::uint64_t seed) {
  if (cfg.families.empty() || cfg.n_grid.empty()) {
    throw Error(ErrorCode::InvalidConfig, "families and n_grid must be nonempty");
  }
  Rng rng(seed);
  std::vector<SimProcess> processes;
  processes.reserve(static_cast<std::size_t>(cfg.n_outer));
  for (int i = 0; i < cfg.n_outer; ++i) {
    const DistFamily family =
        cfg.families[weighted_index(cfg.family_weights, cfg.families.size(), rng)];
    const DistFit dist = draw_family_params(family, rng);
    const std::size_t n = cfg.n_grid[weighted_index(cfg.n_weights, cfg.n_grid.size(), rng)];

    // `near_mass` of the margin distribution sits in [-0.1, 0.1]; the
    // rest is uniform over the remainder of [margin_lo, margin_hi].
    const double left = std::max(0.0, -0.1 - cfg.margin_lo);
    const double right = std::max(0.0, cfg.margin_hi - 0.1);
    double margin;
    if (left + right <= 0.0 || rng.uniform01() < cfg.near_mass) {
      margin = rng.uniform(std::max(cfg.margin_lo, -0.1), std::min(cfg.margin_hi, 0.1));
    } else {
      const double u = rng.uniform(0.0, left + right);
      margin = (u < left) ? cfg.margin_lo + u : 0.1 + (u - left);
    }

    const bool bilateral = rng.uniform01() < cfg.bilateral_frac;
    const double slack = rng.uniform(0.05, 0.6);
    const bool upper_binding = rng.uniform01() < 0.5;
    char id[16];
    std::snprintf(id, sizeof(id), "P%04d", i);
    processes.push_back(make_process(id, dist, n, cfg.c0 + margin, bilateral, slack,
                                     upper_binding));
  }
  return processes;
}

double oracle_risk(const SimProcess& process, int n_inner, double c0,
                   EstimatorPolicy policy, std::uint64_t seed) {
  if (n_inner < 100) {
    throw Error(ErrorCode::InvalidConfig, "oracle estimation needs n_inner >= 100");
  }
  Rng rng(seed);
  int below = 0;
  for (int k = 0; k < n_inner; ++k) {
    const DimensionSample replicate =
        as_sample(process.id, draw_dataset(process.dist, process.n, rng), process.spec);
    const CapabilityEstimate est = analyze_sample(replicate, policy);
    below += label_hard(est.cpk_hat, c0);
  }
  return static_cast<double>(below) / static_cast<double>(n_inner);
}

namespace {

struct HalfSplit {
  std::vector<double> half_a;
  std::vector<double> half_b;
};

HalfSplit split_halves(std::span<const double> values, Rng& rng) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng.uniform_index(i)]);
  }
  const std::size_t half = (values.size() + 1) / 2;
  HalfSplit out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    (i < half ? out.half_a : out.half_b).push_back(values[order[i]]);
  }
  return out;
}

/// Each resample goes through the full production estimation path
/// (normality test and method selection included), so the target sees
/// risk coming from estimator-path switching, not just sampling spread.
double bootstrap_fail_fraction(const DimensionSample& sample, int n_boot, double c0,
                               EstimatorPolicy policy, Rng& rng,
                               std::size_t resample_size) {
  const std::size_t n = sample.values.size();
  DimensionSample resample;
  resample.dim_id = sample.dim_id;
  resample.spec = sample.spec;
  resample.values.resize(resample_size);
  int fails = 0;
  for (int b = 0; b < n_boot; ++b) {
    bool done = false;
    for (int attempt = 0; attempt < 10 && !done; ++attempt) {
      for (std::size_t i = 0; i < resample_size; ++i) {
        resample.values[i] = sample.values[rng.uniform_index(n)];
      }
      try {
        fails += label_hard(analyze_sample(resample, policy).cpk_hat, c0);
        done = true;
      } catch (const Error&) {
        // degenerate resample; redraw
      }
    }
    if (!done) {
      throw Error(ErrorCode::DegenerateBootstrap,
                  "soft-target resample retries exhausted for '" + sample.dim_id + "'");
    }
  }
  return static_cast<double>(fails) / static_cast<double>(n_boot);
}

}  // namespace

TrainRow build_training_row(const DimensionSample& sample, int n_boot, double c0,
                            double epsilon_near, EstimatorPolicy policy,
                            std::uint64_t seed, bool same_sample) {
  sample.validate();
  Rng rng(seed);

  DimensionSample feat_sample, target_sample;
  if (same_sample) {
    feat_sample = sample;
    target_sample = sample;
  } else {
    HalfSplit halves = split_halves(sample.values, rng);
    if (halves.half_a.size() < 8 || halves.half_b.size() < 8) {
      throw Error(ErrorCode::TooFewSamples,
                  "split-sample targets need at least 8 values per half");
    }
    feat_sample = as_sample(sample.dim_id, std::move(halves.half_a), sample.spec);
    target_sample = as_sample(sample.dim_id, std::move(halves.half_b), sample.spec);
  }

  const CapabilityEstimate est = analyze_sample(feat_sample, policy);
  const EstimatorRoute route_a = EstimatorRoute::from_estimate(est);
  const double se = bootstrap_se(feat_sample, n_boot, route_a, rng.raw());
  const BaselineRisk base = baseline_risk(est.cpk_hat, se, c0);

  const double y_soft = bootstrap_fail_fraction(target_sample, n_boot, c0, policy, rng,
                                                target_sample.values.size());

  TrainRow row;
  row.dim_id = sample.dim_id;
  row.x = extract_features(feat_sample, est);
  row.z_stat = base.z_stat;
  row.target = y_soft;
  row.near_flag = std::abs(est.cpk_hat - c0) <= epsilon_near;
  row.pos_flag = y_soft >= 0.5;
  row.cpk_hat = est.cpk_hat;
  row.se = se;
  return row;
}

double build_soft_targets(const DimensionSample& sample, int n_boot, double c0,
                          std::uint64_t seed) {
  const TrainRow row = build_training_row(sample, n_boot, c0, 0.1,
                                          EstimatorPolicy::auto_select, seed);
  return row.target;
}

std::vector<SplitIndices> leakfree_splits(std::span<const std::string> dim_ids, int k_splits,
                                          const std::array<double, 3>& ratios,
                                          std::uint64_t seed) {
  if (dim_ids.empty()) {
    throw Error(ErrorCode::EmptyInput, "no rows to split");
  }
  if (k_splits < 1) {
    throw Error(ErrorCode::InvalidConfig, "k_splits must be >= 1");
  }
  const double ratio_sum = ratios[0] + ratios[1] + ratios[2];
  if (!(ratio_sum > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "split ratios must sum to a positive value");
  }

  // group rows by dim_id, first appearance order
  std::vector<std::string> groups;
  std::vector<std::vector<std::size_t>> group_rows;
  for (std::size_t i = 0; i < dim_ids.size(); ++i) {
    auto it = std::find(groups.begin(), groups.end(), dim_ids[i]);
    if (it == groups.end()) {
      groups.push_back(dim_ids[i]);
      group_rows.emplace_back();
      it = groups.end() - 1;
    }
    group_rows[static_cast<std::size_t>(it - groups.begin())].push_back(i);
  }

  const double total = static_cast<double>(dim_ids.size());
  std::array<double, 3> capacity{};
  for (int p = 0; p < 3; ++p) capacity[p] = total * ratios[p] / ratio_sum;
  const double max_capacity = *std::max_element(capacity.begin(), capacity.end());
  for (const auto& rows : group_rows) {
    if (static_cast<double>(rows.size()) > max_capacity) {
      throw Error(ErrorCode::GroupTooLarge,
                  "a dim_id group does not fit in any partition");
    }
  }

  std::vector<SplitIndices> splits;
  splits.reserve(static_cast<std::size_t>(k_splits));
  for (int s = 0; s < k_splits; ++s) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(s)));
    std::vector<std::size_t> order(groups.size());
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng.uniform_index(i)]);
    }
    std::array<double, 3> remaining = capacity;
    SplitIndices split;
    for (std::size_t g : order) {
      // largest remaining relative capacity takes the group
      int best = 0;
      double best_room = -1e300;
      for (int p = 0; p < 3; ++p) {
        if (capacity[p] <= 0.0) continue;
        const double room = remaining[p] / capacity[p];
        if (room > best_room) {
          best_room = room;
          best = p;
        }
      }
      auto& dest = (best == 0) ? split.train : (best == 1) ? split.val : split.test;
      for (std::size_t row : group_rows[g]) dest.push_back(row);
      remaining[best] -= static_cast<double>(group_rows[g].size());
    }
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.val.begin(), split.val.end());
    std::sort(split.test.begin(), split.test.end());
    splits.push_back(std::move(split));
  }
  return splits;
}

std::vector<std::size_t> near_filter(std::span<const OracleRecord> records, double c0,
                                     double epsilon, NearMode mode) {
  std::vector<double> cpk(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    cpk[i] = mode == NearMode::by_true ? records[i].process.cpk_true
                                       : records[i].est.cpk_hat;
  }
  return near_filter(cpk, c0, epsilon);
}

NestedMcResult run_nested_mc(const SimConfig& cfg, std::uint64_t seed) {
  NestedMcResult result;
  const std::vector<SimProcess> processes = generate_processes(cfg, seed);

  result.records.reserve(processes.size());
  for (std::size_t i = 0; i < processes.size(); ++i) {
    const SimProcess& proc = processes[i];
    OracleRecord rec;
    rec.process = proc;

    Rng obs_rng(sub_seed(seed, i, kObserved));
    rec.observed = draw_dataset(proc.dist, proc.n, obs_rng);
    const DimensionSample observed = as_sample(proc.id, rec.observed, proc.spec);
    rec.est = analyze_sample(observed, cfg.policy);
    rec.se = bootstrap_se(observed, cfg.n_boot, EstimatorRoute::from_estimate(rec.est),
                          sub_seed(seed, i, kBoot));
    const BaselineRisk base = baseline_risk(rec.est.cpk_hat, rec.se, cfg.c0);
    rec.pi_stat = base.pi_stat;
    rec.z_stat = base.z_stat;
    rec.x = extract_features(observed, rec.est);

    rec.pi_true = oracle_risk(proc, cfg.n_inner, cfg.c0, cfg.policy, sub_seed(seed, i, kInner));
    rec.near_flag = std::abs(proc.cpk_true - cfg.c0) <= cfg.epsilon_near;

    // Supervision: the record's own observables as inputs; the target is
    // the bootstrap fail fraction of a held-out half, resampled at the
    // full sample size so it estimates risk on the oracle's scale. The
    // oracle itself stays strictly out of training.
    {
      Rng soft_rng(sub_seed(seed, i, kSoft));
      HalfSplit halves = split_halves(observed.values, soft_rng);
      DimensionSample held_out = as_sample(proc.id, std::move(halves.half_b), proc.spec);
      const double y_soft = bootstrap_fail_fraction(held_out, cfg.n_boot, cfg.c0, cfg.policy,
                                                    soft_rng, observed.values.size());
      rec.soft_row.dim_id = proc.id;
      rec.soft_row.x = rec.x;
      rec.soft_row.z_stat = rec.z_stat;
      rec.soft_row.target = y_soft;
      rec.soft_row.near_flag = std::abs(rec.est.cpk_hat - cfg.c0) <= cfg.epsilon_near;
      rec.soft_row.pos_flag = y_soft >= 0.5;
      rec.soft_row.cpk_hat = rec.est.cpk_hat;
      rec.soft_row.se = rec.se;
    }
    result.records.push_back(std::move(rec));
  }

  // Processes are the evaluation population: every model is scored on
  // all of them against the oracle, which training never sees. A
  // group-aware holdout only serves hyperparameter selection.
  std::vector<std::string> ids;
  ids.reserve(result.records.size());
  for (const auto& rec : result.records) ids.push_back(rec.process.id);
  result.split = leakfree_splits(ids, 1, {0.8, 0.2, 0.0}, derive_seed(seed, 0xA11CEull))[0];
  result.split.test.resize(result.records.size());
  std::iota(result.split.test.begin(), result.split.test.end(), 0);

  auto full_sample_row = [&](const OracleRecord& rec) {
    TrainRow row;
    row.dim_id = rec.process.id;
    row.x = rec.x;
    row.z_stat = rec.z_stat;
    row.target = static_cast<double>(label_hard(rec.est.cpk_hat, cfg.c0));
    row.near_flag = std::abs(rec.est.cpk_hat - cfg.c0) <= cfg.epsilon_near;
    row.pos_flag = row.target >= 0.5;
    row.cpk_hat = rec.est.cpk_hat;
    row.se = rec.se;
    return row;
  };

  Dataset hard_train, hard_val, soft_train, soft_val;
  for (std::size_t i : result.split.train) {
    hard_train.push_back(full_sample_row(result.records[i]));
    soft_train.push_back(result.records[i].soft_row);
  }
  for (std::size_t i : result.split.val) {
    hard_val.push_back(full_sample_row(result.records[i]));
    soft_val.push_back(result.records[i].soft_row);
  }

  // fixed mild configuration for the hard-label comparator; grid search
  // against 0/1 targets would reward saturation, not calibration
  TrainConfig hard_cfg;
  hard_cfg.loss = LossKind::bce;
  hard_cfg.anchor_mode = AnchorMode::anchored;
  hard_cfg.alpha_r = 0.1;
  hard_cfg.lambda2 = 1.0;
  hard_cfg.weight_pos_mult = 1.0;  // 0/1 targets + pos upweighting would
                                   // just shift every prediction upward
  hard_cfg.c0 = cfg.c0;
  hard_cfg.epsilon_near = cfg.epsilon_near;

  TrainConfig soft_cfg = hard_cfg;
  soft_cfg.loss = LossKind::soft_ce;

  TrainConfig free_cfg = soft_cfg;
  free_cfg.anchor_mode = AnchorMode::free;

  const ResidualModel v3 = train(hard_train, hard_val, hard_cfg);
  const ResidualModel uccap_anchored = train(soft_train, soft_val, soft_cfg);
  const ResidualModel uccap_free = train(soft_train, soft_val, free_cfg);
  result.fit_v3 = v3;
  result.fit_anchored = uccap_anchored;
  result.fit_free = uccap_free;

  // score on the evaluation population against the oracle
  std::vector<double> pi_true, y_true;
  std::vector<OracleRecord> test_records;
  for (std::size_t i : result.split.test) {
    const OracleRecord& rec = result.records[i];
    pi_true.push_back(rec.pi_true);
    y_true.push_back(rec.process.cpk_true < cfg.c0 ? 1.0 : 0.0);
    test_records.push_back(rec);
  }
  const std::vector<std::size_t> near_idx =
      near_filter(test_records, cfg.c0, cfg.epsilon_near, NearMode::by_true);

  auto eval_model = [&](const std::string& name, auto&& predictor) {
    ModelEval eval;
    eval.name = name;
    for (std::size_t i : result.split.test) {
      eval.pred.push_back(predictor(result.records[i]));
    }
    eval.report = calibration_report(eval.pred, pi_true, y_true, near_idx, 0.5);
    return eval;
  };

  result.models.push_back(
      eval_model("baseline", [](const OracleRecord& r) { return r.pi_stat; }));
  result.models.push_back(eval_model("v3_hard", [&](const OracleRecord& r) {
    return predict(v3, r.z_stat, r.x);
  }));
  result.models.push_back(eval_model("uccap_free", [&](const OracleRecord& r) {
    return predict(uccap_free, r.z_stat, r.x);
  }));
  result.models.push_back(eval_model("uccap_anchored", [&](const OracleRecord& r) {
    return predict(uccap_anchored, r.z_stat, r.x);
  }));
  return result;
}

}  // namespace uccap
