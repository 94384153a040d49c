#include "uccap/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "uccap/errors.hpp"
#include "uccap/math.hpp"
#include "uccap/rng.hpp"

namespace uccap {

namespace {

using nlohmann::json;

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

std::ofstream open_out(const std::string& path) {
  std::filesystem::create_directories(std::filesystem::path(path).parent_path());
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::ParseError, "cannot write '" + path + "'");
  }
  return out;
}

std::string opt_field(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

json report_to_json(const CalibrationReport& rep) {
  json j;
  j["n"] = rep.n;
  j["brier"] = rep.brier;
  j["logloss"] = rep.logloss;
  j["ece"] = rep.ece;
  j["correlation"] = rep.correlation;
  j["roc_auc"] = rep.roc_auc ? json(*rep.roc_auc) : json(nullptr);
  j["pr_auc"] = rep.pr_auc ? json(*rep.pr_auc) : json(nullptr);
  j["accuracy"] = rep.accuracy;
  j["precision"] = rep.precision;
  j["recall"] = rep.recall;
  j["f1"] = rep.f1;
  j["false_accept"] = rep.false_accept;
  j["false_reject"] = rep.false_reject;
  j["near_n"] = rep.near_n;
  j["near_brier"] = rep.near_brier;
  j["near_logloss"] = rep.near_logloss;
  j["near_ece"] = rep.near_ece;
  j["near_recall"] = rep.near_recall;
  j["near_accuracy"] = rep.near_accuracy;
  return j;
}

void write_reliability_csv(const std::string& path, const std::vector<ReliabilityBin>& bins) {
  auto out = open_out(path);
  out << "bin_lo,bin_hi,mean_pred,mean_target,count\n";
  for (const auto& b : bins) {
    out << format_double(b.bin_lo) << ',' << format_double(b.bin_hi) << ','
        << format_double(b.mean_pred) << ',' << format_double(b.mean_target) << ','
        << b.count << '\n';
  }
}

void write_pr_csv(const std::string& path, const std::vector<PrPoint>& points) {
  auto out = open_out(path);
  out << "threshold,precision,recall\n";
  for (const auto& p : points) {
    out << format_double(p.threshold) << ',' << format_double(p.precision) << ','
        << format_double(p.recall) << '\n';
  }
}

}  // namespace

std::vector<AnalysisRow> analyze_dataset(const std::vector<DimensionSample>& samples,
                                         const RunConfig& cfg, const ResidualModel* model) {
  std::vector<AnalysisRow> rows;
  rows.reserve(samples.size());
  const DecisionPolicy policy{cfg.effective_alpha_decision(), 0.10, 0.90};
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const DimensionSample& sample = samples[i];
    AnalysisRow row;
    row.sample = sample;
    row.est = analyze_sample(sample, cfg.estimator_policy);
    row.se = bootstrap_se(sample, cfg.n_boot, EstimatorRoute::from_estimate(row.est),
                          derive_seed(cfg.seed, i));
    const BaselineRisk base =
        baseline_risk(row.est.cpk_hat, row.se, cfg.c0, cfg.epsilon_clip);
    row.pi_stat = base.pi_stat;
    row.z_stat = base.z_stat;
    if (model != nullptr) {
      const FeatureVector x = extract_features(sample, row.est);
      row.pi = predict(*model, row.z_stat, x);
      const FeatureVector xs = apply_standardizer(model->standardizer, x);
      double linear = model->bias;
      for (std::size_t j = 0; j < kFeatureDim; ++j) linear += model->theta[j] * xs[j];
      row.residual = model->alpha_r * linear;
    } else {
      row.pi = row.pi_stat;
      row.residual = 0.0;
    }
    row.assessment = decision_chain(sample.dim_id, row.pi, row.pi_stat, row.z_stat,
                                    row.residual, row.est,
                                    relative_position(sample, row.est), policy);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string cmd_analyze(const RunConfig& cfg, const std::string& data_csv,
                        const std::optional<std::string>& model_path,
                        const std::string& out_dir) {
  const std::vector<DimensionSample> samples = ingest_csv(data_csv);
  std::optional<ResidualModel> model;
  if (model_path) model = load_model(*model_path);
  const auto rows = analyze_dataset(samples, cfg, model ? &*model : nullptr);

  const std::string path = join_path(out_dir, "analysis.csv");
  auto out = open_out(path);
  out << "dim,lsl,usl,mean,sd,cpk,method,normality,best_dist,score,level,reason,action,"
         "pi_stat,z_stat,se,pi,model\n";
  const std::string model_tag = model ? model->schema_version : std::string("baseline-only");
  for (const auto& row : rows) {
    out << row.sample.dim_id << ',' << opt_field(row.sample.spec.lsl) << ','
        << opt_field(row.sample.spec.usl) << ',' << format_double(row.est.mean) << ','
        << format_double(row.est.sd) << ',' << format_double(row.est.cpk_hat) << ','
        << (row.est.method == CpkMethod::normal ? "normal" : "percentile") << ','
        << (row.est.normality_pass ? "Pass" : "Fail") << ','
        << dist_family_name(row.est.best_fit) << ','
        << format_double(row.assessment.score) << ','
        << risk_level_name(row.assessment.level) << ','
        << reason_name(row.assessment.reason) << ','
        << action_name(row.assessment.action) << ','
        << format_double(row.pi_stat) << ',' << format_double(row.z_stat) << ','
        << format_double(row.se) << ',' << format_double(row.pi) << ','
        << model_tag << '\n';
  }
  return path;
}

namespace {

/// Supervision rows for the empirical pipeline. Soft losses use the
/// split-sample bootstrap construction; hard BCE labels the full-sample
/// estimate against c0.
Dataset build_rows(const std::vector<DimensionSample>& samples, const RunConfig& cfg) {
  Dataset rows;
  rows.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const DimensionSample& sample = samples[i];
    if (cfg.loss == LossKind::bce) {
      const CapabilityEstimate est = analyze_sample(sample, cfg.estimator_policy);
      const double se = bootstrap_se(sample, cfg.n_boot,
                                     EstimatorRoute::from_estimate(est),
                                     derive_seed(cfg.seed, i));
      const BaselineRisk base = baseline_risk(est.cpk_hat, se, cfg.c0);
      TrainRow row;
      row.dim_id = sample.dim_id;
      row.x = extract_features(sample, est);
      row.z_stat = base.z_stat;
      row.target = static_cast<double>(label_hard(est.cpk_hat, cfg.c0));
      row.near_flag = std::abs(est.cpk_hat - cfg.c0) <= cfg.epsilon_near;
      row.pos_flag = row.target >= 0.5;
      row.cpk_hat = est.cpk_hat;
      row.se = se;
      rows.push_back(std::move(row));
    } else {
      rows.push_back(build_training_row(sample, cfg.n_boot, cfg.c0, cfg.epsilon_near,
                                        cfg.estimator_policy, derive_seed(cfg.seed, i),
                                        cfg.same_sample_targets));
    }
  }
  return rows;
}

TrainConfig train_config_from(const RunConfig& cfg) {
  TrainConfig tc;
  tc.loss = cfg.loss;
  tc.anchor_mode = cfg.anchor_mode;
  tc.alpha_r = cfg.alpha_r;
  tc.lambda2 = cfg.lambda2;
  tc.weight_near = cfg.weight_near;
  tc.weight_pos_mult = cfg.weight_pos_mult;
  tc.weight_cap = cfg.weight_cap;
  tc.epsilon_near = cfg.epsilon_near;
  tc.c0 = cfg.c0;
  tc.seed = cfg.seed;
  return tc;
}

Dataset subset(const Dataset& rows, const std::vector<std::size_t>& index) {
  Dataset out;
  out.reserve(index.size());
  for (std::size_t i : index) out.push_back(rows[i]);
  return out;
}

}  // namespace

TrainOutput cmd_train(const RunConfig& cfg, const std::string& data_csv,
                      const std::string& out_dir) {
  const std::vector<DimensionSample> samples = ingest_csv(data_csv);
  const Dataset rows = build_rows(samples, cfg);

  std::vector<std::string> ids;
  ids.reserve(rows.size());
  for (const auto& r : rows) ids.push_back(r.dim_id);
  const SplitIndices split =
      leakfree_splits(ids, 1, {0.8, 0.2, 0.0}, derive_seed(cfg.seed, 0x7EA1ull))[0];
  const Dataset train_rows = subset(rows, split.train);
  const Dataset val_rows = subset(rows, split.val);

  const ResidualModel model = train(train_rows, val_rows, train_config_from(cfg));

  TrainOutput out;
  out.model = model;
  out.model_path = join_path(out_dir, "model.json");
  std::filesystem::create_directories(out_dir);
  save_model(model, out.model_path);

  std::vector<double> val_pred, val_target;
  for (const auto& r : val_rows) {
    val_pred.push_back(predict(model, r.z_stat, r.x));
    val_target.push_back(r.target);
  }
  json log;
  log["n_dimensions"] = samples.size();
  log["n_train"] = train_rows.size();
  log["n_val"] = val_rows.size();
  log["loss"] = cfg.loss == LossKind::bce ? "bce"
               : cfg.loss == LossKind::brier ? "brier" : "soft_ce";
  log["anchor_mode"] = anchor_mode_name(model.anchor_mode);
  log["alpha_r"] = model.alpha_r;
  log["lambda2"] = model.lambda2;
  log["anchor_coef"] = model.anchor_coef;
  log["target_mode"] = cfg.loss == LossKind::bce ? "hard-label"
                       : cfg.same_sample_targets ? "same-sample (potentially circular)"
                                                 : "split-sample";
  if (!val_rows.empty()) {
    log["val_brier"] = brier(val_pred, val_target);
    log["val_logloss"] = logloss(val_pred, val_target);
  }
  out.log_path = join_path(out_dir, "train_log.json");
  auto log_out = open_out(out.log_path);
  log_out << log.dump(2) << "\n";
  return out;
}

SimulateOutput cmd_simulate(const RunConfig& cfg, const std::string& out_dir) {
  SimulateOutput out;
  out.result = run_nested_mc(cfg.sim, cfg.sim.seed);
  const NestedMcResult& res = out.result;

  out.records_path = join_path(out_dir, "oracle_records.csv");
  auto csv = open_out(out.records_path);
  csv << "dim_id,family,n,lsl,usl,cpk_true,cpk_hat,method,se,pi_stat,z_stat,pi_true,"
         "near_flag,split";
  for (const auto& model : res.models) csv << ",pred_" << model.name;
  csv << '\n';

  std::vector<std::string> membership(res.records.size(), "train");
  for (std::size_t i : res.split.val) membership[i] = "val";
  for (std::size_t i : res.split.test) membership[i] = "test";
  std::vector<std::size_t> test_pos(res.records.size(), 0);
  for (std::size_t k = 0; k < res.split.test.size(); ++k) test_pos[res.split.test[k]] = k;

  for (std::size_t i = 0; i < res.records.size(); ++i) {
    const OracleRecord& rec = res.records[i];
    const BaselineRisk base = baseline_risk(rec.est.cpk_hat, rec.se, cfg.sim.c0);
    csv << rec.process.id << ',' << dist_family_name(rec.process.dist.family) << ','
        << rec.process.n << ',' << opt_field(rec.process.spec.lsl) << ','
        << opt_field(rec.process.spec.usl) << ',' << format_double(rec.process.cpk_true)
        << ',' << format_double(rec.est.cpk_hat) << ','
        << (rec.est.method == CpkMethod::normal ? "normal" : "percentile") << ','
        << format_double(rec.se) << ',' << format_double(base.pi_stat) << ','
        << format_double(base.z_stat) << ',' << format_double(rec.pi_true) << ','
        << (rec.near_flag ? 1 : 0) << ',' << membership[i];
    for (const auto& model : res.models) {
      if (membership[i] == "test") {
        csv << ',' << format_double(model.pred[test_pos[i]]);
      } else {
        csv << ',';
      }
    }
    csv << '\n';
  }

  json metrics;
  metrics["n_outer"] = cfg.sim.n_outer;
  metrics["n_inner"] = cfg.sim.n_inner;
  metrics["n_boot"] = cfg.sim.n_boot;
  metrics["c0"] = cfg.sim.c0;
  metrics["seed"] = cfg.sim.seed;
  metrics["n_test"] = res.split.test.size();
  for (const auto& model : res.models) {
    metrics["models"][model.name] = report_to_json(model.report);
  }
  out.metrics_path = join_path(out_dir, "sim_metrics.json");
  auto mj = open_out(out.metrics_path);
  mj << metrics.dump(2) << "\n";
  return out;
}

namespace {

struct RunningStat {
  std::vector<double> values;
  void add(double v) { values.push_back(v); }
  double mean() const {
    double s = 0.0;
    for (double v : values) s += v;
    return values.empty() ? 0.0 : s / static_cast<double>(values.size());
  }
  double sd() const {
    if (values.size() < 2) return 0.0;
    const double m = mean();
    double ss = 0.0;
    for (double v : values) ss += (v - m) * (v - m);
    return std::sqrt(ss / (static_cast<double>(values.size()) - 1.0));
  }
};

struct SplitMetrics {
  RunningStat brier, near_brier, ece, near_ece, logloss;
};

void accumulate(SplitMetrics& acc, const CalibrationReport& rep) {
  acc.brier.add(rep.brier);
  acc.near_brier.add(rep.near_n > 0 ? rep.near_brier : rep.brier);
  acc.ece.add(rep.ece);
  acc.near_ece.add(rep.near_n > 0 ? rep.near_ece : rep.ece);
  acc.logloss.add(rep.logloss);
}

LeakfreeModelSummary summarize(const std::string& name, const SplitMetrics& acc) {
  LeakfreeModelSummary s;
  s.name = name;
  s.brier_mean = acc.brier.mean();
  s.brier_sd = acc.brier.sd();
  s.near_brier_mean = acc.near_brier.mean();
  s.near_brier_sd = acc.near_brier.sd();
  s.ece_mean = acc.ece.mean();
  s.ece_sd = acc.ece.sd();
  s.near_ece_mean = acc.near_ece.mean();
  s.near_ece_sd = acc.near_ece.sd();
  s.logloss_mean = acc.logloss.mean();
  s.logloss_sd = acc.logloss.sd();
  s.per_split_brier = acc.brier.values;
  return s;
}

}  // namespace

LeakfreeReport run_leakfree_evaluation(const std::vector<DimensionSample>& samples,
                                       const RunConfig& cfg) {
  const Dataset rows = build_rows(samples, cfg);
  std::vector<std::string> ids;
  ids.reserve(rows.size());
  for (const auto& r : rows) ids.push_back(r.dim_id);
  const auto splits =
      leakfree_splits(ids, cfg.k_splits, cfg.split_ratios, derive_seed(cfg.seed, 0x51EEull));

  LeakfreeReport report;
  report.k_splits = cfg.k_splits;
  report.audit_clean = true;

  SplitMetrics acc_baseline, acc_uccap, acc_logistic;
  for (const auto& split : splits) {
    // audit: a dim_id must never appear on two sides of any pair
    auto ids_of = [&](const std::vector<std::size_t>& index) {
      std::vector<std::string> out;
      for (std::size_t i : index) out.push_back(rows[i].dim_id);
      std::sort(out.begin(), out.end());
      return out;
    };
    const auto tr = ids_of(split.train), va = ids_of(split.val), te = ids_of(split.test);
    auto overlaps = [](const std::vector<std::string>& a, const std::vector<std::string>& b) {
      std::vector<std::string> inter;
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(inter));
      return !inter.empty();
    };
    if (overlaps(tr, va) || overlaps(tr, te) || overlaps(va, te)) {
      report.audit_clean = false;
    }

    const Dataset train_rows = subset(rows, split.train);
    const Dataset val_rows = subset(rows, split.val);
    const Dataset test_rows = subset(rows, split.test);
    if (train_rows.empty() || test_rows.empty()) continue;

    const ResidualModel uccap = train(train_rows, val_rows, train_config_from(cfg));

    // comparator: ordinary logistic regression on the features with the
    // baseline log-odds as one more learned input
    TrainConfig logistic_cfg = train_config_from(cfg);
    logistic_cfg.anchor_mode = AnchorMode::free;
    logistic_cfg.alpha_r = 1.0;
    const ResidualModel logistic_z = train(train_rows, val_rows, logistic_cfg);

    std::vector<double> target, y_hard, cpk, p_base, p_uccap, p_logistic;
    for (const auto& r : test_rows) {
      target.push_back(r.target);
      y_hard.push_back(r.target >= 0.5 ? 1.0 : 0.0);
      cpk.push_back(r.cpk_hat);
      p_base.push_back(sigmoid(r.z_stat));
      p_uccap.push_back(predict(uccap, r.z_stat, r.x));
      p_logistic.push_back(predict(logistic_z, r.z_stat, r.x));
    }
    const auto near_idx = near_filter(cpk, cfg.c0, cfg.epsilon_near);
    const double alpha = cfg.effective_alpha_decision();
    accumulate(acc_baseline, calibration_report(p_base, target, y_hard, near_idx, alpha));
    accumulate(acc_uccap, calibration_report(p_uccap, target, y_hard, near_idx, alpha));
    accumulate(acc_logistic, calibration_report(p_logistic, target, y_hard, near_idx, alpha));
    report.pooled_pred.insert(report.pooled_pred.end(), p_uccap.begin(), p_uccap.end());
    report.pooled_target.insert(report.pooled_target.end(), target.begin(), target.end());
    report.pooled_y_hard.insert(report.pooled_y_hard.end(), y_hard.begin(), y_hard.end());
  }

  report.models.push_back(summarize("baseline", acc_baseline));
  report.models.push_back(summarize("uccap", acc_uccap));
  report.models.push_back(summarize("logistic_z", acc_logistic));
  return report;
}

EvaluateOutput cmd_evaluate(const RunConfig& cfg, const std::string& data_csv,
                            const std::optional<std::string>& model_path,
                            const std::string& out_dir) {
  const std::vector<DimensionSample> samples = ingest_csv(data_csv);
  EvaluateOutput out;
  out.report_path = join_path(out_dir, "evaluation.json");
  out.reliability_path = join_path(out_dir, "reliability_bins.csv");
  out.pr_path = join_path(out_dir, "pr_curve.csv");
  json doc;

  if (model_path) {
    const ResidualModel model = load_model(*model_path);
    const Dataset rows = build_rows(samples, cfg);
    std::vector<double> pred, target, y_hard, cpk;
    for (const auto& r : rows) {
      pred.push_back(predict(model, r.z_stat, r.x));
      target.push_back(r.target);
      y_hard.push_back(r.target >= 0.5 ? 1.0 : 0.0);
      cpk.push_back(r.cpk_hat);
    }
    const auto near_idx = near_filter(cpk, cfg.c0, cfg.epsilon_near);
    const CalibrationReport rep = calibration_report(
        pred, target, y_hard, near_idx, cfg.effective_alpha_decision());
    doc["mode"] = "model-evaluation";
    doc["target_mode"] = cfg.loss == LossKind::bce ? "hard-label"
                         : cfg.same_sample_targets ? "same-sample (potentially circular)"
                                                   : "split-sample";
    doc["report"] = report_to_json(rep);
    write_reliability_csv(out.reliability_path, rep.bins);
    write_pr_csv(out.pr_path, pr_curve(pred, y_hard));
  } else {
    const LeakfreeReport rep = run_leakfree_evaluation(samples, cfg);
    doc["mode"] = "leak-free-protocol";
    doc["k_splits"] = rep.k_splits;
    doc["audit_clean"] = rep.audit_clean;
    for (const auto& m : rep.models) {
      json jm;
      jm["brier_mean"] = m.brier_mean;
      jm["brier_sd"] = m.brier_sd;
      jm["near_brier_mean"] = m.near_brier_mean;
      jm["near_brier_sd"] = m.near_brier_sd;
      jm["ece_mean"] = m.ece_mean;
      jm["ece_sd"] = m.ece_sd;
      jm["near_ece_mean"] = m.near_ece_mean;
      jm["near_ece_sd"] = m.near_ece_sd;
      jm["logloss_mean"] = m.logloss_mean;
      jm["logloss_sd"] = m.logloss_sd;
      jm["per_split_brier"] = m.per_split_brier;
      doc["models"][m.name] = jm;
    }
    // plotting data from the configured model's pooled held-out predictions
    if (!rep.pooled_pred.empty()) {
      write_reliability_csv(out.reliability_path,
                            reliability_bins(rep.pooled_pred, rep.pooled_target));
      write_pr_csv(out.pr_path, pr_curve(rep.pooled_pred, rep.pooled_y_hard));
      doc["pooled_n"] = rep.pooled_pred.size();
    } else {
      write_reliability_csv(out.reliability_path, {});
      write_pr_csv(out.pr_path, {});
    }
  }
  auto jout = open_out(out.report_path);
  jout << doc.dump(2) << "\n";
  return out;
}

std::string cmd_decide(const RunConfig& cfg, const std::string& assessments_csv,
                       const std::string& out_dir) {
  std::ifstream in(assessments_csv);
  if (!in) {
    throw Error(ErrorCode::ParseError, "cannot open '" + assessments_csv + "'");
  }
  std::string header;
  if (!std::getline(in, header)) {
    throw Error(ErrorCode::ParseError, "empty assessments file");
  }
  if (!header.empty() && header.back() == '\r') header.pop_back();
  std::vector<std::string> columns;
  {
    std::istringstream hs(header);
    std::string col;
    while (std::getline(hs, col, ',')) columns.push_back(col);
  }
  const auto dim_it = std::find(columns.begin(), columns.end(), "dim");
  const auto pi_it = std::find(columns.begin(), columns.end(), "pi");
  if (dim_it == columns.end() || pi_it == columns.end()) {
    throw Error(ErrorCode::ParseError, "assessments file needs 'dim' and 'pi' columns");
  }
  const std::size_t dim_col = static_cast<std::size_t>(dim_it - columns.begin());
  const std::size_t pi_col = static_cast<std::size_t>(pi_it - columns.begin());

  const double alpha = cfg.effective_alpha_decision();
  const std::string path = join_path(out_dir, "decisions.csv");
  auto out = open_out(path);
  out << "dim,pi,alpha,accept\n";
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string f;
    while (std::getline(ls, f, ',')) fields.push_back(f);
    if (fields.size() <= std::max(dim_col, pi_col)) {
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(line_no) + ": too few fields");
    }
    double pi;
    try {
      pi = std::stod(fields[pi_col]);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) +
                                             ": bad pi value '" + fields[pi_col] + "'");
    }
    out << fields[dim_col] << ',' << format_double(pi) << ',' << format_double(alpha)
        << ',' << (decide(pi, alpha) ? 1 : 0) << '\n';
  }
  return path;
}

}  // namespace uccap
