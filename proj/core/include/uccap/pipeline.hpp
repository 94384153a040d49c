#pragma once

#include <optional>
#include <string>
#include <vector>

#include "uccap/csv_io.hpp"
#include "uccap/decision.hpp"
#include "uccap/metrics.hpp"
#include "uccap/risk_model.hpp"
#include "uccap/simulation.hpp"

namespace uccap {

/// One analyzed dimension, ready for reporting.
struct AnalysisRow {
  DimensionSample sample;
  CapabilityEstimate est;
  double se = 0.0;
  double pi_stat = 0.5;
  double z_stat = 0.0;
  double residual = 0.0;
  double pi = 0.5;
  RiskAssessment assessment;
};

/// Per-dimension decision chain over a whole dataset; when no model is
/// supplied pi falls back to the statistical baseline.
std::vector<AnalysisRow> analyze_dataset(const std::vector<DimensionSample>& samples,
                                         const RunConfig& cfg,
                                         const ResidualModel* model);

/// `uccap analyze`: writes <out>/analysis.csv. Returns the path.
std::string cmd_analyze(const RunConfig& cfg, const std::string& data_csv,
                        const std::optional<std::string>& model_path,
                        const std::string& out_dir);

struct TrainOutput {
  std::string model_path;
  std::string log_path;
  ResidualModel model;
};

/// `uccap train`: builds supervision rows from the data (split-sample
/// soft targets unless configured otherwise), trains on a group-aware
/// train/val split, writes <out>/model.json and <out>/train_log.json.
TrainOutput cmd_train(const RunConfig& cfg, const std::string& data_csv,
                      const std::string& out_dir);

struct SimulateOutput {
  std::string records_path;
  std::string metrics_path;
  NestedMcResult result;
};

/// `uccap simulate`: nested Monte Carlo study; writes
/// <out>/oracle_records.csv and <out>/sim_metrics.json.
SimulateOutput cmd_simulate(const RunConfig& cfg, const std::string& out_dir);

struct LeakfreeModelSummary {
  std::string name;
  double brier_mean = 0.0, brier_sd = 0.0;
  double near_brier_mean = 0.0, near_brier_sd = 0.0;
  double ece_mean = 0.0, ece_sd = 0.0;
  double near_ece_mean = 0.0, near_ece_sd = 0.0;
  double logloss_mean = 0.0, logloss_sd = 0.0;
  std::vector<double> per_split_brier;
};

struct LeakfreeReport {
  int k_splits = 0;
  bool audit_clean = false;  // zero dim_id overlap across every pair
  std::vector<LeakfreeModelSummary> models;  // baseline, uccap, logistic_z
  // configured model's held-out predictions pooled across splits
  std::vector<double> pooled_pred;
  std::vector<double> pooled_target;
  std::vector<double> pooled_y_hard;
};

/// Aggregated leak-free protocol: k group-aware splits, per-split
/// training of the configured model and the logistic-with-baseline-input
/// comparator, metrics against held-out soft targets.
LeakfreeReport run_leakfree_evaluation(const std::vector<DimensionSample>& samples,
                                       const RunConfig& cfg);

struct EvaluateOutput {
  std::string report_path;
  std::string reliability_path;
  std::string pr_path;
};

/// `uccap evaluate`: with a model, scores it against bootstrap soft
/// targets on the data; without one, runs the aggregated leak-free
/// protocol (training inside each split). Writes <out>/evaluation.json
/// plus reliability-bin and PR-curve CSVs.
EvaluateOutput cmd_evaluate(const RunConfig& cfg, const std::string& data_csv,
                            const std::optional<std::string>& model_path,
                            const std::string& out_dir);

/// `uccap decide`: reads an analysis.csv, applies the accept rule at the
/// configured (or cost-derived) tolerance, writes <out>/decisions.csv.
std::string cmd_decide(const RunConfig& cfg, const std::string& assessments_csv,
                       const std::string& out_dir);

}  // namespace uccap
