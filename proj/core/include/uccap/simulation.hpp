#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "uccap/capability.hpp"
#include "uccap/distributions.hpp"
#include "uccap/metrics.hpp"
#include "uccap/risk_model.hpp"
#include "uccap/types.hpp"
#include "uccap/uncertainty.hpp"

namespace uccap {

/// A synthetic ground-truth process. cpk_true comes from the family's
/// true quantiles, never from samples.
struct SimProcess {
  std::string id;
  DistFit dist;  // true parameters (log_likelihood unused)
  std::size_t n = 32;
  SpecLimits spec;
  double cpk_true = 1.33;
};

struct SimConfig {
  int n_outer = 320;
  int n_inner = 250;
  int n_boot = 100;
  double c0 = 1.33;
  double epsilon_near = 0.1;
  std::vector<DistFamily> families = {DistFamily::normal, DistFamily::lognormal,
                                      DistFamily::weibull, DistFamily::logistic};
  std::vector<double> family_weights = {1.0, 1.0, 1.0, 1.0};
  std::vector<std::size_t> n_grid = {20, 32, 50, 100, 200};
  std::vector<double> n_weights = {1.0, 1.0, 1.0, 1.0, 1.0};
  double margin_lo = -0.4;
  double margin_hi = 0.6;
  double near_mass = 0.4;       // share of processes forced into |margin| <= 0.1
  double bilateral_frac = 0.7;  // remainder get a single-sided spec
  std::uint64_t seed = 1;
  EstimatorPolicy policy = EstimatorPolicy::auto_select;
};

/// Solve spec limits so the process's true quantile-based capability
/// equals `cpk_true`. `slack` widens the non-binding side of a bilateral
/// spec; `upper_binding` picks which side carries the target.
SimProcess make_process(const std::string& id, const DistFit& dist, std::size_t n,
                        double cpk_true, bool bilateral, double slack, bool upper_binding);

std::vector<SimProcess> generate_processes(const SimConfig& cfg, std::uint64_t seed);

/// Inner-loop oracle: fraction of n_inner fresh size-n datasets whose
/// estimate (same estimator policy as production analysis) falls below c0.
double oracle_risk(const SimProcess& process, int n_inner, double c0,
                   EstimatorPolicy policy, std::uint64_t seed);

/// Hard proxy label: 1 iff cpk_hat < c0.
inline int label_hard(double cpk_hat, double c0) { return cpk_hat < c0 ? 1 : 0; }

/// Split-sample soft target: the dimension's values are split into two
/// disjoint halves; the returned value is the fraction of n_boot
/// bootstrap resamples of half B whose capability falls below c0.
/// Half A carries the features for the matching training row.
double build_soft_targets(const DimensionSample& sample, int n_boot, double c0,
                          std::uint64_t seed);

/// Same split and bootstrap as build_soft_targets, returning the full
/// training row (half-A features/baseline, half-B target). Split-sample
/// construction is the default; same_sample = true is the ablation mode
/// whose targets share data with the features (flagged in reports).
TrainRow build_training_row(const DimensionSample& sample, int n_boot, double c0,
                            double epsilon_near, EstimatorPolicy policy,
                            std::uint64_t seed, bool same_sample = false);

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;
};

/// k group-aware partitions: every dim_id lands in exactly one of
/// train/val/test per split. `ratios` are row-count proportions.
std::vector<SplitIndices> leakfree_splits(std::span<const std::string> dim_ids, int k_splits,
                                          const std::array<double, 3>& ratios,
                                          std::uint64_t seed);

struct OracleRecord {
  SimProcess process;
  std::vector<double> observed;
  CapabilityEstimate est;
  double se = 0.0;
  double pi_stat = 0.5;
  double z_stat = 0.0;
  FeatureVector x{};
  double pi_true = 0.5;
  bool near_flag = false;  // |cpk_true - c0| <= epsilon
  TrainRow soft_row;       // split-sample supervision for this process
};

/// Near-threshold subset of oracle records: by_estimate keeps
/// |cpk_hat - c0| <= epsilon (the empirical protocol), by_true keeps
/// |cpk_true - c0| <= epsilon (the simulation protocol).
std::vector<std::size_t> near_filter(std::span<const OracleRecord> records, double c0,
                                     double epsilon, NearMode mode);

struct ModelEval {
  std::string name;
  std::vector<double> pred;  // aligned with the test index set
  CalibrationReport report;  // against pi_true on the test set
};

struct NestedMcResult {
  std::vector<OracleRecord> records;
  SplitIndices split;
  std::vector<ModelEval> models;  // baseline, v3_hard, uccap_free, uccap_anchored
  ResidualModel fit_v3;
  ResidualModel fit_free;
  ResidualModel fit_anchored;
};

/// Full nested Monte Carlo study: generate processes, estimate observed
/// capability and uncertainty, approximate oracle risk, train the
/// comparison models on leak-free process splits, and score everything
/// against pi_true. Training never sees pi_true.
NestedMcResult run_nested_mc(const SimConfig& cfg, std::uint64_t seed);

}  // namespace uccap
