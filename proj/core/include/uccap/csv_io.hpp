#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uccap/capability.hpp"
#include "uccap/risk_model.hpp"
#include "uccap/simulation.hpp"
#include "uccap/types.hpp"

namespace uccap {

/// Toolkit-wide run configuration; all defaults match the deployed
/// conventions (c0 1.33, epsilon 0.1, 100 bootstrap resamples, accept
/// at pi <= 0.5).
struct RunConfig {
  double c0 = 1.33;
  double epsilon_near = 0.1;
  double epsilon_clip = 1e-6;
  int n_boot = 100;
  double alpha_decision = 0.5;
  std::optional<double> c_fa;  // when both costs are present they define
  std::optional<double> c_fr;  // alpha_decision = c_fr / (c_fa + c_fr)
  EstimatorPolicy estimator_policy = EstimatorPolicy::auto_select;
  std::uint64_t seed = 1;

  // training
  LossKind loss = LossKind::soft_ce;
  AnchorMode anchor_mode = AnchorMode::anchored;
  std::optional<double> alpha_r;  // unset: grid search
  std::optional<double> lambda2;  // unset: grid search
  double weight_near = 3.0;
  double weight_pos_mult = 2.0;
  double weight_cap = 10.0;
  bool same_sample_targets = false;  // ablation mode, potentially circular

  // leak-free evaluation
  int k_splits = 10;
  std::array<double, 3> split_ratios = {0.6, 0.2, 0.2};

  // simulation
  SimConfig sim;

  double effective_alpha_decision() const;
};

RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

/// Long-format measurement CSV with header dim_id,value,lsl,usl,nominal;
/// one row per measurement, spec fields constant within a dim_id.
/// Returns samples grouped by dimension, row order preserved, sorted by
/// dim_id.
std::vector<DimensionSample> ingest_csv(const std::string& path);

/// Full-precision decimal rendering (round-trips through parse exactly).
std::string format_double(double v);

}  // namespace uccap
