#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "uccap/features.hpp"
#include "uccap/types.hpp"

namespace uccap {

enum class AnchorMode { anchored, free };
enum class LossKind { bce, soft_ce, brier, composite };

const char* anchor_mode_name(AnchorMode m);
AnchorMode anchor_mode_from_name(const std::string& name);

/// Additive log-odds residual model anchored on the baseline log-odds:
///   pi = sigmoid(anchor_coef * z_stat + alpha_r * (theta . x_std + bias)).
/// anchored mode pins anchor_coef at exactly 1; free mode learns it.
struct ResidualModel {
  std::string schema_version = kFeatureSchemaVersion;
  AnchorMode anchor_mode = AnchorMode::anchored;
  double anchor_coef = 1.0;
  double alpha_r = 0.1;
  double lambda2 = 0.1;
  std::vector<double> theta = std::vector<double>(kFeatureDim, 0.0);
  double bias = 0.0;
  Standardizer standardizer;
  double c0 = 1.33;
};

/// Clipped to [1e-12, 1 - 1e-12]. Standardization happens inside.
double predict(const ResidualModel& model, double z_stat, const FeatureVector& x);

/// One supervised example. `target` is a hard label in {0,1} or a
/// bootstrap soft target in [0,1]; flags drive the sample weights.
struct TrainRow {
  std::string dim_id;
  FeatureVector x{};
  double z_stat = 0.0;
  double target = 0.0;
  bool near_flag = false;
  bool pos_flag = false;
  double cpk_hat = 0.0;
  double se = 1.0;
};
using Dataset = std::vector<TrainRow>;

struct TrainConfig {
  LossKind loss = LossKind::soft_ce;
  AnchorMode anchor_mode = AnchorMode::anchored;
  std::optional<double> alpha_r;   // fixed value, or grid search when unset
  std::optional<double> lambda2;   // fixed value, or grid search when unset
  double lambda_cap = 0.0;         // composite objective only
  int epochs = 20000;
  double learning_rate = 0.5;
  int warmup_epochs = 0;           // optional low-rate lead-in
  double warmup_learning_rate = 0.0;
  double weight_near = 3.0;
  double weight_pos_mult = 2.0;
  double weight_cap = 10.0;
  double epsilon_near = 0.1;
  double c0 = 1.33;
  std::uint64_t seed = 0;
  double grad_tol = 1e-10;
  // test hooks; production training always starts at the baseline
  std::optional<std::vector<double>> init_theta;
  std::optional<double> init_bias;
  std::optional<double> init_anchor;
};

inline constexpr double kResidualScaleGrid[] = {0.05, 0.1, 0.2, 0.3, 0.5};
inline constexpr double kLambda2Grid[] = {0.01, 0.1, 1.0, 10.0};

/// base 1, x weight_near on near-threshold rows, additionally
/// x weight_pos_mult on positive rows, clipped at weight_cap.
std::vector<double> sample_weights(const Dataset& rows, const TrainConfig& cfg);

/// Weighted summed losses. Predictions are clipped at 1e-12 inside the
/// logs; lengths must agree.
double loss_bce(std::span<const double> pred, std::span<const double> y,
                std::span<const double> weights);
double loss_soft_ce(std::span<const double> pred, std::span<const double> y_soft,
                    std::span<const double> weights);
double loss_brier(std::span<const double> pred, std::span<const double> y_soft,
                  std::span<const double> weights);
double loss_l2(std::span<const double> theta, double lambda2);
double loss_composite(std::span<const double> pred, std::span<const double> y,
                      std::span<const double> c_learned, std::span<const double> c_stat,
                      double lambda_cap, std::span<const double> weights);

/// Parameters of the residual head as one flat point, for the optimizer
/// and for finite-difference verification.
struct ParamPoint {
  std::vector<double> theta = std::vector<double>(kFeatureDim, 0.0);
  double bias = 0.0;
  double anchor_coef = 1.0;
};

/// A row already standardized and weighted, ready for the optimizer.
struct PreparedRow {
  FeatureVector x_std{};
  double z_stat = 0.0;
  double target = 0.0;
  double weight = 1.0;
};

/// Mean-scaled training objective (weighted loss plus L2, divided by the
/// total weight) and, when `grad` is non-null, its analytic gradient.
/// In anchored mode the anchor component of the gradient is forced to 0.
double objective_and_gradient(const ParamPoint& p, std::span<const PreparedRow> rows,
                              LossKind loss, AnchorMode mode, double alpha_r,
                              double lambda2, ParamPoint* grad);

/// Full-batch gradient descent with fixed learning rate; deterministic.
/// Grid search over alpha_r (and lambda2 when unset) selects by
/// near-threshold Brier on the validation rows, tie-broken by log loss
/// and then overall Brier.
ResidualModel train(const Dataset& train_rows, const Dataset& val_rows,
                    const TrainConfig& cfg);

void save_model(const ResidualModel& model, const std::string& path);
ResidualModel load_model(const std::string& path);

/// Latent-capability variant: a second linear head learns an offset on
/// the capability scale, c_learned = cpk_hat + g . x_std + g_bias, and
/// risk comes from the probit form pi = Phi((c0 - c_learned)/se).
/// Off by default; trained only under the composite objective.
struct LatentHead {
  std::vector<double> g = std::vector<double>(kFeatureDim, 0.0);
  double g_bias = 0.0;
};

struct LatentPrediction {
  double c_learned = 0.0;
  double pi = 0.5;
};

LatentPrediction predict_latent(const LatentHead& head, double cpk_hat, double se,
                                double c0, const FeatureVector& x_std);

struct LatentRow {
  FeatureVector x_std{};
  double cpk_hat = 0.0;
  double se = 1.0;
  double c_stat = 0.0;
  double target = 0.0;
  double weight = 1.0;
};

double latent_objective_and_gradient(const LatentHead& head, std::span<const LatentRow> rows,
                                     double c0, double lambda_cap, LatentHead* grad);

LatentHead train_latent(std::span<const LatentRow> rows, double c0, double lambda_cap,
                        int epochs, double learning_rate);

}  // namespace uccap
