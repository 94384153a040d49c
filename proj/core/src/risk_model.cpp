#include "uccap/risk_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "uccap/errors.hpp"
#include "uccap/math.hpp"

namespace uccap {

namespace {
constexpr double kPredClip = 1e-12;
constexpr double kLogClip = 1e-12;

double safe_log(double p) { return std::log(std::max(p, kLogClip)); }
}  // namespace

const char* anchor_mode_name(AnchorMode m) {
  return m == AnchorMode::anchored ? "anchored" : "free";
}

AnchorMode anchor_mode_from_name(const std::string& name) {
  if (name == "anchored") return AnchorMode::anchored;
  if (name == "free") return AnchorMode::free;
  throw Error(ErrorCode::CorruptFile, "unknown anchor mode '" + name + "'");
}

double predict(const ResidualModel& model, double z_stat, const FeatureVector& x) {
  if (model.theta.size() != kFeatureDim || model.schema_version != kFeatureSchemaVersion) {
    throw Error(ErrorCode::SchemaMismatch, "model does not match the feature schema");
  }
  const FeatureVector xs = apply_standardizer(model.standardizer, x);
  double residual = model.bias;
  for (std::size_t j = 0; j < kFeatureDim; ++j) residual += model.theta[j] * xs[j];
  const double t = model.anchor_coef * z_stat + model.alpha_r * residual;
  return clip(sigmoid(t), kPredClip, 1.0 - kPredClip);
}

std::vector<double> sample_weights(const Dataset& rows, const TrainConfig& cfg) {
  std::vector<double> w(rows.size(), 1.0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].near_flag) w[i] *= cfg.weight_near;
    if (rows[i].pos_flag) w[i] *= cfg.weight_pos_mult;
    w[i] = std::min(w[i], cfg.weight_cap);
  }
  return w;
}

namespace {

void check_lengths(std::size_t a, std::size_t b, std::size_t w) {
  if (a != b || a != w) {
    throw Error(ErrorCode::LengthMismatch, "prediction/target/weight lengths differ");
  }
}

}  // namespace

double loss_bce(std::span<const double> pred, std::span<const double> y,
                std::span<const double> weights) {
  check_lengths(pred.size(), y.size(), weights.size());
  double loss = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    loss -= weights[i] * (y[i] * safe_log(pred[i]) + (1.0 - y[i]) * safe_log(1.0 - pred[i]));
  }
  return loss;
}

double loss_soft_ce(std::span<const double> pred, std::span<const double> y_soft,
                    std::span<const double> weights) {
  return loss_bce(pred, y_soft, weights);
}

double loss_brier(std::span<const double> pred, std::span<const double> y_soft,
                  std::span<const double> weights) {
  check_lengths(pred.size(), y_soft.size(), weights.size());
  double loss = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - y_soft[i];
    loss += weights[i] * d * d;
  }
  return loss;
}

double loss_l2(std::span<const double> theta, double lambda2) {
  double ss = 0.0;
  for (double t : theta) ss += t * t;
  return lambda2 * ss;
}

double loss_composite(std::span<const double> pred, std::span<const double> y,
                      std::span<const double> c_learned, std::span<const double> c_stat,
                      double lambda_cap, std::span<const double> weights) {
  if (c_learned.size() != c_stat.size()) {
    throw Error(ErrorCode::LengthMismatch, "capability lists differ in length");
  }
  double loss = loss_bce(pred, y, weights);
  for (std::size_t i = 0; i < c_learned.size(); ++i) {
    const double d = c_learned[i] - c_stat[i];
    loss += lambda_cap * d * d;
  }
  return loss;
}

double objective_and_gradient(const ParamPoint& p, std::span<const PreparedRow> rows,
                              LossKind loss, AnchorMode mode, double alpha_r,
                              double lambda2, ParamPoint* grad) {
  if (p.theta.size() != kFeatureDim) {
    throw Error(ErrorCode::SchemaMismatch, "parameter point has wrong dimension");
  }
  if (loss == LossKind::composite) {
    throw Error(ErrorCode::InvalidConfig, "composite objective uses the latent head");
  }
  if (grad != nullptr) {
    grad->theta.assign(kFeatureDim, 0.0);
    grad->bias = 0.0;
    grad->anchor_coef = 0.0;
  }

  double total_weight = 0.0;
  double total_loss = 0.0;
  for (const PreparedRow& row : rows) {
    double residual = p.bias;
    for (std::size_t j = 0; j < kFeatureDim; ++j) residual += p.theta[j] * row.x_std[j];
    const double t = p.anchor_coef * row.z_stat + alpha_r * residual;
    const double pi = sigmoid(t);
    const double y = row.target;
    const double w = row.weight;
    total_weight += w;

    double dldt;
    if (loss == LossKind::brier) {
      const double d = pi - y;
      total_loss += w * d * d;
      dldt = 2.0 * w * d * pi * (1.0 - pi);
    } else {
      total_loss -= w * (y * safe_log(pi) + (1.0 - y) * safe_log(1.0 - pi));
      dldt = w * (pi - y);
    }
    if (grad != nullptr) {
      for (std::size_t j = 0; j < kFeatureDim; ++j) {
        grad->theta[j] += dldt * alpha_r * row.x_std[j];
      }
      grad->bias += dldt * alpha_r;
      grad->anchor_coef += dldt * row.z_stat;
    }
  }
  if (total_weight <= 0.0) {
    throw Error(ErrorCode::EmptyTrainingSet, "no rows to optimize");
  }
  // weight-normalized data term plus the raw ridge penalty, so lambda2
  // keeps the same meaning regardless of the dataset size
  double objective = total_loss / total_weight;
  for (double th : p.theta) objective += lambda2 * th * th;
  if (grad != nullptr) {
    for (std::size_t j = 0; j < kFeatureDim; ++j) {
      grad->theta[j] = grad->theta[j] / total_weight + 2.0 * lambda2 * p.theta[j];
    }
    grad->bias /= total_weight;
    grad->anchor_coef = (mode == AnchorMode::free) ? grad->anchor_coef / total_weight : 0.0;
  }
  return objective;
}

namespace {

struct FitOutcome {
  ParamPoint params;
  double final_objective = 0.0;
};

/// Gradient descent in the alpha_r-scaled parametrization, which keeps
/// the step size meaningful across the residual-scale grid. The rate is
/// capped by a Lipschitz bound on the scaled objective.
FitOutcome fit_params(std::span<const PreparedRow> rows, const TrainConfig& cfg,
                      double alpha_r, double lambda2) {
  ParamPoint p;
  if (cfg.init_theta) {
    if (cfg.init_theta->size() != kFeatureDim) {
      throw Error(ErrorCode::SchemaMismatch, "init_theta has wrong dimension");
    }
    p.theta = *cfg.init_theta;
  }
  p.bias = cfg.init_bias.value_or(0.0);
  p.anchor_coef = cfg.init_anchor.value_or(1.0);
  if (cfg.anchor_mode == AnchorMode::anchored) p.anchor_coef = 1.0;

  // Curvature bounds per parameter block (in the alpha_r-scaled space)
  // keep each block's fixed step inside its stability region.
  double theta_curv = 0.0, bias_curv = 0.0, anchor_curv = 0.0;
  double total_weight = 0.0;
  for (const PreparedRow& row : rows) {
    double norm2 = 0.0;
    for (double v : row.x_std) norm2 += v * v;
    theta_curv += 0.25 * row.weight * norm2;
    bias_curv += 0.25 * row.weight;
    anchor_curv += 0.25 * row.weight * row.z_stat * row.z_stat;
    total_weight += row.weight;
  }
  if (total_weight <= 0.0) {
    throw Error(ErrorCode::EmptyTrainingSet, "no rows to optimize");
  }
  theta_curv = theta_curv / total_weight + 2.0 * lambda2 / (alpha_r * alpha_r);
  bias_curv /= total_weight;
  anchor_curv /= total_weight;
  const double max_theta_rate = 0.9 / std::max(theta_curv, 1e-12);
  const double max_bias_rate = 0.9 / std::max(bias_curv, 1e-12);
  const double max_anchor_rate = 0.9 / std::max(anchor_curv, 1e-12);

  double prev_objective = std::numeric_limits<double>::infinity();
  int plateau = 0;
  FitOutcome out;
  ParamPoint grad;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double rate = (epoch < cfg.warmup_epochs && cfg.warmup_learning_rate > 0.0)
                            ? cfg.warmup_learning_rate
                            : cfg.learning_rate;
    const double theta_rate = std::min(rate, max_theta_rate);
    const double bias_rate = std::min(rate, max_bias_rate);
    const double anchor_rate = std::min(rate, max_anchor_rate);

    const double objective =
        objective_and_gradient(p, rows, cfg.loss, cfg.anchor_mode, alpha_r, lambda2, &grad);
    if (!std::isfinite(objective)) {
      throw Error(ErrorCode::NonfiniteLoss, "training diverged; lower the learning rate");
    }
    out.final_objective = objective;

    // gradients in the scaled space (theta_s = alpha_r * theta)
    double gnorm2 = 0.0;
    for (double g : grad.theta) gnorm2 += (g / alpha_r) * (g / alpha_r);
    gnorm2 += (grad.bias / alpha_r) * (grad.bias / alpha_r);
    gnorm2 += grad.anchor_coef * grad.anchor_coef;
    if (std::sqrt(gnorm2) < cfg.grad_tol) break;

    if (std::abs(prev_objective - objective) <= 1e-15 * std::max(1.0, std::abs(objective))) {
      if (++plateau >= 50) break;
    } else {
      plateau = 0;
    }
    prev_objective = objective;

    for (std::size_t j = 0; j < kFeatureDim; ++j) {
      p.theta[j] -= theta_rate * grad.theta[j] / (alpha_r * alpha_r);
    }
    p.bias -= bias_rate * grad.bias / (alpha_r * alpha_r);
    if (cfg.anchor_mode == AnchorMode::free) p.anchor_coef -= anchor_rate * grad.anchor_coef;
  }
  out.params = p;
  return out;
}

struct ValScore {
  double near_brier = 0.0;
  double logloss = 0.0;
  double brier = 0.0;

  bool better_than(const ValScore& other) const {
    if (near_brier != other.near_brier) return near_brier < other.near_brier;
    if (logloss != other.logloss) return logloss < other.logloss;
    return brier < other.brier;
  }
};

ValScore score_on_validation(const ResidualModel& model, const Dataset& val) {
  ValScore s;
  double near_n = 0.0;
  const double n = static_cast<double>(val.size());
  for (const TrainRow& row : val) {
    const double pi = predict(model, row.z_stat, row.x);
    const double d = pi - row.target;
    s.brier += d * d;
    s.logloss -= row.target * safe_log(pi) + (1.0 - row.target) * safe_log(1.0 - pi);
    if (row.near_flag) {
      s.near_brier += d * d;
      near_n += 1.0;
    }
  }
  s.brier /= n;
  s.logloss /= n;
  // no near-threshold rows: fall back to the overall Brier
  s.near_brier = near_n > 0.0 ? s.near_brier / near_n : s.brier;
  return s;
}

}  // namespace

ResidualModel train(const Dataset& train_rows, const Dataset& val_rows,
                    const TrainConfig& cfg) {
  if (train_rows.empty()) {
    throw Error(ErrorCode::EmptyTrainingSet, "no training rows");
  }
  if (cfg.loss == LossKind::composite) {
    throw Error(ErrorCode::InvalidConfig,
                "composite objective trains the latent head; see train_latent");
  }

  std::vector<FeatureVector> feats;
  feats.reserve(train_rows.size());
  for (const TrainRow& r : train_rows) feats.push_back(r.x);
  const Standardizer standardizer = fit_standardizer(feats);

  const std::vector<double> weights = sample_weights(train_rows, cfg);
  std::vector<PreparedRow> prepared(train_rows.size());
  for (std::size_t i = 0; i < train_rows.size(); ++i) {
    prepared[i].x_std = apply_standardizer(standardizer, train_rows[i].x);
    prepared[i].z_stat = train_rows[i].z_stat;
    prepared[i].target = train_rows[i].target;
    prepared[i].weight = weights[i];
  }

  std::vector<double> alpha_grid;
  if (cfg.alpha_r) {
    alpha_grid.push_back(*cfg.alpha_r);
  } else {
    alpha_grid.assign(std::begin(kResidualScaleGrid), std::end(kResidualScaleGrid));
  }
  std::vector<double> lambda_grid;
  if (cfg.lambda2) {
    lambda_grid.push_back(*cfg.lambda2);
  } else {
    lambda_grid.assign(std::begin(kLambda2Grid), std::end(kLambda2Grid));
  }
  const bool searching = alpha_grid.size() > 1 || lambda_grid.size() > 1;
  if (searching && val_rows.empty()) {
    throw Error(ErrorCode::EmptyValidation, "grid selection needs a validation split");
  }

  std::optional<ResidualModel> best;
  ValScore best_score;
  for (double lambda2 : lambda_grid) {
    for (double alpha_r : alpha_grid) {
      const FitOutcome fit = fit_params(prepared, cfg, alpha_r, lambda2);
      ResidualModel model;
      model.anchor_mode = cfg.anchor_mode;
      model.anchor_coef = fit.params.anchor_coef;
      model.alpha_r = alpha_r;
      model.lambda2 = lambda2;
      model.theta = fit.params.theta;
      model.bias = fit.params.bias;
      model.standardizer = standardizer;
      model.c0 = cfg.c0;
      if (!searching && val_rows.empty()) {
        return model;
      }
      const ValScore score = score_on_validation(model, val_rows);
      if (!best || score.better_than(best_score)) {
        best = std::move(model);
        best_score = score;
      }
    }
  }
  return *best;
}

void save_model(const ResidualModel& model, const std::string& path) {
  nlohmann::json doc;
  doc["schema_version"] = model.schema_version;
  doc["anchor_mode"] = anchor_mode_name(model.anchor_mode);
  doc["anchor_coef"] = model.anchor_coef;
  doc["alpha_r"] = model.alpha_r;
  doc["lambda2"] = model.lambda2;
  doc["theta"] = model.theta;
  doc["bias"] = model.bias;
  doc["standardizer"] = {{"mean", model.standardizer.mean}, {"sd", model.standardizer.sd}};
  doc["c0"] = model.c0;
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::CorruptFile, "cannot open '" + path + "' for writing");
  }
  out << doc.dump(2) << "\n";
}

ResidualModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::CorruptFile, "cannot open '" + path + "'");
  }
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::CorruptFile, std::string("model parse failure: ") + e.what());
  }
  ResidualModel model;
  try {
    model.schema_version = doc.at("schema_version").get<std::string>();
    if (model.schema_version != kFeatureSchemaVersion) {
      throw Error(ErrorCode::SchemaVersionMismatch,
                  "model schema '" + model.schema_version + "' does not match '" +
                      kFeatureSchemaVersion + "'");
    }
    model.anchor_mode = anchor_mode_from_name(doc.at("anchor_mode").get<std::string>());
    model.anchor_coef = doc.at("anchor_coef").get<double>();
    model.alpha_r = doc.at("alpha_r").get<double>();
    model.lambda2 = doc.at("lambda2").get<double>();
    model.theta = doc.at("theta").get<std::vector<double>>();
    model.bias = doc.at("bias").get<double>();
    model.standardizer.mean = doc.at("standardizer").at("mean").get<std::vector<double>>();
    model.standardizer.sd = doc.at("standardizer").at("sd").get<std::vector<double>>();
    model.c0 = doc.at("c0").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::CorruptFile, std::string("model field failure: ") + e.what());
  }
  if (model.theta.size() != kFeatureDim || model.standardizer.mean.size() != kFeatureDim ||
      model.standardizer.sd.size() != kFeatureDim) {
    throw Error(ErrorCode::SchemaVersionMismatch, "model vectors do not match the schema size");
  }
  return model;
}

LatentPrediction predict_latent(const LatentHead& head, double cpk_hat, double se,
                                double c0, const FeatureVector& x_std) {
  if (!(se > 0.0)) {
    throw Error(ErrorCode::NonpositiveSE, "standard error must be positive");
  }
  if (head.g.size() != kFeatureDim) {
    throw Error(ErrorCode::SchemaMismatch, "latent head has wrong dimension");
  }
  LatentPrediction out;
  out.c_learned = cpk_hat + head.g_bias;
  for (std::size_t j = 0; j < kFeatureDim; ++j) out.c_learned += head.g[j] * x_std[j];
  out.pi = norm_cdf((c0 - out.c_learned) / se);
  return out;
}

double latent_objective_and_gradient(const LatentHead& head, std::span<const LatentRow> rows,
                                     double c0, double lambda_cap, LatentHead* grad) {
  if (head.g.size() != kFeatureDim) {
    throw Error(ErrorCode::SchemaMismatch, "latent head has wrong dimension");
  }
  if (grad != nullptr) {
    grad->g.assign(kFeatureDim, 0.0);
    grad->g_bias = 0.0;
  }
  double total_weight = 0.0;
  double total_loss = 0.0;
  for (const LatentRow& row : rows) {
    double c = row.cpk_hat + head.g_bias;
    for (std::size_t j = 0; j < kFeatureDim; ++j) c += head.g[j] * row.x_std[j];
    const double u = (c0 - c) / row.se;
    const double pi = clip(norm_cdf(u), kPredClip, 1.0 - kPredClip);
    total_loss -= row.weight * (row.target * safe_log(pi) + (1.0 - row.target) * safe_log(1.0 - pi));
    const double dcap = c - row.c_stat;
    total_loss += lambda_cap * dcap * dcap;
    total_weight += row.weight;
    if (grad != nullptr) {
      // d(loss)/dc through the probit link, plus the capability pull-back;
      // inside the clipped region the risk term is flat
      double dldc = 2.0 * lambda_cap * dcap;
      if (pi > kPredClip && pi < 1.0 - kPredClip) {
        const double dldpi = row.weight * (pi - row.target) / (pi * (1.0 - pi));
        dldc -= dldpi * norm_pdf(u) / row.se;
      }
      for (std::size_t j = 0; j < kFeatureDim; ++j) grad->g[j] += dldc * row.x_std[j];
      grad->g_bias += dldc;
    }
  }
  if (total_weight <= 0.0) {
    throw Error(ErrorCode::EmptyTrainingSet, "no rows to optimize");
  }
  if (grad != nullptr) {
    for (std::size_t j = 0; j < kFeatureDim; ++j) grad->g[j] /= total_weight;
    grad->g_bias /= total_weight;
  }
  return total_loss / total_weight;
}

LatentHead train_latent(std::span<const LatentRow> rows, double c0, double lambda_cap,
                        int epochs, double learning_rate) {
  LatentHead head;
  LatentHead grad;
  for (int epoch = 0; epoch < epochs; ++epoch) {
    const double objective = latent_objective_and_gradient(head, rows, c0, lambda_cap, &grad);
    if (!std::isfinite(objective)) {
      throw Error(ErrorCode::NonfiniteLoss, "latent training diverged");
    }
    double gnorm2 = grad.g_bias * grad.g_bias;
    for (double g : grad.g) gnorm2 += g * g;
    if (std::sqrt(gnorm2) < 1e-10) break;
    for (std::size_t j = 0; j < kFeatureDim; ++j) head.g[j] -= learning_rate * grad.g[j];
    head.g_bias -= learning_rate * grad.g_bias;
  }
  return head;
}

}  // namespace uccap
