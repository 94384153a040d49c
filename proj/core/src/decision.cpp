#include "uccap/decision.hpp"

#include <cmath>

#include "uccap/errors.hpp"

namespace uccap {

const char* risk_level_name(RiskLevel level) {
  switch (level) {
    case RiskLevel::Low: return "Low";
    case RiskLevel::Med: return "Med";
    case RiskLevel::High: return "High";
  }
  return "Med";
}

const char* reason_name(Reason reason) {
  switch (reason) {
    case Reason::Acceptable: return "Acceptable";
    case Reason::Skewed: return "Skewed";
    case Reason::LatentModelRisk: return "Latent model risk";
    case Reason::MixedMechanism: return "Mixed mechanism";
  }
  return "Latent model risk";
}

const char* action_name(Action action) {
  switch (action) {
    case Action::Accept: return "Accept";
    case Action::ReviewDistribution: return "Review distribution";
    case Action::InvestigateLatentRisk: return "Investigate latent risk";
    case Action::ReduceSdRecenter: return "Reduce sd + re-center";
  }
  return "Investigate latent risk";
}

double bayes_alpha(double c_fa, double c_fr) {
  if (!(c_fa > 0.0) || !(c_fr > 0.0)) {
    throw Error(ErrorCode::NonpositiveCost, "decision costs must be positive");
  }
  return c_fr / (c_fa + c_fr);
}

bool decide(double pi, double alpha_decision) {
  return pi <= alpha_decision;
}

RiskAssessment decision_chain(const std::string& dim_id, double pi, double pi_stat,
                              double z_stat, double residual,
                              const CapabilityEstimate& est, double rel_position,
                              const DecisionPolicy& policy) {
  RiskAssessment a;
  a.dim_id = dim_id;
  a.pi_stat = pi_stat;
  a.z_stat = z_stat;
  a.residual = residual;
  a.pi = pi;
  a.score = 100.0 * pi;

  if (pi < policy.level_low_hi) {
    a.level = RiskLevel::Low;
  } else if (pi >= policy.level_high_lo) {
    a.level = RiskLevel::High;
  } else {
    a.level = RiskLevel::Med;
  }

  // Ordered reason rules; first match wins.
  if (a.level == RiskLevel::Low) {
    a.reason = Reason::Acceptable;
    a.action = Action::Accept;
  } else if (a.level == RiskLevel::High &&
             (est.cpk_hat < 1.0 || std::abs(rel_position) > 0.5)) {
    a.reason = Reason::MixedMechanism;
    a.action = Action::ReduceSdRecenter;
  } else if (a.level == RiskLevel::Med && !est.normality_pass &&
             std::abs(est.skewness) > 0.5) {
    a.reason = Reason::Skewed;
    a.action = Action::ReviewDistribution;
  } else if (a.level == RiskLevel::Med) {
    // elevated risk without a clear statistical failure mode: flag for
    // investigation instead of prescribing an adjustment
    a.reason = Reason::LatentModelRisk;
    a.action = Action::InvestigateLatentRisk;
  } else {
    a.reason = Reason::MixedMechanism;
    a.action = Action::ReduceSdRecenter;
  }
  return a;
}

}  // namespace uccap
