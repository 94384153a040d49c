#pragma once

#include <string>

#include "uccap/types.hpp"

namespace uccap {

enum class RiskLevel { Low, Med, High };
enum class Reason { Acceptable, Skewed, LatentModelRisk, MixedMechanism };
enum class Action { Accept, ReviewDistribution, InvestigateLatentRisk, ReduceSdRecenter };

const char* risk_level_name(RiskLevel level);
const char* reason_name(Reason reason);  // report-stable labels
const char* action_name(Action action);

struct DecisionPolicy {
  double alpha_decision = 0.5;
  double level_low_hi = 0.10;   // pi below this is Low
  double level_high_lo = 0.90;  // pi at or above this is High
};

struct RiskAssessment {
  std::string dim_id;
  double pi_stat = 0.5;
  double z_stat = 0.0;
  double residual = 0.0;  // additive log-odds correction applied
  double pi = 0.5;
  double score = 50.0;  // 100 * pi
  RiskLevel level = RiskLevel::Med;
  Reason reason = Reason::LatentModelRisk;
  Action action = Action::InvestigateLatentRisk;
};

/// Bayes-optimal tolerance c_fr / (c_fa + c_fr) for false-accept and
/// false-reject costs.
double bayes_alpha(double c_fa, double c_fr);

/// Accept iff pi <= alpha (boundary accepts).
bool decide(double pi, double alpha_decision);

/// score -> level -> reason -> action mapping. Rules are ordered and
/// deterministic; `rel_position` is the mean's signed relative position
/// inside a bilateral tolerance (see relative_position()).
RiskAssessment decision_chain(const std::string& dim_id, double pi, double pi_stat,
                              double z_stat, double residual,
                              const CapabilityEstimate& est, double rel_position,
                              const DecisionPolicy& policy = DecisionPolicy{});

}  // namespace uccap
