#include "aif/agent.hpp"

#include <string>

#include "aif/maths.hpp"

namespace aif {

namespace {

Belief propagate(const Belief& qs, const std::vector<Tensor>& B, const Action& action) {
  return get_expected_states(qs, B, Policy{{action}}).front();
}

std::vector<bool> selected(const LearningOptions& opts, std::size_t count) {
  std::vector<bool> out(count, !opts.targets.has_value());
  if (opts.targets) {
    for (std::size_t i : *opts.targets) {
      if (i < count) out[i] = true;
    }
  }
  return out;
}

}  // namespace

Agent::Agent(GenerativeModel model, AgentOptions options)
    : model_(std::move(model)), options_(std::move(options)), rng_(options_.seed) {
  ValidationReport report = validate(model_);
  if (!report.ok()) throw ValidationError(std::move(report));
  num_controls_ = model_.num_controls();
  if (options_.policies) {
    policies_ = *options_.policies;
    if (policies_.empty()) throw Error("empty policy set");
    for (const auto& policy : policies_) get_expected_states(model_.initial_prior(), model_.B, policy);
  } else {
    policies_ = construct_policies(model_.num_states(), num_controls_, options_.policy_len, options_.control_factors);
  }
  if (model_.E && model_.E->size() != policies_.size()) {
    throw ShapeError("E has " + std::to_string(model_.E->size()) + " entries for " +
                     std::to_string(policies_.size()) + " policies");
  }
  if (options_.action_selection == ActionSelection::Stochastic && !(options_.alpha > 0.0)) {
    throw Error("alpha must be positive for stochastic selection");
  }
  qs_ = model_.initial_prior();
  prior_ = qs_;
}

const Belief& Agent::infer_states(const Observation& obs) {
  if (!inferred_this_step_) {
    if (last_action_) {
      prior_ = propagate(qs_, model_.B, *last_action_);
      qs_prev_ = qs_;
    } else {
      prior_ = model_.initial_prior();
    }
    if (options_.save_belief_history) history_.emplace_back();
  }
  FpiResult result = infer_states_fpi(obs, model_.A, prior_, options_.inference);
  qs_ = std::move(result.qs);
  vfe_ = result.vfe;
  last_obs_ = obs;
  if (t_ == 0) qs_first_ = qs_;
  if (options_.save_belief_history) history_.back() = qs_;
  inferred_this_step_ = true;
  planned_this_step_ = false;
  return qs_;
}

const PolicyPosterior& Agent::infer_policies() {
  if (!inferred_this_step_) throw StateError("no posterior available: call infer_states first");
  q_pi_ = update_posterior_policies(qs_, model_, policies_, options_.efe, options_.gamma);
  planned_this_step_ = true;
  return *q_pi_;
}

const Action& Agent::sample_action() {
  if (!planned_this_step_) throw StateError("no policy posterior available: call infer_policies first");
  last_action_ = aif::sample_action(q_pi_->q_pi, policies_, num_controls_, options_.action_selection,
                                    options_.alpha, rng_);
  ++t_;
  inferred_this_step_ = false;
  planned_this_step_ = false;
  return *last_action_;
}

const std::vector<Tensor>& Agent::update_A() {
  if (!model_.pA) throw StateError("learning not enabled for A");
  if (!last_obs_) throw StateError("update_A needs an observation: call infer_states first");
  model_.pA = update_A_dirichlet(*model_.pA, *last_obs_, qs_, options_.learn_A);
  const auto chosen = selected(options_.learn_A, model_.A.size());
  for (std::size_t m = 0; m < model_.A.size(); ++m) {
    if (chosen[m]) model_.A[m] = dirichlet_mean((*model_.pA)[m]);
  }
  return *model_.pA;
}

const std::vector<Tensor>& Agent::update_B() {
  if (!model_.pB) throw StateError("learning not enabled for B");
  if (!qs_prev_ || !inferred_this_step_) {
    throw StateError("update_B needs beliefs from two consecutive timesteps");
  }
  // qs_prev_ is only set once an action has been taken, so last_action_ is the
  // control that led from qs_prev_ to qs_.
  model_.pB = update_B_dirichlet(*model_.pB, *last_action_, qs_, *qs_prev_, options_.learn_B);
  const auto chosen = selected(options_.learn_B, model_.B.size());
  for (std::size_t f = 0; f < model_.B.size(); ++f) {
    if (chosen[f]) model_.B[f] = dirichlet_mean((*model_.pB)[f]);
  }
  return *model_.pB;
}

const std::vector<Vector>& Agent::update_D() {
  if (!model_.pD) throw StateError("learning not enabled for D");
  if (!qs_first_) throw StateError("update_D needs the first posterior of the episode");
  model_.pD = update_D_dirichlet(*model_.pD, *qs_first_, options_.learn_D);
  if (model_.D.empty()) model_.D = model_.initial_prior();
  const auto chosen = selected(options_.learn_D, model_.B.size());
  for (std::size_t f = 0; f < model_.D.size(); ++f) {
    if (chosen[f]) model_.D[f] = dirichlet_mean((*model_.pD)[f]);
  }
  return *model_.pD;
}

void Agent::reset() {
  rng_.seed(options_.seed);
  qs_ = model_.initial_prior();
  prior_ = qs_;
  qs_prev_.reset();
  qs_first_.reset();
  history_.clear();
  q_pi_.reset();
  last_action_.reset();
  last_obs_.reset();
  vfe_ = 0.0;
  t_ = 0;
  inferred_this_step_ = false;
  planned_this_step_ = false;
}

std::size_t Agent::action_index() const {
  if (!last_action_) throw StateError("no action sampled yet");
  if (last_action_->size() != 1) throw StateError("action_index needs a single-factor model");
  return last_action_->front();
}

}  // namespace aif
