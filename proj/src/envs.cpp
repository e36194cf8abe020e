#include "aif/envs.hpp"

#include <cmath>

#include "aif/control.hpp"
#include "aif/model_io.hpp"

namespace aif {

void check_action(const Environment& env, const Action& action) {
  const auto controls = env.num_controls();
  if (action.size() != controls.size()) {
    throw IndexError("action has " + std::to_string(action.size()) + " entries, environment expects " +
                     std::to_string(controls.size()));
  }
  for (std::size_t f = 0; f < action.size(); ++f) {
    if (action[f] >= controls[f]) {
      throw IndexError("invalid action " + std::to_string(action[f]) + " for factor " + std::to_string(f));
    }
  }
}

Listing2Env::Listing2Env(std::uint64_t seed) : rng_(seed) {}

Observation Listing2Env::reset() {
  state_ = 0;
  return step({0});
}

Observation Listing2Env::step(const Action& action) {
  check_action(*this, action);
  if (action[0] == 0) {
    state_ = uniform01(rng_) > 0.5 ? 0 : 1;
  } else {
    state_ = 2;
  }
  if (state_ < 2) return {state_};
  return {static_cast<std::size_t>(std::floor(uniform01(rng_) * 3.0))};
}

EpistemicChamberEnv::EpistemicChamberEnv(std::uint64_t seed) : rng_(seed) {}

Observation EpistemicChamberEnv::reset() {
  site_ = 0;
  coin_ = uniform01(rng_) < 0.5 ? 0 : 1;
  return emit();
}

Observation EpistemicChamberEnv::step(const Action& action) {
  check_action(*this, action);
  site_ = action[0];
  return emit();
}

Observation EpistemicChamberEnv::emit() {
  const std::size_t coin_channel = site_ == 1 ? coin_ : (uniform01(rng_) < 0.5 ? 0 : 1);
  return {coin_channel, site_};
}

GenerativeModel EpistemicChamberEnv::matching_model() {
  GenerativeModel model;
  Tensor coin_channel({2, 2, 2});
  Tensor site_channel({2, 2, 2});
  for (std::size_t coin = 0; coin < 2; ++coin) {
    coin_channel({0, 0, coin}) = 0.5;
    coin_channel({1, 0, coin}) = 0.5;
    coin_channel({coin, 1, coin}) = 1.0;
    for (std::size_t site = 0; site < 2; ++site) site_channel({site, site, coin}) = 1.0;
  }
  model.A = {coin_channel, site_channel};

  Tensor move({2, 2, 2});
  for (std::size_t from = 0; from < 2; ++from) {
    for (std::size_t u = 0; u < 2; ++u) move({u, from, u}) = 1.0;
  }
  Tensor coin_stays({2, 2, 1});
  coin_stays({0, 0, 0}) = 1.0;
  coin_stays({1, 1, 0}) = 1.0;
  model.B = {move, coin_stays};
  model.D = {{1.0, 0.0}, {0.5, 0.5}};
  model.labels.modalities = {"coin_channel", "site"};
  model.labels.factors = {"site", "coin"};
  model.labels.outcomes = {{"heads", "tails"}, {"A", "B"}};
  model.labels.states = {{"A", "B"}, {"heads", "tails"}};
  return model;
}

TabularEnv::TabularEnv(GenerativeModel process, std::uint64_t seed) : process_(std::move(process)), rng_(seed) {
  ValidationReport report = validate(process_);
  if (!report.ok()) throw ValidationError(std::move(report));
}

Observation TabularEnv::reset() {
  state_.clear();
  for (const auto& d : process_.initial_prior()) state_.push_back(sample_categorical(d, rng_));
  return emit();
}

Observation TabularEnv::step(const Action& action) {
  check_action(*this, action);
  if (state_.empty()) throw StateError("step() before reset()");
  for (std::size_t f = 0; f < state_.size(); ++f) {
    const Tensor& b = process_.B[f];
    const std::size_t n = b.dim(0);
    Vector column(n);
    for (std::size_t i = 0; i < n; ++i) column[i] = b({i, state_[f], action[f]});
    state_[f] = sample_categorical(column, rng_);
  }
  return emit();
}

Observation TabularEnv::emit() {
  const auto dims = process_.num_states();
  std::size_t column = 0;
  for (std::size_t f = 0; f < dims.size(); ++f) column = column * dims[f] + state_[f];
  Observation obs;
  for (const auto& a : process_.A) obs.push_back(sample_categorical(a.column(column), rng_));
  return obs;
}

std::unique_ptr<Environment> make_environment(const std::string& name, std::uint64_t seed) {
  if (name == "listing2") return std::make_unique<Listing2Env>(seed);
  if (name == "epistemic_chamber") return std::make_unique<EpistemicChamberEnv>(seed);
  return std::make_unique<TabularEnv>(load_model(name), seed);
}

}  // namespace aif
