#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "aif/genmodel.hpp"

namespace aif {

/// Generative process an agent interacts with. Owns its hidden state and its
/// own random stream; neither is visible through observations except via the
/// emission rule.
class Environment {
 public:
  virtual ~Environment() = default;

  /// Starts an episode and returns the first observation.
  virtual Observation reset() = 0;
  /// Applies one action and returns the resulting observation.
  virtual Observation step(const Action& action) = 0;

  /// Outcome counts per modality, matching what the agent's A arrays expect.
  virtual std::vector<std::size_t> num_obs() const = 0;
  /// Control counts per factor accepted by step().
  virtual std::vector<std::size_t> num_controls() const = 0;
};

/// Three-state world: action 0 moves to state 0 or 1 with equal probability,
/// action 1 moves to state 2. States 0 and 1 are observed exactly; state 2
/// emits one of the three outcomes uniformly at random.
///
/// reset() puts the world in state 0 and applies action 0 once, so the first
/// observation already comes from the stochastic branch.
class Listing2Env final : public Environment {
 public:
  explicit Listing2Env(std::uint64_t seed);

  Observation reset() override;
  Observation step(const Action& action) override;
  std::vector<std::size_t> num_obs() const override { return {3}; }
  std::vector<std::size_t> num_controls() const override { return {2}; }

  std::size_t state() const noexcept { return state_; }

 private:
  std::mt19937_64 rng_;
  std::size_t state_ = 0;
};

/// Two sites and a hidden coin fixed per episode.
///
/// Factor 0 is the agent's site (0 = A, 1 = B, controllable: action u moves to
/// site u); factor 1 is the coin (uncontrollable). Modality 0 is the coin
/// channel: at site A it shows heads or tails uniformly at random regardless of
/// the coin, at site B it shows the coin. Modality 1 reports the site.
class EpistemicChamberEnv final : public Environment {
 public:
  explicit EpistemicChamberEnv(std::uint64_t seed);

  Observation reset() override;
  Observation step(const Action& action) override;
  std::vector<std::size_t> num_obs() const override { return {2, 2}; }
  std::vector<std::size_t> num_controls() const override { return {2, 1}; }

  std::size_t site() const noexcept { return site_; }
  std::size_t coin() const noexcept { return coin_; }

  /// Generative model that matches this environment exactly.
  static GenerativeModel matching_model();

 private:
  Observation emit();

  std::mt19937_64 rng_;
  std::size_t site_ = 0;
  std::size_t coin_ = 0;
};

/// POMDP simulator driven by tables: true A for emissions, true B for
/// dynamics and D for the initial state distribution. Reads the same file
/// format as generative models, so the process can differ from the agent's model.
class TabularEnv final : public Environment {
 public:
  TabularEnv(GenerativeModel process, std::uint64_t seed);

  Observation reset() override;
  Observation step(const Action& action) override;
  std::vector<std::size_t> num_obs() const override { return process_.num_obs(); }
  std::vector<std::size_t> num_controls() const override { return process_.num_controls(); }

  const std::vector<std::size_t>& state() const noexcept { return state_; }

 private:
  Observation emit();

  GenerativeModel process_;
  std::mt19937_64 rng_;
  std::vector<std::size_t> state_;
};

/// Builds "listing2", "epistemic_chamber", or a TabularEnv from a model file path.
std::unique_ptr<Environment> make_environment(const std::string& name, std::uint64_t seed);

/// Throws IndexError unless the action fits the environment's control counts.
void check_action(const Environment& env, const Action& action);

}  // namespace aif
