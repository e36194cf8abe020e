#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "aif/genmodel.hpp"
#include "aif/tensor.hpp"

namespace aif {

/// Expected free energy of one policy, split by component. Information gains
/// are reported as non-negative values; `total_G` is minus the sum of the
/// enabled components, so lower is better.
struct EfeBreakdown {
  double utility = 0.0;
  double state_info_gain = 0.0;
  double pA_info_gain = 0.0;
  double pB_info_gain = 0.0;
  double total_G = 0.0;
};

struct PolicyPosterior {
  Vector q_pi;
  Vector G;
  std::vector<EfeBreakdown> breakdown;
};

struct EfeFlags {
  bool use_utility = true;
  bool use_states_info_gain = true;
  bool use_param_info_gain = false;
};

enum class ActionSelection { Deterministic, Stochastic };

/// Modality-indexed predictive distributions at one timestep.
using ObsPrediction = std::vector<Vector>;

/// Rolls `qs` forward through B under each step of `policy`.
std::vector<Belief> get_expected_states(const Belief& qs, const std::vector<Tensor>& B, const Policy& policy);

/// Per-modality predictive observations for each rolled-out belief.
std::vector<ObsPrediction> get_expected_obs(const std::vector<Belief>& qs_pi, const std::vector<Tensor>& A);

/// sum_t sum_m Q(o_m | pi, t) . C_m(t)
double expected_utility(const std::vector<ObsPrediction>& qo_pi, const GenerativeModel& model);
/// Same, with explicit per-modality preference rows per timestep.
double expected_utility(const std::vector<ObsPrediction>& qo_pi, const std::vector<std::vector<Vector>>& C_by_time);

/// Expected information gain about hidden states, sum over timesteps of the
/// mutual information between the belief and the joint outcome of all modalities.
double states_info_gain(const std::vector<Tensor>& A, const std::vector<Belief>& qs_pi);

/// Novelty of the likelihood counts:
///   sum_t sum_m sum_{o,s} Q(o_m) Q(s) (1/a(o,s) - 1/a_0(s)),  a_0 = column sums.
double pA_info_gain(const std::vector<Tensor>& pA, const std::vector<ObsPrediction>& qo_pi,
                    const std::vector<Belief>& qs_pi);

/// Novelty of the transition counts along the policy's action slices:
///   sum_t sum_f sum_{i,j} Q_t(i) Q_{t-1}(j) (1/b(i,j,u) - 1/b_0(j,u)).
double pB_info_gain(const std::vector<Tensor>& pB, const std::vector<Belief>& qs_pi, const Belief& qs_prev,
                    const Policy& policy);

/// Scores every policy and returns q_pi = softmax(-gamma * G + ln E - F).
/// E defaults to the model's E or uniform; F defaults to zeros.
PolicyPosterior update_posterior_policies(const Belief& qs, const GenerativeModel& model,
                                          const std::vector<Policy>& policies, const EfeFlags& flags = {},
                                          double gamma = 16.0, const std::optional<Vector>& F = std::nullopt);

/// Q(u_f) for the first step: sum over policies whose first action takes u on factor f.
std::vector<Vector> action_marginals(const Vector& q_pi, const std::vector<Policy>& policies,
                                     const std::vector<std::size_t>& num_controls);

/// Picks one control per factor from the marginal Q(u).
///
/// Deterministic mode takes the argmax (lowest index on ties). Stochastic mode
/// draws from softmax(alpha * ln Q(u)) using `rng`.
Action sample_action(const Vector& q_pi, const std::vector<Policy>& policies,
                     const std::vector<std::size_t>& num_controls, ActionSelection mode, double alpha,
                     std::mt19937_64& rng);

/// Uniform double in [0, 1) from the top 53 bits of one engine draw.
/// Used instead of std::uniform_real_distribution so traces do not depend on
/// the standard library implementation.
double uniform01(std::mt19937_64& rng);

/// Index drawn from a categorical via inverse CDF over one uniform01 draw.
std::size_t sample_categorical(const Vector& p, std::mt19937_64& rng);

}  // namespace aif
