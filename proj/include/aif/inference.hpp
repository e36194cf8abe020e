#pragma once

#include <cstddef>
#include <vector>

#include "aif/genmodel.hpp"
#include "aif/tensor.hpp"

namespace aif {

struct InferenceOptions {
  int num_iter = 10;      ///< maximum number of coordinate sweeps
  double dF_tol = 1e-4;   ///< stop once the free energy changes by less than this
};

struct FpiResult {
  Belief qs;
  double vfe = 0.0;
  /// Free energy after each completed sweep.
  std::vector<double> vfe_history;
  int sweeps = 0;
};

/// Variational free energy of a factorised belief at one timestep:
///   F = E_Q[ln Q(s)] - E_Q[ln P(o | s)] - E_Q[ln P(s)]
/// summed over modalities for the likelihood term.
double vfe(const Belief& qs, const Observation& obs, const std::vector<Tensor>& A, const Belief& prior);

/// Mean-field fixed-point iteration over the hidden-state factors.
///
/// Starts from `prior` and, in each sweep, replaces every marginal (ascending
/// factor order) with
///   softmax( sum_m likelihood_message(A[m], obs[m], qs, f) + ln prior_f ),
/// using the freshest values of the other marginals. Stops after `num_iter`
/// sweeps or once |F_k - F_{k-1}| < dF_tol. A single-factor model needs
/// exactly one sweep.
FpiResult infer_states_fpi(const Observation& obs, const std::vector<Tensor>& A, const Belief& prior,
                           const InferenceOptions& opts = {});

/// Per-factor mixture of policy-conditioned beliefs weighted by Q(pi).
Belief bayesian_model_average(const std::vector<Belief>& qs_pi, const Vector& q_pi);

}  // namespace aif
