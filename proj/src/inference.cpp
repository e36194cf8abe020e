#include "aif/inference.hpp"

#include <cmath>
#include <string>

#include "aif/maths.hpp"

namespace aif {

namespace {

void check_inputs(const Observation& obs, const std::vector<Tensor>& A, const Belief& prior) {
  if (obs.size() != A.size()) {
    throw ShapeError("expected " + std::to_string(A.size()) + " observations, got " + std::to_string(obs.size()));
  }
  for (std::size_t m = 0; m < A.size(); ++m) {
    check_belief_shape(A[m], prior, "infer_states");
    if (obs[m] >= A[m].support_size()) {
      throw IndexError("observation " + std::to_string(obs[m]) + " out of range for modality " +
                       std::to_string(m) + " with " + std::to_string(A[m].support_size()) + " outcomes");
    }
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double out = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) out += a[i] * b[i];
  return out;
}

}  // namespace

double vfe(const Belief& qs, const Observation& obs, const std::vector<Tensor>& A, const Belief& prior) {
  check_inputs(obs, A, prior);
  if (qs.size() != prior.size()) throw ShapeError("belief and prior have different factor counts");
  double free_energy = 0.0;
  for (std::size_t f = 0; f < qs.size(); ++f) {
    if (qs[f].size() != prior[f].size()) throw ShapeError("belief and prior dims differ on factor " + std::to_string(f));
    free_energy -= entropy(qs[f]);
    free_energy -= dot(qs[f], log_stable(prior[f]));
  }
  // Factor 0's message already averages over every other factor.
  for (std::size_t m = 0; m < A.size(); ++m) free_energy -= dot(qs[0], likelihood_message(A[m], obs[m], qs, 0));
  return free_energy;
}

FpiResult infer_states_fpi(const Observation& obs, const std::vector<Tensor>& A, const Belief& prior,
                           const InferenceOptions& opts) {
  if (opts.num_iter < 1) throw Error("num_iter must be at least 1");
  if (!(opts.dF_tol > 0.0)) throw Error("dF_tol must be positive");
  check_inputs(obs, A, prior);

  std::vector<Vector> log_prior;
  for (const auto& p : prior) log_prior.push_back(log_stable(p));

  FpiResult result;
  result.qs = prior;
  const std::size_t n_factors = prior.size();
  double previous = vfe(result.qs, obs, A, prior);
  for (int sweep = 0; sweep < opts.num_iter; ++sweep) {
    for (std::size_t f = 0; f < n_factors; ++f) {
      Vector logits = log_prior[f];
      for (std::size_t m = 0; m < A.size(); ++m) {
        const Vector message = likelihood_message(A[m], obs[m], result.qs, f);
        for (std::size_t s = 0; s < logits.size(); ++s) logits[s] += message[s];
      }
      result.qs[f] = softmax(logits);
    }
    const double current = vfe(result.qs, obs, A, prior);
    result.vfe_history.push_back(current);
    result.sweeps = sweep + 1;
    const double change = std::abs(current - previous);
    previous = current;
    if (n_factors == 1 || change < opts.dF_tol) break;
  }
  result.vfe = previous;
  return result;
}

Belief bayesian_model_average(const std::vector<Belief>& qs_pi, const Vector& q_pi) {
  if (qs_pi.size() != q_pi.size()) {
    throw ShapeError("got " + std::to_string(qs_pi.size()) + " beliefs for " + std::to_string(q_pi.size()) +
                     " policy probabilities");
  }
  if (qs_pi.empty()) throw ShapeError("no beliefs to average");
  Belief out;
  for (const auto& q : qs_pi.front()) out.emplace_back(q.size(), 0.0);
  for (std::size_t p = 0; p < qs_pi.size(); ++p) {
    if (qs_pi[p].size() != out.size()) throw ShapeError("beliefs have different factor counts");
    for (std::size_t f = 0; f < out.size(); ++f) {
      if (qs_pi[p][f].size() != out[f].size()) throw ShapeError("beliefs differ on factor " + std::to_string(f));
      for (std::size_t s = 0; s < out[f].size(); ++s) out[f][s] += q_pi[p] * qs_pi[p][f][s];
    }
  }
  return out;
}

}  // namespace aif
