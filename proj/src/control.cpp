#include "aif/control.hpp"

#include <string>

#include "aif/maths.hpp"

namespace aif {

namespace {

void check_policy(const Policy& policy, const std::vector<Tensor>& B) {
  for (std::size_t t = 0; t < policy.length(); ++t) {
    const Action& u = policy[t];
    if (u.size() != B.size()) {
      throw ShapeError("policy step " + std::to_string(t) + " has " + std::to_string(u.size()) +
                       " controls for " + std::to_string(B.size()) + " factors");
    }
    for (std::size_t f = 0; f < u.size(); ++f) {
      if (B[f].rank() != 3) throw ShapeError("B[" + std::to_string(f) + "] must have dims S x S x U");
      if (u[f] >= B[f].dim(2)) {
        throw IndexError("control " + std::to_string(u[f]) + " out of range for factor " + std::to_string(f) +
                         " with " + std::to_string(B[f].dim(2)) + " controls");
      }
    }
  }
}

/// B[:, :, u] . q
Vector transition(const Tensor& b, std::size_t u, const Vector& q) {
  const std::size_t n = b.dim(0);
  const std::size_t n_controls = b.dim(2);
  if (q.size() != n) throw ShapeError("belief of length " + std::to_string(q.size()) + " for " + std::to_string(n) + " states");
  const auto v = b.values();
  Vector out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[i] += v[(i * n + j) * n_controls + u] * q[j];
  }
  return normalized(out);
}

double novelty(const Tensor& counts, std::size_t row, std::size_t column, const Vector& sums) {
  return 1.0 / counts.cell(row, column) - 1.0 / sums[column];
}

}  // namespace

std::vector<Belief> get_expected_states(const Belief& qs, const std::vector<Tensor>& B, const Policy& policy) {
  check_policy(policy, B);
  if (qs.size() != B.size()) throw ShapeError("belief has " + std::to_string(qs.size()) + " factors, B has " + std::to_string(B.size()));
  std::vector<Belief> out;
  const Belief* previous = &qs;
  for (std::size_t t = 0; t < policy.length(); ++t) {
    Belief next;
    for (std::size_t f = 0; f < B.size(); ++f) next.push_back(transition(B[f], policy[t][f], (*previous)[f]));
    out.push_back(std::move(next));
    previous = &out.back();
  }
  return out;
}

std::vector<ObsPrediction> get_expected_obs(const std::vector<Belief>& qs_pi, const std::vector<Tensor>& A) {
  std::vector<ObsPrediction> out;
  for (const auto& qs : qs_pi) {
    ObsPrediction qo;
    for (const auto& a : A) qo.push_back(expected_likelihood(a, qs));
    out.push_back(std::move(qo));
  }
  return out;
}

double expected_utility(const std::vector<ObsPrediction>& qo_pi, const std::vector<std::vector<Vector>>& C_by_time) {
  if (C_by_time.size() != qo_pi.size()) throw ShapeError("preferences cover a different number of timesteps");
  double utility = 0.0;
  for (std::size_t t = 0; t < qo_pi.size(); ++t) {
    if (C_by_time[t].size() != qo_pi[t].size()) throw ShapeError("preferences cover a different number of modalities");
    for (std::size_t m = 0; m < qo_pi[t].size(); ++m) {
      const Vector& c = C_by_time[t][m];
      const Vector& qo = qo_pi[t][m];
      if (c.size() != qo.size()) throw ShapeError("C[" + std::to_string(m) + "] length does not match the outcomes");
      for (std::size_t o = 0; o < qo.size(); ++o) utility += qo[o] * c[o];
    }
  }
  return utility;
}

double expected_utility(const std::vector<ObsPrediction>& qo_pi, const GenerativeModel& model) {
  std::vector<std::vector<Vector>> rows(qo_pi.size());
  for (std::size_t t = 0; t < qo_pi.size(); ++t) {
    for (std::size_t m = 0; m < model.num_modalities(); ++m) rows[t].push_back(model.preference(m, t));
  }
  return expected_utility(qo_pi, rows);
}

double states_info_gain(const std::vector<Tensor>& A, const std::vector<Belief>& qs_pi) {
  double gain = 0.0;
  for (const auto& qs : qs_pi) gain += mutual_information(A, qs);
  return gain;
}

double pA_info_gain(const std::vector<Tensor>& pA, const std::vector<ObsPrediction>& qo_pi,
                    const std::vector<Belief>& qs_pi) {
  if (qo_pi.size() != qs_pi.size()) throw ShapeError("predicted observations and states cover different horizons");
  double gain = 0.0;
  for (std::size_t m = 0; m < pA.size(); ++m) {
    const Tensor& counts = pA[m];
    for (double x : counts.values()) {
      if (!(x > 0.0)) throw NumericalError("Dirichlet counts must be positive");
    }
    const Vector sums = counts.column_sums();
    for (std::size_t t = 0; t < qs_pi.size(); ++t) {
      check_belief_shape(counts, qs_pi[t], "pA_info_gain");
      if (qo_pi[t].size() != pA.size() || qo_pi[t][m].size() != counts.support_size()) {
        throw ShapeError("predicted observations do not match pA");
      }
      const Vector qs_joint = joint(qs_pi[t]);
      for (std::size_t o = 0; o < counts.support_size(); ++o) {
        for (std::size_t c = 0; c < qs_joint.size(); ++c) {
          gain += qo_pi[t][m][o] * qs_joint[c] * novelty(counts, o, c, sums);
        }
      }
    }
  }
  return gain;
}

double pB_info_gain(const std::vector<Tensor>& pB, const std::vector<Belief>& qs_pi, const Belief& qs_prev,
                    const Policy& policy) {
  check_policy(policy, pB);
  if (qs_pi.size() != policy.length()) throw ShapeError("rolled-out beliefs do not match the policy length");
  for (const auto& counts : pB) {
    for (double x : counts.values()) {
      if (!(x > 0.0)) throw NumericalError("Dirichlet counts must be positive");
    }
  }
  double gain = 0.0;
  for (std::size_t t = 0; t < qs_pi.size(); ++t) {
    const Belief& before = t == 0 ? qs_prev : qs_pi[t - 1];
    for (std::size_t f = 0; f < pB.size(); ++f) {
      const Tensor& counts = pB[f];
      const std::size_t n = counts.dim(0);
      const std::size_t n_controls = counts.dim(2);
      const std::size_t u = policy[t][f];
      const auto v = counts.values();
      if (before[f].size() != n || qs_pi[t][f].size() != n) throw ShapeError("beliefs do not match pB");
      for (std::size_t j = 0; j < n; ++j) {
        double column_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) column_sum += v[(i * n + j) * n_controls + u];
        for (std::size_t i = 0; i < n; ++i) {
          const double w = 1.0 / v[(i * n + j) * n_controls + u] - 1.0 / column_sum;
          gain += qs_pi[t][f][i] * w * before[f][j];
        }
      }
    }
  }
  return gain;
}

PolicyPosterior update_posterior_policies(const Belief& qs, const GenerativeModel& model,
                                          const std::vector<Policy>& policies, const EfeFlags& flags, double gamma,
                                          const std::optional<Vector>& F) {
  if (policies.empty()) throw Error("empty policy set");
  const std::size_t n = policies.size();
  Vector log_E(n, log_stable(1.0 / static_cast<double>(n)));
  if (model.E) {
    if (model.E->size() != n) {
      throw ShapeError("E has " + std::to_string(model.E->size()) + " entries for " + std::to_string(n) + " policies");
    }
    log_E = log_stable(*model.E);
  }
  if (F && F->size() != n) throw ShapeError("F has " + std::to_string(F->size()) + " entries for " + std::to_string(n) + " policies");

  PolicyPosterior out;
  out.G.assign(n, 0.0);
  out.breakdown.resize(n);
  for (std::size_t p = 0; p < n; ++p) {
    const auto qs_pi = get_expected_states(qs, model.B, policies[p]);
    const auto qo_pi = get_expected_obs(qs_pi, model.A);
    EfeBreakdown& efe = out.breakdown[p];
    double value = 0.0;
    if (flags.use_utility) {
      efe.utility = expected_utility(qo_pi, model);
      value += efe.utility;
    }
    if (flags.use_states_info_gain) {
      efe.state_info_gain = states_info_gain(model.A, qs_pi);
      value += efe.state_info_gain;
    }
    if (flags.use_param_info_gain) {
      if (model.pA) {
        efe.pA_info_gain = pA_info_gain(*model.pA, qo_pi, qs_pi);
        value += efe.pA_info_gain;
      }
      if (model.pB) {
        efe.pB_info_gain = pB_info_gain(*model.pB, qs_pi, qs, policies[p]);
        value += efe.pB_info_gain;
      }
    }
    efe.total_G = -value;
    out.G[p] = efe.total_G;
  }

  Vector logits(n);
  for (std::size_t p = 0; p < n; ++p) logits[p] = -gamma * out.G[p] + log_E[p] - (F ? (*F)[p] : 0.0);
  out.q_pi = softmax(logits);
  return out;
}

std::vector<Vector> action_marginals(const Vector& q_pi, const std::vector<Policy>& policies,
                                     const std::vector<std::size_t>& num_controls) {
  if (q_pi.size() != policies.size()) {
    throw ShapeError("q_pi has " + std::to_string(q_pi.size()) + " entries for " + std::to_string(policies.size()) +
                     " policies");
  }
  std::vector<Vector> marginals;
  for (std::size_t u : num_controls) marginals.emplace_back(u, 0.0);
  for (std::size_t p = 0; p < policies.size(); ++p) {
    if (policies[p].length() == 0) throw ShapeError("empty policy");
    const Action& first = policies[p][0];
    if (first.size() != num_controls.size()) throw ShapeError("policy and control dims disagree");
    for (std::size_t f = 0; f < first.size(); ++f) {
      if (first[f] >= num_controls[f]) throw IndexError("policy control out of range on factor " + std::to_string(f));
      marginals[f][first[f]] += q_pi[p];
    }
  }
  return marginals;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t sample_categorical(const Vector& p, std::mt19937_64& rng) {
  const double draw = uniform01(rng);
  double cumulative = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    cumulative += p[i];
    if (draw < cumulative) return i;
  }
  // Rounding left the total just below 1; fall back to the last nonzero entry.
  for (std::size_t i = p.size(); i-- > 0;) {
    if (p[i] > 0.0) return i;
  }
  throw NumericalError("cannot sample from an all-zero distribution");
}

Action sample_action(const Vector& q_pi, const std::vector<Policy>& policies,
                     const std::vector<std::size_t>& num_controls, ActionSelection mode, double alpha,
                     std::mt19937_64& rng) {
  if (mode == ActionSelection::Stochastic && !(alpha > 0.0)) throw Error("alpha must be positive for stochastic selection");
  const auto marginals = action_marginals(q_pi, policies, num_controls);
  Action action(num_controls.size(), 0);
  for (std::size_t f = 0; f < marginals.size(); ++f) {
    const Vector& q_u = marginals[f];
    if (mode == ActionSelection::Deterministic) {
      std::size_t best = 0;
      for (std::size_t u = 1; u < q_u.size(); ++u) {
        if (q_u[u] > q_u[best]) best = u;
      }
      action[f] = best;
    } else {
      Vector logits = log_stable(q_u);
      for (double& x : logits) x *= alpha;
      action[f] = sample_categorical(softmax(logits), rng);
    }
  }
  return action;
}

}  // namespace aif
