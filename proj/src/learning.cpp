#include "aif/learning.hpp"

#include <string>

#include "aif/maths.hpp"

namespace aif {

namespace {

std::vector<bool> selection(const LearningOptions& opts, std::size_t count, const char* what) {
  if (!(opts.lr > 0.0)) throw Error("learning rate must be positive");
  std::vector<bool> selected(count, !opts.targets.has_value());
  if (opts.targets) {
    for (std::size_t i : *opts.targets) {
      if (i >= count) throw IndexError(std::string(what) + " " + std::to_string(i) + " out of range");
      selected[i] = true;
    }
  }
  return selected;
}

}  // namespace

std::vector<Tensor> update_A_dirichlet(const std::vector<Tensor>& pA, const Observation& obs, const Belief& qs,
                                       const LearningOptions& opts) {
  if (obs.size() != pA.size()) throw ShapeError("expected " + std::to_string(pA.size()) + " observations");
  const auto selected = selection(opts, pA.size(), "modality");
  std::vector<Tensor> out = pA;
  for (std::size_t m = 0; m < pA.size(); ++m) {
    if (!selected[m]) continue;
    check_belief_shape(pA[m], qs, "update_A_dirichlet");
    if (obs[m] >= pA[m].support_size()) {
      throw IndexError("observation " + std::to_string(obs[m]) + " out of range for modality " + std::to_string(m));
    }
    const Vector qs_joint = joint(qs);
    for (std::size_t c = 0; c < qs_joint.size(); ++c) out[m].cell(obs[m], c) += opts.lr * qs_joint[c];
  }
  return out;
}

std::vector<Tensor> update_B_dirichlet(const std::vector<Tensor>& pB, const Action& action, const Belief& qs,
                                       const Belief& qs_prev, const LearningOptions& opts) {
  if (action.size() != pB.size() || qs.size() != pB.size() || qs_prev.size() != pB.size()) {
    throw ShapeError("action and beliefs must cover all " + std::to_string(pB.size()) + " factors");
  }
  const auto selected = selection(opts, pB.size(), "factor");
  std::vector<Tensor> out = pB;
  for (std::size_t f = 0; f < pB.size(); ++f) {
    if (!selected[f]) continue;
    Tensor& counts = out[f];
    const std::size_t n = counts.dim(0);
    const std::size_t n_controls = counts.dim(2);
    if (action[f] >= n_controls) throw IndexError("control " + std::to_string(action[f]) + " out of range for factor " + std::to_string(f));
    if (qs[f].size() != n || qs_prev[f].size() != n) throw ShapeError("beliefs do not match pB[" + std::to_string(f) + "]");
    auto v = counts.values();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) v[(i * n + j) * n_controls + action[f]] += opts.lr * qs[f][i] * qs_prev[f][j];
    }
  }
  return out;
}

std::vector<Vector> update_D_dirichlet(const std::vector<Vector>& pD, const Belief& qs_first,
                                       const LearningOptions& opts) {
  if (qs_first.size() != pD.size()) throw ShapeError("belief must cover all " + std::to_string(pD.size()) + " factors");
  const auto selected = selection(opts, pD.size(), "factor");
  std::vector<Vector> out = pD;
  for (std::size_t f = 0; f < pD.size(); ++f) {
    if (!selected[f]) continue;
    if (qs_first[f].size() != pD[f].size()) throw ShapeError("belief does not match pD[" + std::to_string(f) + "]");
    for (std::size_t s = 0; s < pD[f].size(); ++s) out[f][s] += opts.lr * qs_first[f][s];
  }
  return out;
}

}  // namespace aif
