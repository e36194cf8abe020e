#pragma once

#include <optional>
#include <vector>

#include "aif/genmodel.hpp"
#include "aif/tensor.hpp"

namespace aif {

struct LearningOptions {
  double lr = 1.0;
  /// Modality (for A) or factor (for B, D) indices to update; empty optional means all.
  std::optional<std::vector<std::size_t>> targets;
};

/// pA[m] + lr * onehot(obs_m) (x) qs_1 (x) ... (x) qs_F for each selected modality.
std::vector<Tensor> update_A_dirichlet(const std::vector<Tensor>& pA, const Observation& obs, const Belief& qs,
                                       const LearningOptions& opts = {});

/// pB[f][:, :, u_f] + lr * qs_f (x) qs_prev_f for each selected factor; other
/// action slices are left untouched.
std::vector<Tensor> update_B_dirichlet(const std::vector<Tensor>& pB, const Action& action, const Belief& qs,
                                       const Belief& qs_prev, const LearningOptions& opts = {});

/// pD[f] + lr * qs_first[f] for each selected factor.
std::vector<Vector> update_D_dirichlet(const std::vector<Vector>& pD, const Belief& qs_first,
                                       const LearningOptions& opts = {});

}  // namespace aif
