#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "aif/tensor.hpp"

namespace aif {

/// Floor applied before taking logs of probabilities.
inline constexpr double kLogEpsilon = 1e-16;
/// Tolerance on the total mass of a categorical at validation boundaries.
inline constexpr double kNormTolerance = 1e-10;

/// exp(v) / sum(exp(v)), evaluated after subtracting max(v).
/// Throws NumericalError("non-finite logits") on NaN or infinite input.
Vector softmax(std::span<const double> logits);

/// ln(max(p, kLogEpsilon)). Throws NumericalError for p < 0.
double log_stable(double p);
Vector log_stable(std::span<const double> p);

/// Shannon entropy in nats, -sum p ln p with the same floor as log_stable.
double entropy(std::span<const double> p);

/// Divides by the total mass. Throws NumericalError if the mass is not positive.
Vector normalized(std::span<const double> v);

/// True when every entry is >= 0 and the entries sum to one within `tol`.
bool is_categorical(std::span<const double> p, double tol = kNormTolerance);

/// Throws ShapeError unless the marginal sizes equal the conditioning dims of `A`.
void check_belief_shape(const Tensor& A, const Belief& qs, const char* what);

/// Product of marginals over the joint state space, row-major over factors.
Vector joint(const Belief& qs);

/// Q(o) = E_{Q(s)}[P(o | s)] for one modality, contracting every conditioning
/// dim of `A` with the matching marginal. Output is renormalised.
Vector expected_likelihood(const Tensor& A, const Belief& qs);

/// Expected log-likelihood of outcome `obs` as a function of factor `target`,
/// taken over every other marginal of `qs`:
///   m(s_f) = sum_{s \ s_f} prod_{i != f} q_i(s_i) ln P(obs | s).
Vector likelihood_message(const Tensor& A, std::size_t obs, const Belief& qs, std::size_t target);

/// Outer product of the given vectors; the result has one dim per input.
Tensor outer(const std::vector<Vector>& vs);

/// Mutual information between a belief and a bank of conditionally independent
/// channels: H[Q(o_1..o_M)] - E_{Q(s)}[sum_m H[P(o_m | s)]].
/// The joint outcome distribution is enumerated densely.
double mutual_information(const std::vector<Tensor>& A, const Belief& qs);

}  // namespace aif
