#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "aif/errors.hpp"
#include "aif/tensor.hpp"

namespace aif {

/// One control index per hidden-state factor.
using Action = std::vector<std::size_t>;
/// One outcome index per observation modality.
using Observation = std::vector<std::size_t>;

/// Sequence of actions, one per future timestep.
struct Policy {
  std::vector<Action> steps;

  std::size_t length() const noexcept { return steps.size(); }
  const Action& operator[](std::size_t t) const { return steps[t]; }

  friend bool operator==(const Policy&, const Policy&) = default;
};

/// Optional human-readable names. Any vector may be left empty.
struct Labels {
  std::vector<std::string> modalities;
  std::vector<std::string> factors;
  std::vector<std::vector<std::string>> outcomes;  // per modality
  std::vector<std::vector<std::string>> states;    // per factor

  bool empty() const noexcept {
    return modalities.empty() && factors.empty() && outcomes.empty() && states.empty();
  }
  friend bool operator==(const Labels&, const Labels&) = default;
};

/// Discrete POMDP generative model.
///
///   A[m]  P(o_m | s_1..s_F), dims O_m x S_1 x ... x S_F
///   B[f]  P(s_f' | s_f, u_f), dims S_f x S_f x U_f
///   C[m]  log-preferences over o_m; rank 1 (broadcast over the horizon) or
///         rank 2 (horizon step x O_m). Need not normalise.
///   D[f]  P(s_f) at the first timestep
///   E     prior over policies
///
/// Empty C or D and a missing E stand for the uniform defaults.
/// pA/pB/pD are Dirichlet counts mirroring A/B/D; their presence enables learning.
struct GenerativeModel {
  std::vector<Tensor> A;
  std::vector<Tensor> B;
  std::vector<Tensor> C;
  std::vector<Vector> D;
  std::optional<Vector> E;
  std::optional<std::vector<Tensor>> pA;
  std::optional<std::vector<Tensor>> pB;
  std::optional<std::vector<Vector>> pD;
  Labels labels;

  std::size_t num_modalities() const noexcept { return A.size(); }
  std::size_t num_factors() const noexcept { return B.size(); }
  std::vector<std::size_t> num_obs() const;
  std::vector<std::size_t> num_states() const;
  std::vector<std::size_t> num_controls() const;

  /// C[m] at horizon step t, or zeros when C is omitted.
  Vector preference(std::size_t modality, std::size_t t) const;
  /// D, or uniform marginals when D is omitted.
  std::vector<Vector> initial_prior() const;

  friend bool operator==(const GenerativeModel&, const GenerativeModel&) = default;
};

struct Violation {
  std::string array;    // e.g. "A[0]"
  std::string index;    // e.g. "column (2)"; empty for whole-array problems
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  std::string to_string() const;
};

/// Raised when a model fails validation. Carries the full report.
class ValidationError : public Error {
 public:
  explicit ValidationError(ValidationReport report);
  const ValidationReport& report() const noexcept { return report_; }

 private:
  ValidationReport report_;
};

/// Checks every shape, normalisation and positivity invariant of the model.
ValidationReport validate(const GenerativeModel& model);

/// Enumerates every policy of length `policy_len`.
///
/// Factors not listed in `controllable_factors` are pinned to control 0. When
/// `controllable_factors` is omitted, every factor with more than one control is
/// controllable. Policies are ordered lexicographically on the key
/// (factor 0 at t=0..L-1, factor 1 at t=0..L-1, ...), last position fastest.
std::vector<Policy> construct_policies(const std::vector<std::size_t>& num_states,
                                       const std::vector<std::size_t>& num_controls, int policy_len,
                                       std::optional<std::vector<std::size_t>> controllable_factors = {});

/// Column-normalised expectation of a Dirichlet distribution.
Tensor dirichlet_mean(const Tensor& counts);
Vector dirichlet_mean(const Vector& counts);

}  // namespace aif
