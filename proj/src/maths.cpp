#include "aif/maths.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "aif/errors.hpp"

namespace aif {

Vector softmax(std::span<const double> logits) {
  if (logits.empty()) return {};
  for (double x : logits) {
    if (!std::isfinite(x)) throw NumericalError("non-finite logits");
  }
  const double peak = *std::max_element(logits.begin(), logits.end());
  Vector out(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - peak);
    total += out[i];
  }
  for (double& x : out) x /= total;
  return out;
}

double log_stable(double p) {
  if (p < 0.0) throw NumericalError("negative probability");
  return std::log(std::max(p, kLogEpsilon));
}

Vector log_stable(std::span<const double> p) {
  Vector out(p.size());
  std::transform(p.begin(), p.end(), out.begin(), [](double x) { return log_stable(x); });
  return out;
}

double entropy(std::span<const double> p) {
  double h = 0.0;
  for (double x : p) h -= x * log_stable(x);
  return h;
}

Vector normalized(std::span<const double> v) {
  const double total = std::accumulate(v.begin(), v.end(), 0.0);
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw NumericalError("cannot normalise a vector with mass " + std::to_string(total));
  }
  Vector out(v.begin(), v.end());
  for (double& x : out) x /= total;
  return out;
}

bool is_categorical(std::span<const double> p, double tol) {
  double total = 0.0;
  for (double x : p) {
    if (!(x >= 0.0)) return false;
    total += x;
  }
  return !p.empty() && std::abs(total - 1.0) <= tol;
}

void check_belief_shape(const Tensor& A, const Belief& qs, const char* what) {
  const auto cond = A.cond_dims();
  bool ok = cond.size() == qs.size();
  for (std::size_t f = 0; ok && f < qs.size(); ++f) ok = cond[f] == qs[f].size();
  if (!ok) {
    std::vector<std::size_t> actual;
    for (const auto& q : qs) actual.push_back(q.size());
    throw ShapeError(std::string(what) + ": expected belief dims " + dims_to_string(cond) +
                     ", got " + dims_to_string(actual));
  }
}

Vector joint(const Belief& qs) {
  Vector out{1.0};
  for (const auto& q : qs) {
    Vector next(out.size() * q.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      for (std::size_t j = 0; j < q.size(); ++j) next[i * q.size() + j] = out[i] * q[j];
    }
    out = std::move(next);
  }
  return out;
}

Vector expected_likelihood(const Tensor& A, const Belief& qs) {
  check_belief_shape(A, qs, "expected_likelihood");
  const Vector qs_joint = joint(qs);
  const std::size_t cols = A.num_columns();
  Vector qo(A.support_size(), 0.0);
  for (std::size_t o = 0; o < qo.size(); ++o) {
    for (std::size_t c = 0; c < cols; ++c) qo[o] += A.cell(o, c) * qs_joint[c];
  }
  return normalized(qo);
}

Vector likelihood_message(const Tensor& A, std::size_t obs, const Belief& qs, std::size_t target) {
  check_belief_shape(A, qs, "likelihood_message");
  if (obs >= A.support_size()) {
    throw IndexError("observation " + std::to_string(obs) + " out of range for " +
                     std::to_string(A.support_size()) + " outcomes");
  }
  if (target >= qs.size()) {
    throw IndexError("factor " + std::to_string(target) + " out of range for " +
                     std::to_string(qs.size()) + " factors");
  }
  const auto cond = A.cond_dims();
  const std::size_t cols = A.num_columns();
  std::vector<std::size_t> states(cond.size());
  Vector message(qs[target].size(), 0.0);
  for (std::size_t c = 0; c < cols; ++c) {
    unravel_index(c, cond, states);
    double weight = 1.0;
    for (std::size_t f = 0; f < qs.size(); ++f) {
      if (f != target) weight *= qs[f][states[f]];
    }
    if (weight == 0.0) continue;
    message[states[target]] += weight * log_stable(A.cell(obs, c));
  }
  return message;
}

Tensor outer(const std::vector<Vector>& vs) {
  if (vs.empty()) throw ShapeError("outer product of an empty list");
  std::vector<std::size_t> dims;
  for (const auto& v : vs) dims.push_back(v.size());
  Vector flat = joint(vs);
  return Tensor(std::move(dims), std::move(flat));
}

double mutual_information(const std::vector<Tensor>& A, const Belief& qs) {
  if (A.empty()) return 0.0;
  for (const auto& a : A) check_belief_shape(a, qs, "mutual_information");
  const Vector qs_joint = joint(qs);
  const std::size_t cols = qs_joint.size();

  double ambiguity = 0.0;
  for (const auto& a : A) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (qs_joint[c] == 0.0) continue;
      double h = 0.0;
      for (std::size_t o = 0; o < a.support_size(); ++o) h -= a.cell(o, c) * log_stable(a.cell(o, c));
      ambiguity += qs_joint[c] * h;
    }
  }

  // Joint predictive over all outcome tuples, built one modality at a time:
  // rows index outcome tuples, columns index joint states.
  Vector tuples(cols);
  std::copy(qs_joint.begin(), qs_joint.end(), tuples.begin());
  std::size_t n_tuples = 1;
  for (const auto& a : A) {
    const std::size_t n_obs = a.support_size();
    Vector next(n_tuples * n_obs * cols);
    for (std::size_t r = 0; r < n_tuples; ++r) {
      for (std::size_t o = 0; o < n_obs; ++o) {
        for (std::size_t c = 0; c < cols; ++c) {
          next[(r * n_obs + o) * cols + c] = tuples[r * cols + c] * a.cell(o, c);
        }
      }
    }
    tuples = std::move(next);
    n_tuples *= n_obs;
  }
  Vector qo(n_tuples, 0.0);
  for (std::size_t r = 0; r < n_tuples; ++r) {
    for (std::size_t c = 0; c < cols; ++c) qo[r] += tuples[r * cols + c];
  }
  return entropy(qo) - ambiguity;
}

}  // namespace aif
