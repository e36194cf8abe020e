#include "aif/genmodel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "aif/maths.hpp"

namespace aif {

std::vector<std::size_t> GenerativeModel::num_obs() const {
  std::vector<std::size_t> out;
  for (const auto& a : A) out.push_back(a.support_size());
  return out;
}

std::vector<std::size_t> GenerativeModel::num_states() const {
  std::vector<std::size_t> out;
  for (const auto& b : B) out.push_back(b.rank() > 0 ? b.dim(0) : 0);
  return out;
}

std::vector<std::size_t> GenerativeModel::num_controls() const {
  std::vector<std::size_t> out;
  for (const auto& b : B) out.push_back(b.rank() == 3 ? b.dim(2) : 1);
  return out;
}

Vector GenerativeModel::preference(std::size_t modality, std::size_t t) const {
  if (modality >= A.size()) throw IndexError("modality " + std::to_string(modality) + " out of range");
  if (C.empty()) return Vector(A[modality].support_size(), 0.0);
  const Tensor& c = C.at(modality);
  if (c.rank() == 1) return {c.values().begin(), c.values().end()};
  if (t >= c.dim(0)) {
    throw IndexError("C[" + std::to_string(modality) + "] covers " + std::to_string(c.dim(0)) +
                     " timesteps, horizon step " + std::to_string(t) + " requested");
  }
  const std::size_t n = c.dim(1);
  auto row = c.values().subspan(t * n, n);
  return {row.begin(), row.end()};
}

std::vector<Vector> GenerativeModel::initial_prior() const {
  if (!D.empty()) return D;
  std::vector<Vector> out;
  for (std::size_t s : num_states()) out.emplace_back(s, 1.0 / static_cast<double>(s));
  return out;
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const auto& v : violations) {
    os << v.array;
    if (!v.index.empty()) os << ' ' << v.index;
    os << ": " << v.message << '\n';
  }
  return os.str();
}

ValidationError::ValidationError(ValidationReport report)
    : Error("model failed validation:\n" + report.to_string()), report_(std::move(report)) {}

namespace {

std::string indexed(const char* name, std::size_t i) { return std::string(name) + "[" + std::to_string(i) + "]"; }

std::string column_label(const Tensor& t, std::size_t column) {
  const auto cond = t.cond_dims();
  std::vector<std::size_t> idx(cond.size());
  unravel_index(column, cond, idx);
  std::string out = "column (";
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(idx[i]);
  }
  return out + ")";
}

std::string format_number(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

void check_stochastic(const Tensor& t, const std::string& name, ValidationReport& report) {
  if (!all_finite(t.values())) {
    report.violations.push_back({name, "", "non-finite entries"});
    return;
  }
  const std::size_t cols = t.num_columns();
  for (std::size_t c = 0; c < cols; ++c) {
    double total = 0.0;
    bool negative = false;
    for (std::size_t i = 0; i < t.support_size(); ++i) {
      total += t.cell(i, c);
      negative = negative || t.cell(i, c) < 0.0;
    }
    if (negative) {
      report.violations.push_back({name, column_label(t, c), "negative probability"});
    } else if (std::abs(total - 1.0) > kNormTolerance) {
      report.violations.push_back({name, column_label(t, c),
                                   "column sums to " + format_number(total) + " (deficit " +
                                       format_number(1.0 - total) + ")"});
    }
  }
}

void check_categorical(const Vector& v, const std::string& name, ValidationReport& report) {
  if (!all_finite(v)) {
    report.violations.push_back({name, "", "non-finite entries"});
  } else if (!is_categorical(v)) {
    double total = 0.0;
    for (double x : v) total += x;
    report.violations.push_back({name, "", "not a categorical distribution (sums to " + format_number(total) + ")"});
  }
}

void check_counts(std::span<const double> values, const std::string& name, ValidationReport& report) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
      report.violations.push_back({name, "entry " + std::to_string(i), "Dirichlet counts must be positive and finite"});
      return;
    }
  }
}

}  // namespace

ValidationReport validate(const GenerativeModel& model) {
  ValidationReport report;
  auto& out = report.violations;

  if (model.A.empty()) out.push_back({"A", "", "at least one modality required"});
  if (model.B.empty()) out.push_back({"B", "", "at least one hidden-state factor required"});

  std::vector<std::size_t> num_states;
  bool b_shapes_ok = true;
  for (std::size_t f = 0; f < model.B.size(); ++f) {
    const Tensor& b = model.B[f];
    const std::string name = indexed("B", f);
    if (b.rank() > 3) {
      out.push_back({name, "", "dims " + dims_to_string(b.dims()) +
                                   ": transitions may only depend on the factor's own state and control"});
      b_shapes_ok = false;
      continue;
    }
    if (b.rank() != 3) {
      out.push_back({name, "", "dims " + dims_to_string(b.dims()) + ": expected S x S x U"});
      b_shapes_ok = false;
      continue;
    }
    if (b.dim(0) != b.dim(1)) {
      out.push_back({name, "", "dims " + dims_to_string(b.dims()) + ": square state dims required"});
      b_shapes_ok = false;
      continue;
    }
    if (b.dim(0) == 0 || b.dim(2) == 0) {
      out.push_back({name, "", "dims " + dims_to_string(b.dims()) + ": empty state or control dimension"});
      b_shapes_ok = false;
      continue;
    }
    num_states.push_back(b.dim(0));
    check_stochastic(b, name, report);
  }

  for (std::size_t m = 0; m < model.A.size(); ++m) {
    const Tensor& a = model.A[m];
    const std::string name = indexed("A", m);
    if (a.rank() == 0 || a.support_size() == 0) {
      out.push_back({name, "", "empty likelihood"});
      continue;
    }
    if (b_shapes_ok && a.cond_dims() != num_states) {
      out.push_back({name, "", "dims " + dims_to_string(a.dims()) + ": conditioning dims must equal the state dims " +
                                   dims_to_string(num_states)});
      continue;
    }
    check_stochastic(a, name, report);
  }

  if (!model.C.empty()) {
    if (model.C.size() != model.A.size()) {
      out.push_back({"C", "", "expected " + std::to_string(model.A.size()) + " modalities, got " +
                                  std::to_string(model.C.size())});
    } else {
      for (std::size_t m = 0; m < model.C.size(); ++m) {
        const Tensor& c = model.C[m];
        const std::string name = indexed("C", m);
        const std::size_t n_obs = model.A[m].support_size();
        const bool shape_ok = (c.rank() == 1 && c.dim(0) == n_obs) ||
                              (c.rank() == 2 && c.dim(1) == n_obs && c.dim(0) >= 1);
        if (!shape_ok) {
          out.push_back({name, "", "dims " + dims_to_string(c.dims()) + ": expected " + std::to_string(n_obs) +
                                       " or T x " + std::to_string(n_obs)});
        } else if (!all_finite(c.values())) {
          out.push_back({name, "", "non-finite log-preferences"});
        }
      }
    }
  }

  if (!model.D.empty()) {
    if (model.D.size() != model.B.size()) {
      out.push_back({"D", "", "expected " + std::to_string(model.B.size()) + " factors, got " +
                                  std::to_string(model.D.size())});
    } else {
      for (std::size_t f = 0; f < model.D.size(); ++f) {
        const std::string name = indexed("D", f);
        if (b_shapes_ok && model.D[f].size() != num_states[f]) {
          out.push_back({name, "", "length " + std::to_string(model.D[f].size()) + " does not match " +
                                       std::to_string(num_states[f]) + " states"});
        } else {
          check_categorical(model.D[f], name, report);
        }
      }
    }
  }

  if (model.E) check_categorical(*model.E, "E", report);

  if (model.pA) {
    if (model.pA->size() != model.A.size()) {
      out.push_back({"pA", "", "expected " + std::to_string(model.A.size()) + " modalities"});
    } else {
      for (std::size_t m = 0; m < model.A.size(); ++m) {
        const std::string name = indexed("pA", m);
        if ((*model.pA)[m].dims() != model.A[m].dims()) {
          out.push_back({name, "", "dims " + dims_to_string((*model.pA)[m].dims()) + " do not mirror A"});
        } else {
          check_counts((*model.pA)[m].values(), name, report);
        }
      }
    }
  }
  if (model.pB) {
    if (model.pB->size() != model.B.size()) {
      out.push_back({"pB", "", "expected " + std::to_string(model.B.size()) + " factors"});
    } else {
      for (std::size_t f = 0; f < model.B.size(); ++f) {
        const std::string name = indexed("pB", f);
        if ((*model.pB)[f].dims() != model.B[f].dims()) {
          out.push_back({name, "", "dims " + dims_to_string((*model.pB)[f].dims()) + " do not mirror B"});
        } else {
          check_counts((*model.pB)[f].values(), name, report);
        }
      }
    }
  }
  if (model.pD) {
    if (model.pD->size() != model.B.size()) {
      out.push_back({"pD", "", "expected " + std::to_string(model.B.size()) + " factors"});
    } else {
      for (std::size_t f = 0; f < model.pD->size(); ++f) {
        const std::string name = indexed("pD", f);
        if (b_shapes_ok && (*model.pD)[f].size() != num_states[f]) {
          out.push_back({name, "", "length does not match the state dims"});
        } else {
          check_counts((*model.pD)[f], name, report);
        }
      }
    }
  }
  return report;
}

std::vector<Policy> construct_policies(const std::vector<std::size_t>& num_states,
                                       const std::vector<std::size_t>& num_controls, int policy_len,
                                       std::optional<std::vector<std::size_t>> controllable_factors) {
  if (policy_len <= 0) throw Error("policy_len must be at least 1, got " + std::to_string(policy_len));
  if (num_controls.empty()) throw Error("empty control list");
  if (!num_states.empty() && num_states.size() != num_controls.size()) {
    throw ShapeError("num_states lists " + std::to_string(num_states.size()) + " factors, num_controls " +
                     std::to_string(num_controls.size()));
  }
  const std::size_t n_factors = num_controls.size();
  const auto horizon = static_cast<std::size_t>(policy_len);

  std::vector<std::size_t> effective(n_factors, 1);
  for (std::size_t f = 0; f < n_factors; ++f) {
    if (num_controls[f] == 0) throw Error("factor " + std::to_string(f) + " has no controls");
  }
  if (controllable_factors) {
    for (std::size_t f : *controllable_factors) {
      if (f >= n_factors) throw IndexError("controllable factor " + std::to_string(f) + " out of range");
      effective[f] = num_controls[f];
    }
  } else {
    effective = num_controls;
  }

  // Key position p = f * horizon + t; the last position varies fastest.
  const std::size_t n_positions = n_factors * horizon;
  std::vector<std::size_t> key(n_positions, 0);
  std::vector<Policy> policies;
  while (true) {
    Policy pi;
    pi.steps.assign(horizon, Action(n_factors, 0));
    for (std::size_t f = 0; f < n_factors; ++f) {
      for (std::size_t t = 0; t < horizon; ++t) pi.steps[t][f] = key[f * horizon + t];
    }
    policies.push_back(std::move(pi));

    std::size_t p = n_positions;
    while (p > 0) {
      --p;
      if (++key[p] < effective[p / horizon]) break;
      key[p] = 0;
      if (p == 0) return policies;
    }
  }
}

Tensor dirichlet_mean(const Tensor& counts) {
  for (double x : counts.values()) {
    if (!(x > 0.0)) throw NumericalError("Dirichlet counts must be positive");
  }
  Tensor out = counts;
  const Vector sums = counts.column_sums();
  for (std::size_t i = 0; i < out.support_size(); ++i) {
    for (std::size_t c = 0; c < sums.size(); ++c) out.cell(i, c) /= sums[c];
  }
  return out;
}

Vector dirichlet_mean(const Vector& counts) {
  for (double x : counts) {
    if (!(x > 0.0)) throw NumericalError("Dirichlet counts must be positive");
  }
  return normalized(counts);
}

}  // namespace aif
