#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace aif {

using Vector = std::vector<double>;

/// One marginal per hidden-state factor.
using Belief = std::vector<Vector>;

/// Dense row-major array with explicit dims.
///
/// For conditional distributions the first dim is the support and the remaining
/// dims are the conditioning variables, so entry (i, j, k, ...) holds
/// P(x = i | y = j, z = k, ...). A "column" is the contiguous-by-stride slice
/// obtained by fixing every conditioning index; columns are numbered in
/// row-major order over the conditioning dims.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> dims, double fill = 0.0);
  Tensor(std::vector<std::size_t> dims, std::vector<double> values);

  /// Builds a 2-D tensor from rows, e.g. a transition slice or a likelihood matrix.
  static Tensor from_rows(std::initializer_list<std::initializer_list<double>> rows);

  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  std::size_t rank() const noexcept { return dims_.size(); }
  std::size_t size() const noexcept { return values_.size(); }
  std::size_t dim(std::size_t axis) const { return dims_.at(axis); }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  /// Size of the support (first dim).
  std::size_t support_size() const { return dims_.empty() ? 0 : dims_[0]; }
  /// Number of columns, i.e. the product of the conditioning dims.
  std::size_t num_columns() const;
  /// Conditioning dims (everything but the first).
  std::vector<std::size_t> cond_dims() const;

  double& operator()(std::initializer_list<std::size_t> index);
  double operator()(std::initializer_list<std::size_t> index) const;
  double& at(std::span<const std::size_t> index);
  double at(std::span<const std::size_t> index) const;

  /// Entry `row` of column `column`.
  double& cell(std::size_t row, std::size_t column) { return values_[row * num_columns() + column]; }
  double cell(std::size_t row, std::size_t column) const { return values_[row * num_columns() + column]; }

  Vector column(std::size_t column) const;
  /// Sum over the support for each column.
  Vector column_sums() const;

  /// Row-major flat offset of a full multi-index.
  std::size_t offset(std::span<const std::size_t> index) const;

  double sum() const;

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  std::vector<std::size_t> dims_;
  std::vector<double> values_;
};

/// "3x3x2"
std::string dims_to_string(const std::vector<std::size_t>& dims);

/// Decodes a row-major linear index into a multi-index over `dims`.
void unravel_index(std::size_t linear, std::span<const std::size_t> dims, std::span<std::size_t> out);

std::size_t product(std::span<const std::size_t> dims);

}  // namespace aif
