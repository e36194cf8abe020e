#include "aif/tensor.hpp"

#include <functional>
#include <numeric>

#include "aif/errors.hpp"

namespace aif {

std::size_t product(std::span<const std::size_t> dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

Tensor::Tensor(std::vector<std::size_t> dims, double fill)
    : dims_(std::move(dims)), values_(product(dims_), fill) {}

Tensor::Tensor(std::vector<std::size_t> dims, std::vector<double> values)
    : dims_(std::move(dims)), values_(std::move(values)) {
  if (values_.size() != product(dims_)) {
    throw ShapeError("tensor of dims " + dims_to_string(dims_) + " needs " +
                     std::to_string(product(dims_)) + " values, got " +
                     std::to_string(values_.size()));
  }
}

Tensor Tensor::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t n_rows = rows.size();
  const std::size_t n_cols = n_rows == 0 ? 0 : rows.begin()->size();
  std::vector<double> values;
  values.reserve(n_rows * n_cols);
  for (const auto& row : rows) {
    if (row.size() != n_cols) throw ShapeError("ragged rows in Tensor::from_rows");
    values.insert(values.end(), row.begin(), row.end());
  }
  return Tensor({n_rows, n_cols}, std::move(values));
}

std::size_t Tensor::num_columns() const {
  if (dims_.empty()) return 0;
  return product(std::span(dims_).subspan(1));
}

std::vector<std::size_t> Tensor::cond_dims() const {
  if (dims_.empty()) return {};
  return {dims_.begin() + 1, dims_.end()};
}

std::size_t Tensor::offset(std::span<const std::size_t> index) const {
  if (index.size() != dims_.size()) {
    throw ShapeError("index of rank " + std::to_string(index.size()) + " into tensor of dims " +
                     dims_to_string(dims_));
  }
  std::size_t flat = 0;
  for (std::size_t axis = 0; axis < dims_.size(); ++axis) {
    if (index[axis] >= dims_[axis]) {
      throw IndexError("index " + std::to_string(index[axis]) + " out of range on axis " +
                       std::to_string(axis) + " of tensor " + dims_to_string(dims_));
    }
    flat = flat * dims_[axis] + index[axis];
  }
  return flat;
}

double& Tensor::operator()(std::initializer_list<std::size_t> index) {
  return values_[offset(std::span(index.begin(), index.size()))];
}

double Tensor::operator()(std::initializer_list<std::size_t> index) const {
  return values_[offset(std::span(index.begin(), index.size()))];
}

double& Tensor::at(std::span<const std::size_t> index) { return values_[offset(index)]; }
double Tensor::at(std::span<const std::size_t> index) const { return values_[offset(index)]; }

Vector Tensor::column(std::size_t column) const {
  const std::size_t cols = num_columns();
  if (column >= cols) throw IndexError("column " + std::to_string(column) + " out of range");
  Vector out(support_size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = values_[i * cols + column];
  return out;
}

Vector Tensor::column_sums() const {
  const std::size_t cols = num_columns();
  Vector sums(cols, 0.0);
  for (std::size_t i = 0; i < support_size(); ++i) {
    for (std::size_t c = 0; c < cols; ++c) sums[c] += values_[i * cols + c];
  }
  return sums;
}

double Tensor::sum() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

std::string dims_to_string(const std::vector<std::size_t>& dims) {
  std::string out;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) out += 'x';
    out += std::to_string(dims[i]);
  }
  return out.empty() ? "scalar" : out;
}

void unravel_index(std::size_t linear, std::span<const std::size_t> dims, std::span<std::size_t> out) {
  for (std::size_t axis = dims.size(); axis-- > 0;) {
    out[axis] = linear % dims[axis];
    linear /= dims[axis];
  }
}

}  // namespace aif
