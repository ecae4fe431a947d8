#include "robustgame/tensor.hpp"

#include <string>

#include "robustgame/errors.hpp"

namespace robustgame {

std::size_t shape_size(std::span<const std::size_t> shape) {
  if (shape.empty()) return 0;
  std::size_t n = 1;
  for (std::size_t s : shape) n *= s;
  return n;
}

namespace {

void check_shape(const std::vector<std::size_t>& shape) {
  if (shape.empty()) throw InputError("tensor shape must have at least one dimension");
  for (std::size_t s : shape) {
    if (s == 0) throw InputError("tensor dimensions must be positive");
  }
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> shape) : shape_(std::move(shape)) {
  check_shape(shape_);
  data_.assign(shape_size(shape_), 0.0);
}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  check_shape(shape_);
  if (data_.size() != shape_size(shape_)) {
    throw InputError("tensor data length " + std::to_string(data_.size()) +
                     " does not match shape size " + std::to_string(shape_size(shape_)));
  }
}

bool Tensor::in_unit_box() const {
  for (double v : data_) {
    if (!(v >= 0.0 && v <= 1.0)) return false;
  }
  return true;
}

Tensor Tensor::reshaped(std::vector<std::size_t> shape) const {
  return Tensor(std::move(shape), data_);
}

}  // namespace robustgame
