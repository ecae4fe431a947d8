#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace robustgame {

std::size_t shape_size(std::span<const std::size_t> shape);

// Dense row-major array of doubles. Classifier inputs live in [0,1].
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> shape);
  Tensor(std::vector<std::size_t> shape, std::vector<double> data);

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t size() const { return data_.size(); }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  double operator[](std::size_t i) const { return data_[i]; }
  double& operator[](std::size_t i) { return data_[i]; }

  // True iff every value lies in [0,1].
  bool in_unit_box() const;

  // Same data under a new shape of equal size.
  Tensor reshaped(std::vector<std::size_t> shape) const;

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

}  // namespace robustgame
