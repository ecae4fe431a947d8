#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "robustgame/tensor.hpp"

namespace robustgame {

// Fully connected layer on a flat input. `weights` is row-major [out][in].
struct Dense {
  std::size_t in = 0;
  std::size_t out = 0;
  std::vector<double> weights;
  std::vector<double> bias;
};

// 2-D convolution over an HWC input with zero padding.
// `weights` is row-major [out_channels][kernel_h][kernel_w][in_channels].
struct Conv2D {
  std::size_t kernel_h = 1;
  std::size_t kernel_w = 1;
  std::size_t in_channels = 1;
  std::size_t out_channels = 1;
  std::size_t stride = 1;
  std::size_t padding = 0;
  std::vector<double> weights;
  std::vector<double> bias;
};

struct ReLU {};

// Non-overlapping max pooling (stride equals the window) over an HWC input.
struct MaxPool {
  std::size_t window = 2;
};

struct Flatten {};
struct Softmax {};

using Layer = std::variant<Dense, Conv2D, ReLU, MaxPool, Flatten, Softmax>;

const char* layer_name(const Layer& layer);

// Index of the largest entry; ties resolve to the lowest index.
std::size_t argmax(std::span<const double> values);

// min over c' != c of probs[c] - probs[c'].
double confidence_margin(std::span<const double> probs, std::size_t c);

// Immutable feed-forward classifier. Construction checks that consecutive
// layer shapes agree and that the stack ends in a Softmax over
// `num_classes` outputs. Safe to share read-only between threads.
class Network {
 public:
  Network(std::vector<std::size_t> input_shape, std::vector<Layer> layers,
          std::size_t num_classes);

  const std::vector<std::size_t>& input_shape() const { return input_shape_; }
  std::size_t input_size() const { return shape_size(input_shape_); }
  std::size_t num_classes() const { return num_classes_; }
  const std::vector<Layer>& layers() const { return layers_; }

  // Class confidences N(x, .). Throws InputError on shape mismatch or values
  // outside [0,1], NumericError on a non-finite intermediate.
  std::vector<double> forward(const Tensor& x) const;

  std::size_t classify(const Tensor& x) const;

  double confidence_margin(const Tensor& x, std::size_t c) const;

 private:
  std::vector<std::size_t> input_shape_;
  std::vector<Layer> layers_;
  std::size_t num_classes_;
  // shapes_[i] is the input shape of layer i; shapes_.back() the output.
  std::vector<std::vector<std::size_t>> shapes_;
};

}  // namespace robustgame
