#include "robustgame/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "robustgame/errors.hpp"

namespace robustgame {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string shape_str(const std::vector<std::size_t>& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

std::vector<std::size_t> output_shape(const Layer& layer,
                                      const std::vector<std::size_t>& in,
                                      std::size_t index) {
  auto fail = [&](const std::string& why) -> std::vector<std::size_t> {
    throw InputError("layer " + std::to_string(index) + " (" + layer_name(layer) +
                     "): " + why + ", input shape " + shape_str(in));
  };
  return std::visit(
      Overloaded{
          [&](const Dense& l) {
            if (in.size() != 1 || in[0] != l.in) return fail("expects a flat input of size " + std::to_string(l.in));
            if (l.out == 0) return fail("zero outputs");
            if (l.weights.size() != l.in * l.out) return fail("weights length mismatch");
            if (l.bias.size() != l.out) return fail("bias length mismatch");
            return std::vector<std::size_t>{l.out};
          },
          [&](const Conv2D& l) {
            if (in.size() != 3 || in[2] != l.in_channels) return fail("expects HWC input with " + std::to_string(l.in_channels) + " channels");
            if (l.stride == 0 || l.kernel_h == 0 || l.kernel_w == 0 || l.out_channels == 0) return fail("zero-sized kernel, stride or channel count");
            if (l.weights.size() != l.out_channels * l.kernel_h * l.kernel_w * l.in_channels) return fail("weights length mismatch");
            if (l.bias.size() != l.out_channels) return fail("bias length mismatch");
            std::size_t ph = in[0] + 2 * l.padding, pw = in[1] + 2 * l.padding;
            if (ph < l.kernel_h || pw < l.kernel_w) return fail("kernel larger than padded input");
            return std::vector<std::size_t>{(ph - l.kernel_h) / l.stride + 1, (pw - l.kernel_w) / l.stride + 1,
                                            l.out_channels};
          },
          [&](const ReLU&) { return in; },
          [&](const MaxPool& l) {
            if (in.size() != 3) return fail("expects HWC input");
            if (l.window == 0 || in[0] < l.window || in[1] < l.window) return fail("window does not fit");
            return std::vector<std::size_t>{in[0] / l.window, in[1] / l.window, in[2]};
          },
          [&](const Flatten&) { return std::vector<std::size_t>{shape_size(in)}; },
          [&](const Softmax&) {
            if (in.size() != 1) return fail("expects a flat input");
            return in;
          },
      },
      layer);
}

void dense_forward(const Dense& l, std::span<const double> x, std::vector<double>& y) {
  y.assign(l.out, 0.0);
  for (std::size_t o = 0; o < l.out; ++o) {
    const double* row = l.weights.data() + o * l.in;
    double acc = l.bias[o];
    for (std::size_t i = 0; i < l.in; ++i) acc += row[i] * x[i];
    y[o] = acc;
  }
}

void conv_forward(const Conv2D& l, const std::vector<std::size_t>& in_shape,
                  const std::vector<std::size_t>& out_shape, std::span<const double> x,
                  std::vector<double>& y) {
  const std::size_t h = in_shape[0], w = in_shape[1], c = in_shape[2];
  const std::size_t oh = out_shape[0], ow = out_shape[1], oc = out_shape[2];
  y.assign(oh * ow * oc, 0.0);
  for (std::size_t r = 0; r < oh; ++r) {
    for (std::size_t col = 0; col < ow; ++col) {
      for (std::size_t k = 0; k < oc; ++k) {
        double acc = l.bias[k];
        for (std::size_t kr = 0; kr < l.kernel_h; ++kr) {
          // Position in the unpadded input; out-of-range taps read zero.
          const long ir = static_cast<long>(r * l.stride + kr) - static_cast<long>(l.padding);
          if (ir < 0 || ir >= static_cast<long>(h)) continue;
          for (std::size_t kc = 0; kc < l.kernel_w; ++kc) {
            const long ic = static_cast<long>(col * l.stride + kc) - static_cast<long>(l.padding);
            if (ic < 0 || ic >= static_cast<long>(w)) continue;
            const double* wk = l.weights.data() + ((k * l.kernel_h + kr) * l.kernel_w + kc) * c;
            const double* xi = x.data() + (static_cast<std::size_t>(ir) * w + static_cast<std::size_t>(ic)) * c;
            for (std::size_t ch = 0; ch < c; ++ch) acc += wk[ch] * xi[ch];
          }
        }
        y[(r * ow + col) * oc + k] = acc;
      }
    }
  }
}

void maxpool_forward(const MaxPool& l, const std::vector<std::size_t>& in_shape,
                     const std::vector<std::size_t>& out_shape, std::span<const double> x,
                     std::vector<double>& y) {
  const std::size_t w = in_shape[1], c = in_shape[2];
  const std::size_t oh = out_shape[0], ow = out_shape[1];
  y.assign(oh * ow * c, -std::numeric_limits<double>::infinity());
  for (std::size_t r = 0; r < oh; ++r) {
    for (std::size_t col = 0; col < ow; ++col) {
      for (std::size_t ch = 0; ch < c; ++ch) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t dr = 0; dr < l.window; ++dr) {
          for (std::size_t dc = 0; dc < l.window; ++dc) {
            const std::size_t ir = r * l.window + dr, ic = col * l.window + dc;
            best = std::max(best, x[(ir * w + ic) * c + ch]);
          }
        }
        y[(r * ow + col) * c + ch] = best;
      }
    }
  }
}

void softmax_inplace(std::vector<double>& v) {
  const double top = *std::max_element(v.begin(), v.end());
  double sum = 0.0;
  for (double& e : v) {
    e = std::exp(e - top);
    sum += e;
  }
  for (double& e : v) e /= sum;
}

}  // namespace

const char* layer_name(const Layer& layer) {
  return std::visit(Overloaded{
                        [](const Dense&) { return "dense"; },
                        [](const Conv2D&) { return "conv2d"; },
                        [](const ReLU&) { return "relu"; },
                        [](const MaxPool&) { return "maxpool"; },
                        [](const Flatten&) { return "flatten"; },
                        [](const Softmax&) { return "softmax"; },
                    },
                    layer);
}

std::size_t argmax(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

double confidence_margin(std::span<const double> probs, std::size_t c) {
  if (c >= probs.size()) throw InputError("class index out of range");
  double other = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (i != c) other = std::max(other, probs[i]);
  }
  return probs[c] - other;
}

Network::Network(std::vector<std::size_t> input_shape, std::vector<Layer> layers,
                 std::size_t num_classes)
    : input_shape_(std::move(input_shape)), layers_(std::move(layers)), num_classes_(num_classes) {
  if (input_shape_.empty() || shape_size(input_shape_) == 0) throw InputError("network input shape is empty");
  if (num_classes_ < 2) throw InputError("a classifier needs at least two classes");
  if (layers_.empty() || !std::holds_alternative<Softmax>(layers_.back())) {
    throw InputError("network must end with a softmax layer");
  }
  shapes_.push_back(input_shape_);
  for (std::size_t i = 0; i < layers_.size(); ++i) shapes_.push_back(output_shape(layers_[i], shapes_.back(), i));
  const std::vector<std::size_t>& shape = shapes_.back();
  if (shape.size() != 1 || shape[0] != num_classes_) {
    throw InputError("network output " + shape_str(shape) + " does not match num_classes " +
                     std::to_string(num_classes_));
  }
}

std::vector<double> Network::forward(const Tensor& x) const {
  if (x.shape() != input_shape_) {
    throw InputError("input shape " + shape_str(x.shape()) + " does not match network input " +
                     shape_str(input_shape_));
  }
  if (!x.in_unit_box()) throw InputError("input values must lie in [0,1]");

  std::vector<double> cur(x.data().begin(), x.data().end());
  std::vector<double> next;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const Layer& layer = layers_[i];
    const std::vector<std::size_t>& shape = shapes_[i];
    const std::vector<std::size_t>& out = shapes_[i + 1];
    std::visit(Overloaded{
                   [&](const Dense& l) { dense_forward(l, cur, next); cur.swap(next); },
                   [&](const Conv2D& l) { conv_forward(l, shape, out, cur, next); cur.swap(next); },
                   [&](const ReLU&) {
                     for (double& v : cur) v = v > 0.0 ? v : 0.0;
                   },
                   [&](const MaxPool& l) { maxpool_forward(l, shape, out, cur, next); cur.swap(next); },
                   [&](const Flatten&) {},
                   [&](const Softmax&) { softmax_inplace(cur); },
               },
               layer);
    for (double v : cur) {
      if (!std::isfinite(v)) {
        throw NumericError("non-finite value after layer " + std::to_string(i) + " (" + layer_name(layer) + ")");
      }
    }
  }
  return cur;
}

std::size_t Network::classify(const Tensor& x) const { return argmax(forward(x)); }

double Network::confidence_margin(const Tensor& x, std::size_t c) const {
  if (c >= num_classes_) throw InputError("class index out of range");
  return robustgame::confidence_margin(forward(x), c);
}

}  // namespace robustgame
