#include "robustgame/features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include "robustgame/errors.hpp"

namespace robustgame {

namespace {

// Sizes of k near-equal blocks of n items, larger blocks first.
std::vector<std::size_t> block_sizes(std::size_t n, std::size_t k) {
  std::vector<std::size_t> sizes(k, n / k);
  for (std::size_t i = 0; i < n % k; ++i) ++sizes[i];
  return sizes;
}

}  // namespace

void validate_partition(const FeaturePartition& p) {
  if (p.features.empty()) throw InputError("partition has no features");
  std::vector<int> seen(p.n_dims, -1);
  for (std::size_t f = 0; f < p.features.size(); ++f) {
    if (p.features[f].empty()) throw InputError("feature " + std::to_string(f) + " is empty");
    for (std::size_t dim : p.features[f]) {
      if (dim >= p.n_dims) throw InputError("feature " + std::to_string(f) + " names dimension out of range");
      if (seen[dim] != -1) throw InputError("dimension " + std::to_string(dim) + " belongs to two features");
      seen[dim] = static_cast<int>(f);
    }
  }
  for (std::size_t i = 0; i < p.n_dims; ++i) {
    if (seen[i] == -1) throw InputError("dimension " + std::to_string(i) + " belongs to no feature");
  }
}

FeaturePartition explicit_partition(std::vector<std::vector<std::size_t>> features, std::size_t n_dims) {
  FeaturePartition p{std::move(features), "explicit", n_dims};
  validate_partition(p);
  return p;
}

std::vector<std::size_t> feature_of_dims(const FeaturePartition& p) {
  std::vector<std::size_t> owner(p.n_dims, 0);
  for (std::size_t f = 0; f < p.features.size(); ++f) {
    for (std::size_t dim : p.features[f]) owner[dim] = f;
  }
  return owner;
}

std::vector<double> saliency_scores(const Network& net, const Tensor& x, double probe) {
  if (!(probe > 0.0)) throw InputError("saliency probe must be positive");
  const std::vector<double> probs = net.forward(x);
  const std::size_t top = argmax(probs);
  std::vector<double> scores(x.size(), 0.0);
  Tensor shifted = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double s = 0.0;
    for (double dir : {+1.0, -1.0}) {
      shifted[i] = std::clamp(x[i] + dir * probe, 0.0, 1.0);
      s += std::abs(net.forward(shifted)[top] - probs[top]);
    }
    shifted[i] = x[i];
    scores[i] = s;
  }
  return scores;
}

FeaturePartition rank_block_partition(const std::vector<double>& scores, std::size_t k) {
  const std::size_t n = scores.size();
  if (k == 0) throw InputError("feature count must be at least 1");
  if (k > n) throw InputError("feature count " + std::to_string(k) + " exceeds " + std::to_string(n) + " dimensions");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  FeaturePartition p{{}, "saliency", n};
  std::size_t pos = 0;
  for (std::size_t size : block_sizes(n, k)) {
    p.features.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(pos),
                            order.begin() + static_cast<std::ptrdiff_t>(pos + size));
    pos += size;
  }
  return p;
}

FeaturePartition saliency_partition(const Network& net, const Tensor& x, std::size_t k, double probe) {
  if (k == 0 || k > x.size()) {
    throw InputError("feature count must lie in [1, " + std::to_string(x.size()) + "]");
  }
  return rank_block_partition(saliency_scores(net, x, probe), k);
}

FeaturePartition block_partition(const std::vector<std::size_t>& shape, std::size_t k) {
  std::size_t h = 0, w = 1, c = 1;
  if (shape.size() == 1) {
    h = shape[0];
  } else if (shape.size() == 2) {
    h = shape[0];
    w = shape[1];
  } else if (shape.size() == 3) {
    h = shape[0];
    w = shape[1];
    c = shape[2];
  } else {
    throw InputError("block partition needs a shape of rank 1 to 3");
  }
  if (h == 0 || w == 0 || c == 0) throw InputError("shape dimensions must be positive");
  const std::size_t pixels = h * w;
  if (k == 0) throw InputError("feature count must be at least 1");
  if (k > pixels) throw InputError("feature count " + std::to_string(k) + " exceeds " + std::to_string(pixels) + " pixels");

  const bool row_major = h >= w;
  FeaturePartition p{{}, "blocks", pixels * c};
  std::size_t rank = 0;
  for (std::size_t size : block_sizes(pixels, k)) {
    std::vector<std::size_t> dims;
    for (std::size_t j = 0; j < size; ++j, ++rank) {
      const std::size_t row = row_major ? rank / w : rank % h;
      const std::size_t col = row_major ? rank % w : rank / h;
      for (std::size_t ch = 0; ch < c; ++ch) dims.push_back((row * w + col) * c + ch);
    }
    p.features.push_back(std::move(dims));
  }
  return p;
}

void write_partition_csv(std::ostream& out, const FeaturePartition& p) {
  out << "dim_index,feature_id\n";
  const auto owner = feature_of_dims(p);
  for (std::size_t i = 0; i < owner.size(); ++i) out << i << "," << owner[i] << "\n";
}

}  // namespace robustgame
