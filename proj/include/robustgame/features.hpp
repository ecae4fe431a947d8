#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "robustgame/network.hpp"
#include "robustgame/tensor.hpp"

namespace robustgame {

// Disjoint, non-empty dimension sets covering every input dimension.
struct FeaturePartition {
  std::vector<std::vector<std::size_t>> features;
  std::string method;
  std::size_t n_dims = 0;

  std::size_t size() const { return features.size(); }
  const std::vector<std::size_t>& operator[](std::size_t i) const { return features[i]; }
};

// Throws InputError unless `p` is a valid partition of `p.n_dims` dimensions.
void validate_partition(const FeaturePartition& p);

FeaturePartition explicit_partition(std::vector<std::vector<std::size_t>> features, std::size_t n_dims);

// Dimension index -> feature id.
std::vector<std::size_t> feature_of_dims(const FeaturePartition& p);

// Symmetric finite-difference sensitivity of the top-class confidence.
std::vector<double> saliency_scores(const Network& net, const Tensor& x, double probe);

// Dimensions sorted by descending score (ties by index) and cut into K
// contiguous rank blocks whose sizes differ by at most one, larger first.
FeaturePartition rank_block_partition(const std::vector<double>& scores, std::size_t k);

FeaturePartition saliency_partition(const Network& net, const Tensor& x, std::size_t k, double probe);

// Pixels in raster order along the longer axis, cut into K near-equal runs;
// every channel of a pixel joins the pixel's feature. Shapes are (h,w,c),
// (h,w) or (n) treated as n x 1.
FeaturePartition block_partition(const std::vector<std::size_t>& shape, std::size_t k);

// "dim_index,feature_id" header, then one row per dimension in index order.
void write_partition_csv(std::ostream& out, const FeaturePartition& p);

}  // namespace robustgame
