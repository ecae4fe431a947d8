#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "robustgame/metrics.hpp"
#include "robustgame/tensor.hpp"

namespace robustgame {

// Shift of one dimension by sign * tau.
struct AtomicManipulation {
  std::size_t dim = 0;
  int sign = +1;

  friend bool operator==(const AtomicManipulation&, const AtomicManipulation&) = default;
};

using Offsets = std::vector<int>;

// Value of one dimension after `offset` steps of size tau, clamped to [0,1].
double grid_value(double base_value, int offset, double tau);

// A tau-grid point relative to a shared base input. The value of dimension i
// is clamp(base[i] + offsets[i] * tau, 0, 1); identity is the offset vector.
class ManipulationState {
 public:
  ManipulationState(std::shared_ptr<const Tensor> base, double tau);
  ManipulationState(std::shared_ptr<const Tensor> base, double tau, Offsets offsets);

  const Tensor& base() const { return *base_; }
  const std::shared_ptr<const Tensor>& base_ptr() const { return base_; }
  double tau() const { return tau_; }
  const Offsets& offsets() const { return offsets_; }
  std::size_t size() const { return offsets_.size(); }

  double value(std::size_t i) const;
  Tensor reconstruct() const;

  ManipulationState apply(AtomicManipulation a) const;
  // Applies sign psi[j] to dims[j], in ascending dimension order.
  ManipulationState apply_set(std::span<const std::size_t> dims, std::span<const int> psi) const;

  // False when the clamped application would leave the value unchanged.
  bool changes(AtomicManipulation a) const;
  // True when `a` does not reduce |offset| of its dimension.
  bool is_forward(AtomicManipulation a) const;

  // Number of atomic manipulations, sum of |offsets|.
  std::size_t depth() const;

  double distance_from_base(Metric m) const;

  friend bool operator==(const ManipulationState& a, const ManipulationState& b) {
    return a.offsets_ == b.offsets_;
  }

 private:
  std::shared_ptr<const Tensor> base_;
  double tau_;
  Offsets offsets_;
};

struct OffsetsHash {
  std::size_t operator()(const Offsets& o) const noexcept;
  std::size_t operator()(const ManipulationState& s) const noexcept { return (*this)(s.offsets()); }
};

bool is_in_budget(const ManipulationState& s, Metric m, double d);

// Distinct grid values of one dimension within `d` of the base value, as
// offsets in the order 0, +1, -1, +2, -2, ... Offsets whose clamped value
// repeats a smaller offset are left out.
std::vector<int> dimension_offsets(double base_value, double tau, double d);

// Visits every distinct tau-grid point within distance d of `base`, base
// first. `visit` returns false to stop early. Returns the number visited.
std::size_t for_each_grid_point(const Tensor& base, double tau, Metric m, double d,
                                const std::function<bool(const Offsets&)>& visit);

// Number of grid points within d, counting stops at `cap + 1`.
std::size_t count_grid_points(const Tensor& base, double tau, Metric m, double d, std::size_t cap);

}  // namespace robustgame
