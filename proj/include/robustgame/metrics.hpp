#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "robustgame/tensor.hpp"

namespace robustgame {

// L_k distance on input space. L0 counts differing dimensions and is only
// meaningful for reporting; guarantee-bearing code calls require_guarantee_metric.
enum class Metric { kL0, kL1, kL2, kLInf };

// Absolute slack used for every "distance <= radius" comparison.
inline constexpr double kRadiusSlack = 1e-12;

// Accepts L0, L1, L2, Linf (case-insensitive; "inf" also accepted for Linf).
Metric parse_metric(std::string_view text);
std::string metric_name(Metric m);

// Throws UnsupportedMetricError for L0.
void require_guarantee_metric(Metric m);

double distance(Metric m, std::span<const double> a, std::span<const double> b);
double distance(Metric m, const Tensor& a, const Tensor& b);

bool in_neighborhood(Metric m, const Tensor& center, const Tensor& x, double radius);

// Diameter of one tau-grid cell, (n * tau^k)^(1/k). Half of it bounds the
// error of grid-restricted answers.
double grid_cell_radius(Metric m, std::size_t n_dims, double tau);

}  // namespace robustgame
