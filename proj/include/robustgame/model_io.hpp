#pragma once

#include <filesystem>

#include "json.hpp"
#include "robustgame/network.hpp"

namespace robustgame {

// Portable model document (see docs/model_format.md):
//   {"input_shape": [...], "num_classes": n,
//    "layers": [{"type": "dense", "weights": [...], "bias": [...],
//                "params": {"in": 4, "out": 2}}, ..., {"type": "softmax"}]}
// Weights are flat row-major arrays.
Network parse_model(const nlohmann::json& doc);
nlohmann::json model_to_json(const Network& net);

Network load_model(const std::filesystem::path& path);
void save_model(const Network& net, const std::filesystem::path& path);

}  // namespace robustgame
