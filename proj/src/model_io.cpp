#include "robustgame/model_io.hpp"

#include <fstream>
#include <string>

#include "robustgame/errors.hpp"

namespace robustgame {

using nlohmann::json;

namespace {

std::vector<double> number_array(const json& layer, const char* key, std::size_t index) {
  if (!layer.contains(key) || !layer[key].is_array()) {
    throw ParseError("layer " + std::to_string(index) + ": missing array '" + key + "'");
  }
  std::vector<double> out;
  out.reserve(layer[key].size());
  for (const json& v : layer[key]) {
    if (!v.is_number()) throw ParseError("layer " + std::to_string(index) + ": non-numeric entry in '" + key + "'");
    out.push_back(v.get<double>());
  }
  return out;
}

std::size_t size_param(const json& params, const char* key, std::size_t index,
                       std::optional<std::size_t> fallback = std::nullopt) {
  if (!params.contains(key)) {
    if (fallback) return *fallback;
    throw ParseError("layer " + std::to_string(index) + ": missing param '" + key + "'");
  }
  const json& v = params[key];
  if (!v.is_number_unsigned()) {
    throw ParseError("layer " + std::to_string(index) + ": param '" + key + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

Layer parse_layer(const json& layer, std::size_t index) {
  if (!layer.is_object() || !layer.contains("type") || !layer["type"].is_string()) {
    throw ParseError("layer " + std::to_string(index) + ": missing 'type'");
  }
  const std::string type = layer["type"].get<std::string>();
  const json params = layer.value("params", json::object());
  if (type == "dense") {
    Dense d;
    d.in = size_param(params, "in", index);
    d.out = size_param(params, "out", index);
    d.weights = number_array(layer, "weights", index);
    d.bias = number_array(layer, "bias", index);
    return d;
  }
  if (type == "conv2d") {
    Conv2D c;
    c.kernel_h = size_param(params, "kernel_h", index);
    c.kernel_w = size_param(params, "kernel_w", index);
    c.in_channels = size_param(params, "in_channels", index);
    c.out_channels = size_param(params, "out_channels", index);
    c.stride = size_param(params, "stride", index, 1);
    c.padding = size_param(params, "padding", index, 0);
    c.weights = number_array(layer, "weights", index);
    c.bias = number_array(layer, "bias", index);
    return c;
  }
  if (type == "relu") return ReLU{};
  if (type == "maxpool") return MaxPool{size_param(params, "window", index)};
  if (type == "flatten") return Flatten{};
  if (type == "softmax") return Softmax{};
  throw ParseError("layer " + std::to_string(index) + ": unsupported layer type '" + type + "'");
}

}  // namespace

Network parse_model(const json& doc) {
  if (!doc.is_object()) throw ParseError("model document must be a JSON object");
  if (!doc.contains("input_shape") || !doc["input_shape"].is_array()) throw ParseError("model: missing 'input_shape'");
  if (!doc.contains("num_classes") || !doc["num_classes"].is_number_unsigned()) throw ParseError("model: missing 'num_classes'");
  if (!doc.contains("layers") || !doc["layers"].is_array()) throw ParseError("model: missing 'layers'");
  std::vector<std::size_t> shape;
  for (const json& s : doc["input_shape"]) {
    if (!s.is_number_unsigned()) throw ParseError("model: input_shape entries must be positive integers");
    shape.push_back(s.get<std::size_t>());
  }
  std::vector<Layer> layers;
  for (std::size_t i = 0; i < doc["layers"].size(); ++i) layers.push_back(parse_layer(doc["layers"][i], i));
  return Network(std::move(shape), std::move(layers), doc["num_classes"].get<std::size_t>());
}

json model_to_json(const Network& net) {
  json layers = json::array();
  for (const Layer& layer : net.layers()) {
    json out = {{"type", layer_name(layer)}};
    if (const auto* d = std::get_if<Dense>(&layer)) {
      out["params"] = {{"in", d->in}, {"out", d->out}};
      out["weights"] = d->weights;
      out["bias"] = d->bias;
    } else if (const auto* c = std::get_if<Conv2D>(&layer)) {
      out["params"] = {{"kernel_h", c->kernel_h},       {"kernel_w", c->kernel_w},
                       {"in_channels", c->in_channels}, {"out_channels", c->out_channels},
                       {"stride", c->stride},           {"padding", c->padding}};
      out["weights"] = c->weights;
      out["bias"] = c->bias;
    } else if (const auto* p = std::get_if<MaxPool>(&layer)) {
      out["params"] = {{"window", p->window}};
    }
    layers.push_back(std::move(out));
  }
  return {{"input_shape", net.input_shape()}, {"num_classes", net.num_classes()}, {"layers", layers}};
}

Network load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open model file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("model file " + path.string() + ": " + e.what());
  }
  return parse_model(doc);
}

void save_model(const Network& net, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write model file " + path.string());
  out << model_to_json(net).dump(2) << "\n";
}

}  // namespace robustgame
