#include "robustgame/bound.hpp"

#include <cstdio>
#include <string>

#include "robustgame/errors.hpp"

namespace robustgame {

std::string format_double(double v) {
  char buf[32];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    if (std::stod(buf) == v) break;
  }
  return buf;
}

std::string Bound::to_string() const {
  return exceeds_ ? "> " + format_double(v_) : format_double(v_);
}

nlohmann::json Bound::to_json() const {
  if (exceeds_) return to_string();
  return v_;
}

Bound Bound::from_json(const nlohmann::json& j) {
  if (j.is_number()) return value(j.get<double>());
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s.rfind("> ", 0) == 0) return exceeds(std::stod(s.substr(2)));
  }
  throw ParseError("bound must be a number or \"> d\"");
}

std::partial_ordering operator<=>(const Bound& a, const Bound& b) {
  if (a.exceeds_ && b.exceeds_) return std::partial_ordering::equivalent;
  if (a.exceeds_) return std::partial_ordering::greater;
  if (b.exceeds_) return std::partial_ordering::less;
  return a.v_ <=> b.v_;
}

bool operator==(const Bound& a, const Bound& b) {
  return (a <=> b) == std::partial_ordering::equivalent;
}

bool certainly_below(double x, const Bound& b) {
  return b.exceeds_budget() ? x <= b.number() : x < b.number();
}

bool certainly_at_most(const Bound& b, double x) {
  return !b.exceeds_budget() && b.number() <= x;
}

}  // namespace robustgame
