#pragma once

#include <compare>
#include <string>

#include "json.hpp"

namespace robustgame {

// A distance value, or ExceedsBudget(d): "nothing adversarial within d".
// ExceedsBudget orders above every real and all such values compare equal.
class Bound {
 public:
  static Bound value(double v) { return Bound(v, false); }
  static Bound exceeds(double radius) { return Bound(radius, true); }

  bool exceeds_budget() const { return exceeds_; }
  // The distance; for ExceedsBudget the radius it exceeds.
  double number() const { return v_; }

  // "> d" for ExceedsBudget, otherwise the shortest round-tripping decimal.
  std::string to_string() const;
  // A JSON number, or the string "> d".
  nlohmann::json to_json() const;
  static Bound from_json(const nlohmann::json& j);

  friend std::partial_ordering operator<=>(const Bound& a, const Bound& b);
  friend bool operator==(const Bound& a, const Bound& b);

 private:
  Bound(double v, bool exceeds) : v_(v), exceeds_(exceeds) {}
  double v_;
  bool exceeds_;
};

// x < b is certain: for ExceedsBudget(d) this needs x <= d.
bool certainly_below(double x, const Bound& b);
// b <= x is certain: never for ExceedsBudget.
bool certainly_at_most(const Bound& b, double x);

std::string format_double(double v);

}  // namespace robustgame
