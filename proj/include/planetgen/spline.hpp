#pragma once

#include <optional>
#include <string>
#include <vector>

namespace planetgen {

enum class Interpolation { linear, monotone_cubic };

struct ControlPoint {
  double input = 0.0;
  double output = 0.0;
  bool operator==(const ControlPoint&) const = default;
};

/// Remapping curve over [0, 1]. Inputs must be strictly increasing and span
/// exactly [0, 1]; outputs lie in [0, 1].
class SplineCurve {
 public:
  SplineCurve() = default;
  explicit SplineCurve(std::vector<ControlPoint> points,
                       Interpolation mode = Interpolation::linear);

  static SplineCurve identity() { return SplineCurve({{0.0, 0.0}, {1.0, 1.0}}); }

  const std::vector<ControlPoint>& points() const { return points_; }
  Interpolation mode() const { return mode_; }

  bool operator==(const SplineCurve& o) const { return points_ == o.points_ && mode_ == o.mode_; }

 private:
  std::vector<ControlPoint> points_;
  Interpolation mode_ = Interpolation::linear;
  std::vector<double> tangents_;  // monotone_cubic only

  friend double evaluate(const SplineCurve& curve, double t);
};

/// Empty when the curve is valid, otherwise a description of the first
/// violated rule ("fewer than 2 points", "inputs not strictly increasing", ...).
std::optional<std::string> validate(const SplineCurve& curve);

/// Passes exactly through every control point. Throws DomainError for t
/// outside [0, 1] and ConfigError for an invalid curve.
double evaluate(const SplineCurve& curve, double t);

}  // namespace planetgen
