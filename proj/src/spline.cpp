#include "planetgen/spline.hpp"

#include <algorithm>
#include <cmath>

#include "planetgen/errors.hpp"

namespace planetgen {
namespace {

// Fritsch–Carlson tangents: zero at local extrema, limited so that each
// segment stays monotone between its end values.
std::vector<double> monotone_tangents(const std::vector<ControlPoint>& pts) {
  const std::size_t n = pts.size();
  std::vector<double> slopes(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k)
    slopes[k] = (pts[k + 1].output - pts[k].output) / (pts[k + 1].input - pts[k].input);

  std::vector<double> m(n);
  m[0] = slopes[0];
  m[n - 1] = slopes[n - 2];
  for (std::size_t k = 1; k + 1 < n; ++k)
    m[k] = (slopes[k - 1] * slopes[k] <= 0.0) ? 0.0 : (slopes[k - 1] + slopes[k]) / 2.0;

  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (slopes[k] == 0.0) {
      m[k] = 0.0;
      m[k + 1] = 0.0;
      continue;
    }
    const double a = m[k] / slopes[k];
    const double b = m[k + 1] / slopes[k];
    const double r = a * a + b * b;
    if (r > 9.0) {
      const double tau = 3.0 / std::sqrt(r);
      m[k] = tau * a * slopes[k];
      m[k + 1] = tau * b * slopes[k];
    }
  }
  return m;
}

}  // namespace

SplineCurve::SplineCurve(std::vector<ControlPoint> points, Interpolation mode)
    : points_(std::move(points)), mode_(mode) {
  if (mode_ == Interpolation::monotone_cubic && !validate(*this)) tangents_ = monotone_tangents(points_);
}

std::optional<std::string> validate(const SplineCurve& curve) {
  const auto& pts = curve.points();
  if (pts.size() < 2) return "fewer than 2 points";
  for (const auto& p : pts) {
    if (!std::isfinite(p.input) || !std::isfinite(p.output)) return "non-finite control point";
  }
  for (std::size_t k = 1; k < pts.size(); ++k) {
    if (!(pts[k].input > pts[k - 1].input)) return "inputs not strictly increasing";
  }
  if (pts.front().input != 0.0) return "first input must be 0";
  if (pts.back().input != 1.0) return "last input must be 1";
  for (const auto& p : pts) {
    if (p.output < 0.0 || p.output > 1.0) return "outputs must lie in [0, 1]";
  }
  return std::nullopt;
}

double evaluate(const SplineCurve& curve, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("spline evaluate: t outside [0, 1]");
  if (auto problem = validate(curve)) throw ConfigError("invalid spline: " + *problem);

  const auto& pts = curve.points_;
  auto hi = std::upper_bound(pts.begin(), pts.end(), t,
                             [](double value, const ControlPoint& p) { return value < p.input; });
  if (hi == pts.end()) return pts.back().output;
  const auto k = static_cast<std::size_t>(hi - pts.begin()) - 1;
  const ControlPoint& p0 = pts[k];
  const ControlPoint& p1 = pts[k + 1];
  if (t == p0.input) return p0.output;

  const double h = p1.input - p0.input;
  const double s = (t - p0.input) / h;
  double y;
  if (curve.mode_ == Interpolation::linear) {
    y = p0.output + (p1.output - p0.output) * s;
  } else {
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    const double h10 = s3 - 2.0 * s2 + s;
    const double h01 = -2.0 * s3 + 3.0 * s2;
    const double h11 = s3 - s2;
    y = h00 * p0.output + h10 * h * curve.tangents_[k] + h01 * p1.output +
        h11 * h * curve.tangents_[k + 1];
  }
  const auto [lo_out, hi_out] = std::minmax(p0.output, p1.output);
  return std::clamp(y, lo_out, hi_out);
}

}  // namespace planetgen
