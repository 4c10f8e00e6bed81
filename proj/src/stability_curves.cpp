#include "neuromod/stability_curves.hpp"

#include <cmath>

namespace neuromod {

std::string_view to_string(BoundaryKind kind) {
  switch (kind) {
    case BoundaryKind::fold: return "fold";
    case BoundaryKind::flip: return "flip";
    case BoundaryKind::neimark_sacker: return "ns";
  }
  return "unknown";
}

std::optional<BoundaryKind> parse_boundary_kind(std::string_view text) {
  if (text == "fold") return BoundaryKind::fold;
  if (text == "flip") return BoundaryKind::flip;
  if (text == "ns" || text == "neimark_sacker") return BoundaryKind::neimark_sacker;
  return std::nullopt;
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {lo};
  std::vector<double> xs(n);
  const double h = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) xs[i] = lo + static_cast<double>(i) * h;
  xs.back() = hi;
  return xs;
}

std::vector<double> default_boundary_grid() { return uniform_grid(-8.0, 8.0, 2001); }

BoundaryCurve single_neuron_boundary(double gamma, SingleBranch branch, std::span<const double> x_grid) {
  if (!(gamma > 0 && gamma < 1)) throw ParameterError("gamma must lie in (0,1)");
  const auto tf = TransferFunction<double>::unipolar();
  BoundaryCurve curve;
  curve.kind = branch == SingleBranch::b_plus ? BoundaryKind::fold : BoundaryKind::flip;
  curve.first_param = "b";
  curve.second_param = "w";
  curve.samples.reserve(x_grid.size());
  for (double x : x_grid) {
    const double slope = derivative(tf, x);
    const double one_minus_sigma = evaluate(tf, -x);
    double b, w;
    if (branch == SingleBranch::b_plus) {
      w = (1.0 - gamma) / slope;
      b = (1.0 - gamma) * x - (1.0 - gamma) / one_minus_sigma;
    } else {
      w = -(1.0 + gamma) / slope;
      b = (1.0 - gamma) * x + (1.0 + gamma) / one_minus_sigma;
    }
    if (!(std::abs(w) <= kBoundaryClip)) {
      ++curve.clipped;
      continue;
    }
    curve.samples.push_back({x, Eigen::Vector2d(b, w)});
  }
  return curve;
}

BoundaryCurve two_neuron_boundary(BoundaryKind kind, const TwoNeuronPlane& fixed, std::span<const double> x_grid) {
  if (fixed.w21 == 0) throw ParameterError("w21 must be nonzero to trace boundaries");
  if (!(fixed.alpha > 0) || !(fixed.beta > 0)) throw ParameterError("alpha and beta must be positive");

  BoundaryCurve curve;
  curve.kind = kind;
  curve.first_param = "b1";
  curve.second_param = "w12";
  curve.samples.reserve(x_grid.size());
  for (double x : x_grid) {
    const double y = fixed.b2 + fixed.w21 * std::tanh(fixed.alpha * x);
    const double s1 = sech2(fixed.alpha * x);
    const double s2 = sech2(fixed.beta * y);
    const double trace = fixed.alpha * fixed.w11 * s1;
    const double coupling = fixed.alpha * fixed.beta * fixed.w21 * s1 * s2;

    double w12 = 0;
    switch (kind) {
      case BoundaryKind::fold: w12 = (1.0 - trace) / coupling; break;
      case BoundaryKind::flip: w12 = (1.0 + trace) / coupling; break;
      case BoundaryKind::neimark_sacker:
        if (!(std::abs(trace) < 2.0)) continue;
        w12 = -1.0 / coupling;
        break;
    }
    if (!(std::abs(w12) <= kBoundaryClip)) {
      ++curve.clipped;
      continue;
    }
    const double b1 = x - fixed.w11 * std::tanh(fixed.alpha * x) - w12 * std::tanh(fixed.beta * y);
    curve.samples.push_back({x, Eigen::Vector2d(b1, w12)});
  }
  return curve;
}

}  // namespace neuromod
