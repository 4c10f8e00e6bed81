#ifndef NEUROMOD_STABILITY_CURVES_HPP
#define NEUROMOD_STABILITY_CURVES_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "neuromod/maps.hpp"

namespace neuromod {

/// fold: eigenvalue +1; flip: eigenvalue -1; neimark_sacker: det J = 1 with |tr J| < 2.
enum class BoundaryKind { fold, flip, neimark_sacker };

std::string_view to_string(BoundaryKind kind);
/// Accepts "fold", "flip", "ns" and "neimark_sacker".
std::optional<BoundaryKind> parse_boundary_kind(std::string_view text);

/// Branches of the single-neuron stability diagram.
enum class SingleBranch { b_plus, b_minus };

struct BoundarySample {
  double x;               // fixed-point coordinate parametrising the curve
  Eigen::Vector2d point;  // (first, second) parameter of the plane
};

struct BoundaryCurve {
  BoundaryKind kind = BoundaryKind::fold;
  std::string first_param;   // "b" or "b1"
  std::string second_param;  // "w" or "w12"
  std::vector<BoundarySample> samples;
  std::size_t clipped = 0;   // samples dropped for |second| > kBoundaryClip
};

/// Samples with a second-parameter magnitude above this are dropped.
inline constexpr double kBoundaryClip = 1e6;

/// Parameters held fixed while tracing the (b1, w12) plane.
struct TwoNeuronPlane {
  double w11 = 0;
  double b2 = 0;
  double w21 = 0;
  double alpha = 1;
  double beta = 1;

  static TwoNeuronPlane from(const TwoNeuronParams<>& p) { return {p.w11, p.b2, p.w21, p.alpha, p.beta}; }
};

/// `n` uniformly spaced values on [lo, hi], endpoints included.
std::vector<double> uniform_grid(double lo, double hi, std::size_t n);

/// Default parametrisation grid: 2001 samples on [-8, 8].
std::vector<double> default_boundary_grid();

/// (b, w) at which x is a fixed point of the single neuron with f'(x) = +1
/// (b_plus, fold) or -1 (b_minus, flip).
BoundaryCurve single_neuron_boundary(double gamma, SingleBranch branch, std::span<const double> x_grid);

/// (b1, w12) at which (x, b2 + w21 tanh(alpha x)) is a fixed point on the
/// given bifurcation boundary. Neimark-Sacker samples with |tr J| >= 2 are
/// dropped. Throws ParameterError when w21 == 0.
BoundaryCurve two_neuron_boundary(BoundaryKind kind, const TwoNeuronPlane& fixed, std::span<const double> x_grid);

}  // namespace neuromod

#endif  // NEUROMOD_STABILITY_CURVES_HPP
