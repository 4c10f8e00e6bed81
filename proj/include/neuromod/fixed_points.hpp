#ifndef NEUROMOD_FIXED_POINTS_HPP
#define NEUROMOD_FIXED_POINTS_HPP

#include <array>
#include <complex>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "neuromod/maps.hpp"

namespace neuromod {

enum class Stability { stable, unstable, saddle, nonhyperbolic };

std::string_view to_string(Stability s);

struct Interval {
  double lo = -50.0;
  double hi = 50.0;
};

inline constexpr double kDefaultClassifyTol = 1e-9;
inline constexpr int kDefaultRootGrid = 2000;

/// A period-1 steady state. `state` has one entry for the single neuron and
/// two (x, y) for the two-neuron module; `eigenvalues` likewise.
struct FixedPoint {
  Eigen::VectorXd state;
  std::vector<std::complex<double>> eigenvalues;
  Stability classification = Stability::nonhyperbolic;
  double residual = 0.0;
  // Double root found by |F| minimisation rather than a sign change.
  bool tangency = false;
};

/// Classify by eigenvalue moduli: stable if all < 1 - tol, unstable if all
/// > 1 + tol, saddle if split, nonhyperbolic if any lies within tol of 1.
Stability classify(std::span<const std::complex<double>> eigenvalues, double tol = kDefaultClassifyTol);

/// Roots of lambda^2 - tr lambda - c = 0 with tr = alpha w11 sech^2(alpha x)
/// and c = alpha beta w12 w21 sech^2(alpha x) sech^2(beta y). Larger real
/// part first; complex-conjugate pair when the discriminant is negative.
std::array<std::complex<double>, 2> eigenvalues_two(const TwoNeuronParams<>& p, const State2<>& fp);

/// All fixed points of x = b + gamma x + w sigma(x) in `interval`, sorted by x.
std::vector<FixedPoint> find_fixed_single(const SingleNeuronParams<>& p, Interval interval = {},
                                          int grid = kDefaultRootGrid);

/// All fixed points of the two-neuron module (w22 = 0), found through the
/// scalar reduction F(x) = x - w11 s1(x) - w12 s2(b2 + w21 s1(x)) - b1.
std::vector<FixedPoint> find_fixed_two(const TwoNeuronParams<>& p, Interval x_interval = {},
                                       int grid = kDefaultRootGrid);

/// The scalar residual whose roots are the two-neuron fixed points' x.
double reduced_residual(const TwoNeuronParams<>& p, double x);

}  // namespace neuromod

#endif  // NEUROMOD_FIXED_POINTS_HPP
