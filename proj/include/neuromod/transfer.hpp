#ifndef NEUROMOD_TRANSFER_HPP
#define NEUROMOD_TRANSFER_HPP

#include <cmath>

#include "neuromod/errors.hpp"

namespace neuromod {

enum class TransferKind { unipolar, bipolar };

/// Neuron output nonlinearity. Unipolar is the logistic sigmoid 1/(1+e^-x)
/// (gain fixed at 1); bipolar is tanh(gain * x).
template <typename Scalar = double>
struct TransferFunction {
  TransferKind kind = TransferKind::unipolar;
  Scalar gain = Scalar(1);

  static TransferFunction unipolar() { return {TransferKind::unipolar, Scalar(1)}; }
  static TransferFunction bipolar(Scalar gain) { return {TransferKind::bipolar, gain}; }

  bool operator==(const TransferFunction&) const = default;
};

namespace detail {

template <typename Scalar>
inline void require_finite(Scalar x) {
  using std::isfinite;
  if (!isfinite(x)) throw DomainError("transfer function input must be finite");
}

// Logistic sigmoid without overflow: for negative x use e^x / (1 + e^x).
template <typename Scalar>
inline Scalar logistic(Scalar x) {
  using std::exp;
  if (x >= Scalar(0)) return Scalar(1) / (Scalar(1) + exp(-x));
  const Scalar e = exp(x);
  return e / (Scalar(1) + e);
}

}  // namespace detail

template <typename Scalar>
inline Scalar evaluate(const TransferFunction<Scalar>& tf, Scalar x) {
  using std::tanh;
  detail::require_finite(x);
  if (tf.kind == TransferKind::unipolar) return detail::logistic(x);
  return tanh(tf.gain * x);
}

/// d/dx of evaluate(). Unipolar: sigma(x) * sigma(-x), the same as
/// sigma(1 - sigma) but without cancellation in the saturated tail.
/// Bipolar: gain * sech^2(gain * x).
template <typename Scalar>
inline Scalar derivative(const TransferFunction<Scalar>& tf, Scalar x) {
  using std::cosh;
  detail::require_finite(x);
  if (tf.kind == TransferKind::unipolar) return detail::logistic(x) * detail::logistic(-x);
  const Scalar sech = Scalar(1) / cosh(tf.gain * x);
  return tf.gain * sech * sech;
}

/// sech^2(u), shared by the two-neuron Jacobian and boundary formulas.
template <typename Scalar>
inline Scalar sech2(Scalar u) {
  using std::cosh;
  const Scalar sech = Scalar(1) / cosh(u);
  return sech * sech;
}

}  // namespace neuromod

#endif  // NEUROMOD_TRANSFER_HPP
