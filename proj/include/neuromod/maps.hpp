#ifndef NEUROMOD_MAPS_HPP
#define NEUROMOD_MAPS_HPP

#include <cmath>
#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "neuromod/errors.hpp"
#include "neuromod/transfer.hpp"

namespace neuromod {

template <typename Scalar = double>
using State2 = Eigen::Matrix<Scalar, 2, 1>;

template <typename Scalar = double>
using Jacobian2 = Eigen::Matrix<Scalar, 2, 2>;

/// States whose magnitude exceeds this are treated as divergent.
inline constexpr double kDivergenceBound = 1e12;

/// x' = b + gamma x + w sigma(x), with sigma the unipolar sigmoid.
template <typename Scalar = double>
struct SingleNeuronParams {
  Scalar b = 0;
  Scalar gamma = Scalar(0.5);
  Scalar w = 0;
  TransferFunction<Scalar> tf = TransferFunction<Scalar>::unipolar();

  void validate() const {
    using std::isfinite;
    if (!isfinite(b) || !isfinite(gamma) || !isfinite(w))
      throw ValidationError("single-neuron parameters must be finite");
    if (!(gamma > 0 && gamma < 1)) throw ValidationError("gamma must lie in (0,1)");
  }

  bool operator==(const SingleNeuronParams&) const = default;
};

/// x' = b1 + w11 tanh(alpha x) + w12 tanh(beta y)
/// y' = b2 + w21 tanh(alpha x) + w22 tanh(beta y)
template <typename Scalar = double>
struct TwoNeuronParams {
  Scalar b1 = 0, b2 = 0;
  Scalar w11 = 0, w12 = 0, w21 = 0, w22 = 0;
  Scalar alpha = 1, beta = 1;

  TransferFunction<Scalar> sigma1() const { return TransferFunction<Scalar>::bipolar(alpha); }
  TransferFunction<Scalar> sigma2() const { return TransferFunction<Scalar>::bipolar(beta); }

  void validate() const {
    using std::isfinite;
    for (Scalar v : {b1, b2, w11, w12, w21, w22, alpha, beta})
      if (!isfinite(v)) throw ValidationError("two-neuron parameters must be finite");
    if (!(alpha > 0)) throw ValidationError("alpha must be positive");
    if (!(beta > 0)) throw ValidationError("beta must be positive");
  }

  /// The fixed-point and boundary analysis only covers the w22 = 0 module.
  void require_analysis_form() const {
    if (w22 != 0) throw ParameterError("analysis requires w22 = 0");
  }

  bool operator==(const TwoNeuronParams&) const = default;
};

using ModelParams = std::variant<SingleNeuronParams<double>, TwoNeuronParams<double>>;

template <typename Scalar>
inline Scalar step_single(const SingleNeuronParams<Scalar>& p, Scalar x) {
  return p.b + p.gamma * x + p.w * evaluate(p.tf, x);
}

template <typename Scalar>
inline State2<Scalar> step_two(const TwoNeuronParams<Scalar>& p, const State2<Scalar>& s) {
  const Scalar sx = evaluate(p.sigma1(), s.x());
  const Scalar sy = evaluate(p.sigma2(), s.y());
  return {p.b1 + p.w11 * sx + p.w12 * sy, p.b2 + p.w21 * sx + p.w22 * sy};
}

/// f'(x) = gamma + w sigma'(x); the fixed point is stable while |f'| < 1.
template <typename Scalar>
inline Scalar jacobian_single(const SingleNeuronParams<Scalar>& p, Scalar x) {
  return p.gamma + p.w * derivative(p.tf, x);
}

/// Derivative of step_two. Row 2 carries w21 (dQ/dx = alpha w21 sech^2(alpha x)).
template <typename Scalar>
inline Jacobian2<Scalar> jacobian_two(const TwoNeuronParams<Scalar>& p, const State2<Scalar>& s) {
  const Scalar dx = derivative(p.sigma1(), s.x());
  const Scalar dy = derivative(p.sigma2(), s.y());
  Jacobian2<Scalar> j;
  j << p.w11 * dx, p.w12 * dy,
       p.w21 * dx, p.w22 * dy;
  return j;
}

namespace detail {

template <typename Scalar>
inline double magnitude(Scalar x) {
  using std::abs;
  return static_cast<double>(abs(x));
}

template <typename Scalar>
inline double magnitude(const State2<Scalar>& s) {
  return static_cast<double>(s.cwiseAbs().maxCoeff());
}

template <typename State, typename Step>
std::vector<State> iterate(State s, std::size_t n_transient, std::size_t n_record, Step&& step) {
  std::vector<State> out;
  out.reserve(n_record);
  const std::size_t total = n_transient + n_record;
  for (std::size_t i = 1; i <= total; ++i) {
    s = step(s);
    const double m = magnitude(s);
    if (!(m <= kDivergenceBound)) throw DivergenceError(i, m);
    if (i > n_transient) out.push_back(s);
  }
  return out;
}

}  // namespace detail

/// Iterates n_transient times unrecorded, then records n_record states.
/// Throws DivergenceError (carrying the 1-based iteration index) when
/// |state| exceeds kDivergenceBound.
template <typename Scalar>
std::vector<Scalar> orbit(const SingleNeuronParams<Scalar>& p, Scalar x0, std::size_t n_transient,
                          std::size_t n_record) {
  return detail::iterate(x0, n_transient, n_record, [&p](Scalar x) { return step_single(p, x); });
}

template <typename Scalar>
std::vector<State2<Scalar>> orbit(const TwoNeuronParams<Scalar>& p, const State2<Scalar>& s0,
                                  std::size_t n_transient, std::size_t n_record) {
  return detail::iterate(State2<Scalar>(s0), n_transient, n_record,
                         [&p](const State2<Scalar>& s) { return step_two(p, s); });
}

/// Parameter names accepted by set_param/get_param.
std::vector<std::string> param_names(const ModelParams& params);
double get_param(const ModelParams& params, const std::string& name);
void set_param(ModelParams& params, const std::string& name, double value);
void validate(const ModelParams& params);

inline bool is_two_neuron(const ModelParams& params) {
  return std::holds_alternative<TwoNeuronParams<double>>(params);
}

}  // namespace neuromod

#endif  // NEUROMOD_MAPS_HPP
