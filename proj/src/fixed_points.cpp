#include "neuromod/fixed_points.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace neuromod {
namespace {

constexpr double kTangencyThreshold = 1e-9;

struct Root {
  double x;
  bool tangency;
};

// Shrinks [a, b] until no representable midpoint remains and returns the
// endpoint with the smaller residual.
double bisect(const std::function<double(double)>& g, double a, double b, double ga) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if ((gm < 0) == (ga < 0)) {
      a = mid;
      ga = gm;
    } else {
      b = mid;
    }
  }
  return std::abs(g(a)) <= std::abs(g(b)) ? a : b;
}

double golden_min_abs(const std::function<double(double)>& g, double a, double b) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = std::abs(g(c));
  double fd = std::abs(g(d));
  for (int it = 0; it < 200 && (b - a) > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = std::abs(g(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = std::abs(g(d));
    }
  }
  return fc < fd ? c : d;
}

std::vector<Root> scalar_roots(const std::function<double(double)>& g, Interval iv, int grid) {
  if (!(iv.lo < iv.hi)) throw ParameterError("root search interval requires lo < hi");
  if (grid < 2) throw ParameterError("root search grid must have at least 2 points");

  const auto n = static_cast<std::size_t>(grid);
  const double h = (iv.hi - iv.lo) / static_cast<double>(n - 1);
  std::vector<double> xs(n), gs(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = i + 1 == n ? iv.hi : iv.lo + static_cast<double>(i) * h;
    gs[i] = g(xs[i]);
  }

  std::vector<Root> roots;
  for (std::size_t i = 0; i < n; ++i) {
    if (gs[i] == 0.0) {
      roots.push_back({xs[i], false});
      continue;
    }
    if (i + 1 < n && gs[i + 1] != 0.0 && (gs[i] < 0) != (gs[i + 1] < 0)) {
      roots.push_back({bisect(g, xs[i], xs[i + 1], gs[i]), false});
      continue;
    }
    // Best effort for double roots: a local dip of |g| with no sign change.
    if (i > 0 && i + 1 < n) {
      const bool same_sign = (gs[i - 1] < 0) == (gs[i] < 0) && (gs[i + 1] < 0) == (gs[i] < 0);
      const bool dip = std::abs(gs[i]) <= std::abs(gs[i - 1]) && std::abs(gs[i]) < std::abs(gs[i + 1]);
      if (same_sign && dip && gs[i - 1] != 0.0 && gs[i + 1] != 0.0) {
        const double xm = golden_min_abs(g, xs[i - 1], xs[i + 1]);
        if (std::abs(g(xm)) < kTangencyThreshold) roots.push_back({xm, true});
      }
    }
  }
  std::sort(roots.begin(), roots.end(), [](const Root& a, const Root& b) { return a.x < b.x; });
  return roots;
}

}  // namespace

std::string_view to_string(Stability s) {
  switch (s) {
    case Stability::stable: return "stable";
    case Stability::unstable: return "unstable";
    case Stability::saddle: return "saddle";
    case Stability::nonhyperbolic: return "nonhyperbolic";
  }
  return "unknown";
}

Stability classify(std::span<const std::complex<double>> eigenvalues, double tol) {
  bool inside = false, outside = false;
  for (const auto& lambda : eigenvalues) {
    const double m = std::abs(lambda);
    if (m >= 1.0 - tol && m <= 1.0 + tol) return Stability::nonhyperbolic;
    (m < 1.0 ? inside : outside) = true;
  }
  if (inside && outside) return Stability::saddle;
  return outside ? Stability::unstable : Stability::stable;
}

std::array<std::complex<double>, 2> eigenvalues_two(const TwoNeuronParams<>& p, const State2<>& fp) {
  const double s1 = sech2(p.alpha * fp.x());
  const double s2 = sech2(p.beta * fp.y());
  const double tr = p.alpha * p.w11 * s1;
  const double c = p.alpha * p.beta * p.w12 * p.w21 * s1 * s2;
  const double disc = tr * tr + 4.0 * c;
  if (disc >= 0.0) {
    const double r = std::sqrt(disc);
    return {std::complex<double>(0.5 * (tr + r), 0.0), std::complex<double>(0.5 * (tr - r), 0.0)};
  }
  const double im = 0.5 * std::sqrt(-disc);
  return {std::complex<double>(0.5 * tr, im), std::complex<double>(0.5 * tr, -im)};
}

std::vector<FixedPoint> find_fixed_single(const SingleNeuronParams<>& p, Interval interval, int grid) {
  p.validate();
  const auto g = [&p](double x) { return step_single(p, x) - x; };
  std::vector<FixedPoint> out;
  for (const Root& r : scalar_roots(g, interval, grid)) {
    FixedPoint fp;
    fp.state = Eigen::VectorXd::Constant(1, r.x);
    fp.eigenvalues = {std::complex<double>(jacobian_single(p, r.x), 0.0)};
    fp.classification = r.tangency ? Stability::nonhyperbolic : classify(fp.eigenvalues);
    fp.residual = std::abs(g(r.x));
    fp.tangency = r.tangency;
    out.push_back(std::move(fp));
  }
  return out;
}

double reduced_residual(const TwoNeuronParams<>& p, double x) {
  const double s1 = std::tanh(p.alpha * x);
  const double y = p.b2 + p.w21 * s1;
  return x - p.w11 * s1 - p.w12 * std::tanh(p.beta * y) - p.b1;
}

std::vector<FixedPoint> find_fixed_two(const TwoNeuronParams<>& p, Interval x_interval, int grid) {
  p.validate();
  p.require_analysis_form();
  const auto g = [&p](double x) { return reduced_residual(p, x); };
  std::vector<FixedPoint> out;
  for (const Root& r : scalar_roots(g, x_interval, grid)) {
    const State2<> s(r.x, p.b2 + p.w21 * std::tanh(p.alpha * r.x));
    const auto ev = eigenvalues_two(p, s);
    FixedPoint fp;
    fp.state = s;
    fp.eigenvalues.assign(ev.begin(), ev.end());
    fp.classification = r.tangency ? Stability::nonhyperbolic : classify(fp.eigenvalues);
    fp.residual = (step_two(p, s) - s).cwiseAbs().maxCoeff();
    fp.tangency = r.tangency;
    out.push_back(std::move(fp));
  }
  return out;
}

}  // namespace neuromod
