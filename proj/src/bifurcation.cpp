#include "neuromod/bifurcation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace neuromod {

std::string_view to_string(RampPattern pattern) {
  return pattern == RampPattern::up_then_down ? "up_then_down" : "down_then_up";
}

std::optional<RampPattern> parse_ramp_pattern(std::string_view text) {
  if (text == "up_then_down") return RampPattern::up_then_down;
  if (text == "down_then_up") return RampPattern::down_then_up;
  return std::nullopt;
}

double RampSchedule::first_leg_origin() const {
  return pattern == RampPattern::up_then_down ? std::min(start, end) : std::max(start, end);
}

double RampSchedule::first_leg_target() const {
  return pattern == RampPattern::up_then_down ? std::max(start, end) : std::min(start, end);
}

std::size_t steps_for_step_size(const RampSchedule& schedule, double step) {
  if (!(step > 0) || !std::isfinite(step)) throw ValidationError("step size must be positive");
  const double span = std::abs(schedule.end - schedule.start);
  const auto steps = static_cast<std::size_t>(std::llround(span / step));
  return std::max<std::size_t>(steps, 1);
}

namespace {

void validate_config(const ModelParams& params, const ScanConfig& config) {
  if (config.schedules.empty()) throw ValidationError("scan needs at least one schedule");
  if (config.steps_per_leg < 1) throw ValidationError("steps_per_leg must be at least 1");
  if (config.iterations_per_step < 1) throw ValidationError("iterations_per_step must be at least 1");
  if (!config.initial_state.allFinite()) throw ValidationError("initial state must be finite");

  ModelParams lo = params, hi = params;
  for (const auto& s : config.schedules) {
    if (!std::isfinite(s.start) || !std::isfinite(s.end))
      throw ValidationError("schedule '" + s.param + "' endpoints must be finite");
    set_param(lo, s.param, s.first_leg_origin());
    set_param(hi, s.param, s.first_leg_target());
  }
  validate(lo);
  validate(hi);
}

// Parameter value at first-leg step k; the endpoints are hit exactly.
double schedule_value(const RampSchedule& s, std::size_t k, std::size_t n) {
  const double origin = s.first_leg_origin();
  const double target = s.first_leg_target();
  if (k == n) return target;
  return origin + static_cast<double>(k) * ((target - origin) / static_cast<double>(n));
}

double state_gap(const State2<>& a, const State2<>& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

ScanResult run_ramp_scan(const ModelParams& params, const ScanConfig& config) {
  validate_config(params, config);

  ScanResult result;
  result.two_neuron = is_two_neuron(params);
  result.steps_per_leg = config.steps_per_leg;
  for (const auto& s : config.schedules) result.param_names.push_back(s.param);

  const std::size_t n = config.steps_per_leg;
  std::vector<std::vector<double>> values(n + 1);
  for (std::size_t k = 0; k <= n; ++k)
    for (const auto& s : config.schedules) values[k].push_back(schedule_value(s, k, n));

  result.points.reserve(2 * (n + 1));
  ModelParams current = params;
  State2<> state = config.initial_state;
  if (!result.two_neuron) state.y() = 0.0;

  for (Leg leg : {Leg::first, Leg::second}) {
    for (std::size_t step = 0; step <= n; ++step) {
      const auto& vals = values[leg == Leg::first ? step : n - step];
      for (std::size_t i = 0; i < vals.size(); ++i) set_param(current, config.schedules[i].param, vals[i]);

      for (std::size_t it = 0; it < config.iterations_per_step; ++it) {
        if (const auto* two = std::get_if<TwoNeuronParams<>>(&current)) {
          state = step_two(*two, state);
        } else {
          state.x() = step_single(std::get<SingleNeuronParams<>>(current), state.x());
        }
        const double m = state.cwiseAbs().maxCoeff();
        if (!(m <= kDivergenceBound)) {
          result.failure = ScanFailure{leg, step, m,
                                       "orbit diverged on leg " + std::to_string(static_cast<int>(leg)) +
                                           " at step " + std::to_string(step) +
                                           " (|state| = " + std::to_string(m) + ")"};
          return result;
        }
      }
      result.points.push_back({leg, step, vals, state});
    }
  }
  return result;
}

HysteresisReport detect_hysteresis(const ScanResult& scan, double tol, std::size_t min_steps) {
  const std::size_t n = scan.steps_per_leg;
  if (scan.failure || scan.points.size() != 2 * (n + 1))
    throw std::logic_error("detect_hysteresis needs a complete two-leg scan");

  const auto leg1 = [&](std::size_t i) -> const ScanPoint& { return scan.points[i]; };
  // Second-leg point at the parameter value of first-leg step i.
  const auto leg2 = [&](std::size_t i) -> const ScanPoint& { return scan.points[(n + 1) + (n - i)]; };

  // A zero-span schedule puts every point at the same parameter value, so
  // every second-leg point is a match.
  const bool flat = leg1(0).param_values == leg1(n).param_values;

  std::vector<double> gaps(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    double g = std::numeric_limits<double>::infinity();
    const std::size_t lo = flat ? 0 : (i == 0 ? 0 : i - 1);
    const std::size_t hi = flat ? n : std::min(n, i + 1);
    for (std::size_t j = lo; j <= hi; ++j) g = std::min(g, state_gap(leg1(i).state, leg2(j).state));
    gaps[i] = g;
  }

  HysteresisReport report{{}, tol};
  for (std::size_t i = 0; i <= n;) {
    if (!(gaps[i] > tol)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    double max_gap = gaps[i];
    while (j + 1 <= n && gaps[j + 1] > tol) max_gap = std::max(max_gap, gaps[++j]);
    if (j - i + 1 >= min_steps) {
      const double a = leg1(i).param_values.front();
      const double b = leg1(j).param_values.front();
      report.windows.push_back({std::min(a, b), std::max(a, b), max_gap});
    }
    i = j + 1;
  }
  std::sort(report.windows.begin(), report.windows.end(),
            [](const HysteresisWindow& a, const HysteresisWindow& b) { return a.param_lo < b.param_lo; });
  return report;
}

std::optional<std::pair<double, double>> OscillationReport::hull() const {
  if (windows.empty()) return std::nullopt;
  std::pair<double, double> h{windows.front().param_lo, windows.front().param_hi};
  for (const auto& w : windows) {
    h.first = std::min(h.first, w.param_lo);
    h.second = std::max(h.second, w.param_hi);
  }
  return h;
}

OscillationReport detect_oscillation(const ScanResult& scan, double tol, std::size_t min_steps,
                                     std::size_t max_gap_steps) {
  OscillationReport report{{}, tol};
  const std::size_t per_leg = scan.steps_per_leg + 1;

  for (Leg leg : {Leg::first, Leg::second}) {
    const std::size_t offset = leg == Leg::first ? 0 : per_leg;
    if (scan.points.size() < offset + 2) break;
    const std::size_t count = std::min(per_leg, scan.points.size() - offset);

    std::vector<std::size_t> flagged;
    for (std::size_t k = 1; k < count; ++k)
      if (state_gap(scan.points[offset + k].state, scan.points[offset + k - 1].state) > tol) flagged.push_back(k);

    for (std::size_t a = 0; a < flagged.size();) {
      std::size_t b = a;
      while (b + 1 < flagged.size() && flagged[b + 1] - flagged[b] - 1 <= max_gap_steps) ++b;
      const std::size_t first = flagged[a], last = flagged[b];
      if (last - first + 1 >= min_steps) {
        const double p = scan.points[offset + first].param_values.front();
        const double q = scan.points[offset + last].param_values.front();
        report.windows.push_back({leg, std::min(p, q), std::max(p, q), last - first + 1});
      }
      a = b + 1;
    }
  }
  return report;
}

}  // namespace neuromod
