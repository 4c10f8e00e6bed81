#ifndef NEUROMOD_BIFURCATION_HPP
#define NEUROMOD_BIFURCATION_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "neuromod/maps.hpp"

namespace neuromod {

enum class RampPattern { up_then_down, down_then_up };

std::string_view to_string(RampPattern pattern);
std::optional<RampPattern> parse_ramp_pattern(std::string_view text);

/// One parameter swept over [min(start,end), max(start,end)]. The first leg
/// walks upward for up_then_down and downward for down_then_up; the second
/// leg retraces it.
struct RampSchedule {
  std::string param;
  double start = 0;
  double end = 0;
  RampPattern pattern = RampPattern::up_then_down;

  double first_leg_origin() const;
  double first_leg_target() const;

  bool operator==(const RampSchedule&) const = default;
};

struct ScanConfig {
  std::vector<RampSchedule> schedules;  // advanced in lockstep
  std::size_t steps_per_leg = 1;
  std::size_t iterations_per_step = 1;
  State2<> initial_state = State2<>::Zero();  // single neuron uses x only

  bool operator==(const ScanConfig&) const = default;
};

/// Steps per leg for a given step size on the first schedule's range.
std::size_t steps_for_step_size(const RampSchedule& schedule, double step);

enum class Leg { first = 1, second = 2 };

struct ScanPoint {
  Leg leg;
  std::size_t step;
  std::vector<double> param_values;  // one per schedule
  State2<> state;
};

struct ScanFailure {
  Leg leg;
  std::size_t step;
  double magnitude;
  std::string message;
};

/// Each leg records steps_per_leg + 1 points; the turning point is recorded
/// once at the end of the first leg and again at the start of the second.
struct ScanResult {
  bool two_neuron = false;
  std::vector<std::string> param_names;
  std::size_t steps_per_leg = 0;
  std::vector<ScanPoint> points;
  std::optional<ScanFailure> failure;  // set when the orbit diverged

  bool complete() const { return !failure && points.size() == 2 * (steps_per_leg + 1); }
};

/// The feedback-ramped scan: every step starts from the state recorded at the
/// previous step, including across the turning point.
ScanResult run_ramp_scan(const ModelParams& params, const ScanConfig& config);

struct HysteresisWindow {
  double param_lo;
  double param_hi;
  double max_gap;
};

struct HysteresisReport {
  std::vector<HysteresisWindow> windows;
  double tolerance;
};

inline constexpr double kDefaultHysteresisTol = 0.1;

/// Flags parameter values where the two legs disagree by more than `tol` in
/// max-norm. Each first-leg point is compared with the second-leg points at
/// the same and both neighbouring parameter values and the smallest gap is
/// kept, so period-2 phase alternation alone is not reported. Runs shorter
/// than `min_steps` are discarded. Windows are in the first schedule's
/// parameter.
HysteresisReport detect_hysteresis(const ScanResult& scan, double tol = kDefaultHysteresisTol,
                                   std::size_t min_steps = 3);

struct OscillationWindow {
  Leg leg;
  double param_lo;
  double param_hi;
  std::size_t steps;
};

struct OscillationReport {
  std::vector<OscillationWindow> windows;
  double tolerance;

  /// [lo, hi] covering every window of both legs; nullopt when empty.
  std::optional<std::pair<double, double>> hull() const;
};

/// Regions where the recorded state keeps moving between consecutive steps
/// of one leg (period-2, quasiperiodic or chaotic motion) instead of tracking
/// a steady state. Flagged runs separated by at most `max_gap_steps` quiet
/// steps are merged; merged runs shorter than `min_steps` (transients after
/// a jump) are dropped.
OscillationReport detect_oscillation(const ScanResult& scan, double tol = 0.5, std::size_t min_steps = 10,
                                     std::size_t max_gap_steps = 3);

}  // namespace neuromod

#endif  // NEUROMOD_BIFURCATION_HPP
