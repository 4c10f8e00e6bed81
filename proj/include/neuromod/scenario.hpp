#ifndef NEUROMOD_SCENARIO_HPP
#define NEUROMOD_SCENARIO_HPP

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "neuromod/bifurcation.hpp"
#include "neuromod/maps.hpp"
#include "neuromod/spectrum.hpp"
#include "neuromod/stability_curves.hpp"

namespace neuromod {

enum class TaskKind { curve, scan, classify };
enum class OutputFormat { csv, json, svg };

std::string_view to_string(TaskKind t);
std::string_view to_string(OutputFormat f);
std::optional<OutputFormat> parse_output_format(std::string_view text);

struct CurveTask {
  std::vector<BoundaryKind> kinds{BoundaryKind::fold, BoundaryKind::flip, BoundaryKind::neimark_sacker};
  double x_min = -8.0;
  double x_max = 8.0;
  std::size_t samples = 2001;

  bool operator==(const CurveTask&) const = default;
};

struct ScanTask {
  std::vector<RampSchedule> schedules;
  double step = 0.01;  // on the first schedule; sets steps_per_leg
  std::size_t iterations_per_step = 1;
  State2<> initial_state = State2<>::Zero();
  double hysteresis_tolerance = kDefaultHysteresisTol;

  ScanConfig config() const;
  bool operator==(const ScanTask&) const = default;
};

struct ClassifyTask {
  State2<> initial_state = State2<>::Zero();
  std::size_t transient = kDefaultTransient;
  std::size_t n = kDefaultSpectrumLength;

  bool operator==(const ClassifyTask&) const = default;
};

struct OutputSpec {
  OutputFormat format = OutputFormat::csv;
  std::string path;  // relative paths resolve against the output directory

  bool operator==(const OutputSpec&) const = default;
};

struct Scenario {
  std::string id;
  std::string description;
  ModelParams params = SingleNeuronParams<>{};
  TaskKind task = TaskKind::curve;
  CurveTask curve;
  ScanTask scan;
  ClassifyTask classify;
  std::vector<OutputSpec> outputs;
  bool inferred = false;  // some values are not stated for this figure and were chosen

  bool operator==(const Scenario&) const = default;
};

/// Checks every task precondition; throws ValidationError naming the field.
void validate(const Scenario& s);

nlohmann::json to_json(const Scenario& s);
/// Strict: unknown keys and wrong types are ValidationErrors with a key path.
Scenario scenario_from_json(const nlohmann::json& j);

/// Throws ValidationError (parse errors carry line and column) or
/// std::runtime_error when the file cannot be read.
Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const Scenario& s, const std::filesystem::path& path);

// Shared with the HTTP service so requests validate exactly like files.
ModelParams params_from_json(const nlohmann::json& j, std::string_view system, const std::string& where);
nlohmann::json params_to_json(const ModelParams& p);
std::vector<RampSchedule> schedules_from_json(const nlohmann::json& j, const std::string& where);
State2<> state_from_json(const nlohmann::json& j, const std::string& where);

struct PresetInfo {
  std::string id;
  std::string description;
};

/// Figure presets: 1, 2a, 2b, 3a, 3b, 6, 7a, 7b, 8, 9a, 9b, 10, 11a, 11b,
/// 12a, 12b, 13 plus the variants 2a-text and 11b-text.
std::vector<PresetInfo> preset_list();
/// Throws ValidationError listing the known ids.
Scenario preset(std::string_view figure_id);

std::vector<BoundaryCurve> compute_curves(const Scenario& s);

struct ScenarioRun {
  std::vector<BoundaryCurve> curves;
  std::optional<ScanResult> scan;
  std::optional<HysteresisReport> hysteresis;
  std::optional<OscillationReport> oscillation;
  std::optional<SpectrumResult> spectrum;
};

/// Computes the task. A diverging scan throws DivergenceError.
ScenarioRun execute(const Scenario& s);

/// Writes every requested output under `out_dir` (default: one CSV named
/// after the id) and returns the written paths. On failure, files written so
/// far are removed before the exception propagates.
std::vector<std::filesystem::path> run_scenario(const Scenario& s, const std::filesystem::path& out_dir,
                                                ScenarioRun* run_out = nullptr);

}  // namespace neuromod

#endif  // NEUROMOD_SCENARIO_HPP
