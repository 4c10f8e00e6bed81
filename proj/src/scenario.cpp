#include "neuromod/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "neuromod/output.hpp"

namespace neuromod {

using nlohmann::json;

std::string_view to_string(TaskKind t) {
  switch (t) {
    case TaskKind::curve: return "curve";
    case TaskKind::scan: return "scan";
    case TaskKind::classify: return "classify";
  }
  return "unknown";
}

std::string_view to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::csv: return "csv";
    case OutputFormat::json: return "json";
    case OutputFormat::svg: return "svg";
  }
  return "unknown";
}

std::optional<OutputFormat> parse_output_format(std::string_view text) {
  if (text == "csv") return OutputFormat::csv;
  if (text == "json") return OutputFormat::json;
  if (text == "svg") return OutputFormat::svg;
  return std::nullopt;
}

ScanConfig ScanTask::config() const {
  ScanConfig c;
  c.schedules = schedules;
  c.steps_per_leg = schedules.empty() ? 1 : steps_for_step_size(schedules.front(), step);
  c.iterations_per_step = iterations_per_step;
  c.initial_state = initial_state;
  return c;
}

namespace {

// Typed access to one JSON object; finish() rejects keys never asked for.
class Fields {
 public:
  Fields(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ValidationError(where_ + ": expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number()) throw ValidationError(path(key) + ": expected a number");
    return v.get<double>();
  }

  std::size_t count(const std::string& key, std::size_t fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
      throw ValidationError(path(key) + ": expected a non-negative integer");
    return v.get<std::size_t>();
  }

  std::string text(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_string()) throw ValidationError(path(key) + ": expected a string");
    return v.get<std::string>();
  }

  std::string required_text(const std::string& key) {
    if (!has(key)) throw ValidationError(path(key) + ": required");
    return text(key, {});
  }

  bool flag(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_boolean()) throw ValidationError(path(key) + ": expected true or false");
    return v.get<bool>();
  }

  std::string path(const std::string& key) const { return where_.empty() ? key : where_ + "." + key; }

  void finish() const {
    for (const auto& item : j_.items())
      if (!seen_.count(item.key())) throw ValidationError(path(item.key()) + ": unknown key");
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

template <typename Fn>
void with_context(const std::string& where, Fn&& fn) {
  try {
    fn();
  } catch (const ValidationError& e) {
    throw ValidationError(where + ": " + e.what());
  } catch (const ParameterError& e) {
    throw ValidationError(where + ": " + e.what());
  }
}

}  // namespace

ModelParams params_from_json(const json& j, std::string_view system, const std::string& where) {
  ModelParams params;
  if (system == "single") {
    params = SingleNeuronParams<>{};
  } else if (system == "two") {
    params = TwoNeuronParams<>{};
  } else {
    throw ValidationError("system: expected \"single\" or \"two\"");
  }
  if (j.is_null()) return params;
  Fields f(j, where);
  for (const auto& name : param_names(params)) set_param(params, name, f.number(name, get_param(params, name)));
  f.finish();
  return params;
}

json params_to_json(const ModelParams& p) {
  json j = json::object();
  for (const auto& name : param_names(p)) j[name] = get_param(p, name);
  return j;
}

std::vector<RampSchedule> schedules_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw ValidationError(where + ": expected an array");
  std::vector<RampSchedule> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    Fields f(j[i], where + "[" + std::to_string(i) + "]");
    RampSchedule s;
    s.param = f.required_text("param");
    if (!f.has("start") || !f.has("end")) throw ValidationError(f.path("start/end") + ": required");
    s.start = f.number("start", 0);
    s.end = f.number("end", 0);
    const std::string pattern = f.text("pattern", "up_then_down");
    const auto parsed = parse_ramp_pattern(pattern);
    if (!parsed) throw ValidationError(f.path("pattern") + ": expected up_then_down or down_then_up");
    s.pattern = *parsed;
    f.finish();
    out.push_back(std::move(s));
  }
  return out;
}

State2<> state_from_json(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.empty() || j.size() > 2 || !j[0].is_number() || (j.size() == 2 && !j[1].is_number()))
    throw ValidationError(where + ": expected [x] or [x, y]");
  return {j[0].get<double>(), j.size() == 2 ? j[1].get<double>() : 0.0};
}

namespace {

json state_to_json(const State2<>& s, bool two) {
  return two ? json::array({s.x(), s.y()}) : json::array({s.x()});
}

}  // namespace

void validate(const Scenario& s) {
  with_context("params", [&] { validate(s.params); });
  const bool two = is_two_neuron(s.params);
  switch (s.task) {
    case TaskKind::curve:
      if (s.curve.kinds.empty()) throw ValidationError("curve.kinds: at least one kind required");
      if (!(s.curve.x_min < s.curve.x_max)) throw ValidationError("curve: x_min must be below x_max");
      if (s.curve.samples < 2) throw ValidationError("curve.samples: at least 2 required");
      if (two) {
        const auto& p = std::get<TwoNeuronParams<>>(s.params);
        if (p.w21 == 0) throw ValidationError("params.w21: must be nonzero to trace boundaries");
        if (p.w22 != 0) throw ValidationError("params.w22: boundary analysis requires w22 = 0");
      } else if (std::count(s.curve.kinds.begin(), s.curve.kinds.end(), BoundaryKind::neimark_sacker)) {
        throw ValidationError("curve.kinds: the single neuron has no Neimark-Sacker boundary");
      }
      break;
    case TaskKind::scan:
      if (!(s.scan.step > 0)) throw ValidationError("scan.step: must be positive");
      if (!(s.scan.hysteresis_tolerance > 0)) throw ValidationError("scan.hysteresis_tolerance: must be positive");
      with_context("scan", [&] {
        const ScanConfig c = s.scan.config();
        ModelParams lo = s.params, hi = s.params;
        if (c.schedules.empty()) throw ValidationError("at least one schedule required");
        if (c.iterations_per_step < 1) throw ValidationError("iterations_per_step must be at least 1");
        for (const auto& sch : c.schedules) {
          set_param(lo, sch.param, sch.first_leg_origin());
          set_param(hi, sch.param, sch.first_leg_target());
        }
        validate(lo);
        validate(hi);
      });
      break;
    case TaskKind::classify:
      if (s.classify.n < 2 || (s.classify.n & (s.classify.n - 1)) != 0)
        throw ValidationError("classify.n: must be a power of two");
      break;
  }
  for (const auto& o : s.outputs)
    if (o.path.empty()) throw ValidationError("outputs: path must not be empty");
}

json to_json(const Scenario& s) {
  const bool two = is_two_neuron(s.params);
  json j{{"id", s.id},
         {"system", two ? "two" : "single"},
         {"params", params_to_json(s.params)},
         {"task", std::string(to_string(s.task))}};
  if (!s.description.empty()) j["description"] = s.description;
  if (s.inferred) j["inferred"] = true;
  switch (s.task) {
    case TaskKind::curve: {
      json kinds = json::array();
      for (auto k : s.curve.kinds) kinds.push_back(std::string(to_string(k)));
      j["curve"] = {{"kinds", kinds}, {"x_min", s.curve.x_min}, {"x_max", s.curve.x_max},
                    {"samples", s.curve.samples}};
      break;
    }
    case TaskKind::scan: {
      json schedules = json::array();
      for (const auto& sch : s.scan.schedules)
        schedules.push_back({{"param", sch.param}, {"start", sch.start}, {"end", sch.end},
                             {"pattern", std::string(to_string(sch.pattern))}});
      j["scan"] = {{"schedules", schedules},
                   {"step", s.scan.step},
                   {"iterations_per_step", s.scan.iterations_per_step},
                   {"initial_state", state_to_json(s.scan.initial_state, two)},
                   {"hysteresis_tolerance", s.scan.hysteresis_tolerance}};
      break;
    }
    case TaskKind::classify:
      j["classify"] = {{"initial_state", state_to_json(s.classify.initial_state, two)},
                       {"transient", s.classify.transient},
                       {"n", s.classify.n}};
      break;
  }
  if (!s.outputs.empty()) {
    json outs = json::array();
    for (const auto& o : s.outputs) outs.push_back({{"format", std::string(to_string(o.format))}, {"path", o.path}});
    j["outputs"] = outs;
  }
  return j;
}

Scenario scenario_from_json(const json& j) {
  Fields f(j, "");
  Scenario s;
  s.id = f.text("id", "scenario");
  s.description = f.text("description", "");
  s.inferred = f.flag("inferred", false);
  const std::string system = f.required_text("system");
  s.params = params_from_json(f.has("params") ? f.raw("params") : json(), system, "params");

  const std::string task = f.required_text("task");
  if (task == "curve") {
    s.task = TaskKind::curve;
  } else if (task == "scan") {
    s.task = TaskKind::scan;
  } else if (task == "classify") {
    s.task = TaskKind::classify;
  } else {
    throw ValidationError("task: expected curve, scan or classify");
  }

  if (f.has("curve")) {
    Fields c(f.raw("curve"), "curve");
    if (c.has("kinds")) {
      const json& kinds = c.raw("kinds");
      if (!kinds.is_array()) throw ValidationError("curve.kinds: expected an array");
      s.curve.kinds.clear();
      for (const auto& k : kinds) {
        const auto parsed = k.is_string() ? parse_boundary_kind(k.get<std::string>()) : std::nullopt;
        if (!parsed) throw ValidationError("curve.kinds: expected fold, flip or ns");
        s.curve.kinds.push_back(*parsed);
      }
    } else if (system == "single") {
      s.curve.kinds = {BoundaryKind::fold, BoundaryKind::flip};
    }
    s.curve.x_min = c.number("x_min", s.curve.x_min);
    s.curve.x_max = c.number("x_max", s.curve.x_max);
    s.curve.samples = c.count("samples", s.curve.samples);
    c.finish();
  } else if (system == "single" && s.task == TaskKind::curve) {
    s.curve.kinds = {BoundaryKind::fold, BoundaryKind::flip};
  }

  if (f.has("scan")) {
    Fields c(f.raw("scan"), "scan");
    if (c.has("schedules")) s.scan.schedules = schedules_from_json(c.raw("schedules"), "scan.schedules");
    s.scan.step = c.number("step", s.scan.step);
    s.scan.iterations_per_step = c.count("iterations_per_step", s.scan.iterations_per_step);
    if (c.has("initial_state")) s.scan.initial_state = state_from_json(c.raw("initial_state"), "scan.initial_state");
    s.scan.hysteresis_tolerance = c.number("hysteresis_tolerance", s.scan.hysteresis_tolerance);
    c.finish();
  }

  if (f.has("classify")) {
    Fields c(f.raw("classify"), "classify");
    if (c.has("initial_state"))
      s.classify.initial_state = state_from_json(c.raw("initial_state"), "classify.initial_state");
    s.classify.transient = c.count("transient", s.classify.transient);
    s.classify.n = c.count("n", s.classify.n);
    c.finish();
  }

  if (f.has("outputs")) {
    const json& outs = f.raw("outputs");
    if (!outs.is_array()) throw ValidationError("outputs: expected an array");
    for (std::size_t i = 0; i < outs.size(); ++i) {
      Fields o(outs[i], "outputs[" + std::to_string(i) + "]");
      const auto fmt = parse_output_format(o.text("format", "csv"));
      if (!fmt) throw ValidationError(o.path("format") + ": expected csv, json or svg");
      s.outputs.push_back({*fmt, o.required_text("path")});
      o.finish();
    }
  }
  f.finish();
  validate(s);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read scenario file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t upto = std::min(e.byte == 0 ? 0 : e.byte - 1, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n');
    const auto last_nl = text.rfind('\n', upto == 0 ? 0 : upto - 1);
    const auto column = last_nl == std::string::npos ? upto + 1 : upto - last_nl;
    throw ValidationError(path.string() + ":" + std::to_string(line) + ":" + std::to_string(column) +
                          ": parse error: " + e.what());
  }
  try {
    return scenario_from_json(j);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void save_scenario(const Scenario& s, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write scenario file " + path.string());
  out << to_json(s).dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing scenario file " + path.string());
}

// ---------------------------------------------------------------------------
// Figure presets

namespace {

TwoNeuronParams<> case_params(double w11, double b2, double w21) {
  TwoNeuronParams<> p;
  p.w11 = w11;
  p.b2 = b2;
  p.w21 = w21;
  p.alpha = 1.0;
  p.beta = 0.3;
  return p;
}

const TwoNeuronParams<> kNoSelfWeight = case_params(0, 3, 5);   // w11 = 0
const TwoNeuronParams<> kExcitatory = case_params(1, 1, 2);     // w11 > 0
const TwoNeuronParams<> kInhibitory = case_params(-2, -3, 5);   // w11 < 0

Scenario curve_preset(std::string id, std::string description, ModelParams params) {
  Scenario s;
  s.id = std::move(id);
  s.description = std::move(description);
  s.params = std::move(params);
  s.task = TaskKind::curve;
  if (!is_two_neuron(s.params)) s.curve.kinds = {BoundaryKind::fold, BoundaryKind::flip};
  return s;
}

Scenario scan_preset(std::string id, std::string description, ModelParams params,
                     std::vector<RampSchedule> schedules, State2<> init) {
  Scenario s;
  s.id = std::move(id);
  s.description = std::move(description);
  s.params = std::move(params);
  s.task = TaskKind::scan;
  s.scan.schedules = std::move(schedules);
  s.scan.step = 0.01;
  s.scan.initial_state = init;
  return s;
}

TwoNeuronParams<> with_w12(TwoNeuronParams<> p, double w12, double b1 = 0) {
  p.w12 = w12;
  p.b1 = b1;
  return p;
}

SingleNeuronParams<> single(double b, double w) {
  SingleNeuronParams<> p;
  p.b = b;
  p.gamma = 0.5;
  p.w = w;
  return p;
}

constexpr auto up = RampPattern::up_then_down;
constexpr auto down = RampPattern::down_then_up;

const std::vector<Scenario>& registry() {
  static const std::vector<Scenario> presets = [] {
    std::vector<Scenario> v;
    v.push_back(curve_preset("1", "single neuron stability diagram, gamma = 0.5", single(0, 0)));

    auto s = scan_preset("2a", "single neuron, w = 3, b ramped over [-5, 0]", single(-5, 3),
                         {{"b", -5, 0, up}}, {-10, 0});
    s.inferred = true;  // initial state not stated
    v.push_back(s);
    s = scan_preset("2a-text", "single neuron, w = 3, b ramped over [-5, 5]", single(-5, 3), {{"b", -5, 5, up}},
                    {-10, 0});
    s.inferred = true;
    v.push_back(s);
    s = scan_preset("2b", "single neuron, b over [-5, 0] and w over [3, 5] together", single(-5, 3),
                    {{"b", -5, 0, up}, {"w", 3, 5, up}}, {-10, 0});
    s.inferred = true;
    v.push_back(s);
    v.push_back(scan_preset("3a", "single neuron, b up over [-5, 5] with w down over [-10, 10], x0 = -10",
                            single(-5, 10), {{"b", -5, 5, up}, {"w", -10, 10, down}}, {-10, 0}));
    v.push_back(scan_preset("3b", "single neuron, b up over [-5, 5] with w down over [-10, 10], x0 = 10",
                            single(-5, 10), {{"b", -5, 5, up}, {"w", -10, 10, down}}, {10, 0}));

    v.push_back(curve_preset("6", "two-neuron stability diagram, w11 = 0", kNoSelfWeight));
    v.push_back(scan_preset("7a", "w11 = 0, w12 = 5, b1 over [-5, 5]", with_w12(kNoSelfWeight, 5),
                            {{"b1", -5, 5, up}}, {-7, -2}));
    v.push_back(scan_preset("7b", "w11 = 0, w12 = -4, b1 over [-5, 5]", with_w12(kNoSelfWeight, -4),
                            {{"b1", -5, 5, up}}, {-3, -2}));

    v.push_back(curve_preset("8", "two-neuron stability diagram, w11 > 0", kExcitatory));
    v.push_back(scan_preset("9a", "w11 = 1, w12 = 5, b1 over [-5, 5]", with_w12(kExcitatory, 5),
                            {{"b1", -5, 5, up}}, {-7, -1}));
    v.push_back(scan_preset("9b", "w11 = 1, w12 = -5, b1 over [-5, 5]", with_w12(kExcitatory, -5),
                            {{"b1", -5, 5, up}}, {-5, -1}));

    v.push_back(curve_preset("10", "two-neuron stability diagram, w11 < 0", kInhibitory));
    v.push_back(scan_preset("11a", "w11 = -2, w12 = 5, b1 over [-8, 8]", with_w12(kInhibitory, 5),
                            {{"b1", -8, 8, up}}, {-11, -8}));
    v.push_back(scan_preset("11b", "w11 = -2, w12 = -1, b1 over [-5, 5]", with_w12(kInhibitory, -1),
                            {{"b1", -5, 5, up}}, {-2, -8}));
    v.push_back(scan_preset("11b-text", "w11 = -2, w12 = -5, b1 over [-5, 5]", with_w12(kInhibitory, -5),
                            {{"b1", -5, 5, up}}, {-2, -8}));
    v.push_back(scan_preset("12a", "w11 = -2, b1 = 1, w12 down then up over [-10, 10], init (-7, -7)",
                            with_w12(kInhibitory, 10, 1), {{"w12", -10, 10, down}}, {-7, -7}));
    v.push_back(scan_preset("12b", "w11 = -2, b1 = 1, w12 down then up over [-10, 10], init (4, 2)",
                            with_w12(kInhibitory, 10, 1), {{"w12", -10, 10, down}}, {4, 2}));
    s = scan_preset("13", "w11 = -2, b1 = 1, w12 down then up over [5, 10], init (4, 2)",
                    with_w12(kInhibitory, 10, 1), {{"w12", 5, 10, down}}, {4, 2});
    s.inferred = true;  // b1 carried over from the 12a/12b set-up
    v.push_back(s);
    return v;
  }();
  return presets;
}

}  // namespace

std::vector<PresetInfo> preset_list() {
  std::vector<PresetInfo> out;
  for (const auto& s : registry()) out.push_back({s.id, s.description});
  return out;
}

Scenario preset(std::string_view figure_id) {
  for (const auto& s : registry())
    if (s.id == figure_id) return s;
  std::string ids;
  for (const auto& s : registry()) ids += (ids.empty() ? "" : ", ") + s.id;
  throw ValidationError("unknown figure id '" + std::string(figure_id) + "'; known ids: " + ids);
}

// ---------------------------------------------------------------------------
// Execution

std::vector<BoundaryCurve> compute_curves(const Scenario& s) {
  const auto grid = uniform_grid(s.curve.x_min, s.curve.x_max, s.curve.samples);
  std::vector<BoundaryCurve> curves;
  if (const auto* two = std::get_if<TwoNeuronParams<>>(&s.params)) {
    for (auto kind : s.curve.kinds) curves.push_back(two_neuron_boundary(kind, TwoNeuronPlane::from(*two), grid));
  } else {
    const double gamma = std::get<SingleNeuronParams<>>(s.params).gamma;
    for (auto kind : s.curve.kinds)
      curves.push_back(single_neuron_boundary(
          gamma, kind == BoundaryKind::fold ? SingleBranch::b_plus : SingleBranch::b_minus, grid));
  }
  return curves;
}

ScenarioRun execute(const Scenario& s) {
  validate(s);
  ScenarioRun run;
  switch (s.task) {
    case TaskKind::curve:
      run.curves = compute_curves(s);
      break;
    case TaskKind::scan: {
      ScanResult scan = run_ramp_scan(s.params, s.scan.config());
      if (scan.failure) throw DivergenceError(scan.failure->step, scan.failure->magnitude);
      run.hysteresis = detect_hysteresis(scan, s.scan.hysteresis_tolerance);
      run.oscillation = detect_oscillation(scan);
      run.scan = std::move(scan);
      break;
    }
    case TaskKind::classify:
      run.spectrum = classify_orbit(s.params, s.classify.initial_state, s.classify.transient, s.classify.n);
      break;
  }
  return run;
}

namespace {

void write_output(std::ostream& os, const Scenario& s, const ScenarioRun& run, OutputFormat fmt) {
  const std::string title = s.id.empty() ? std::string(to_string(s.task)) : s.id;
  switch (s.task) {
    case TaskKind::curve:
      if (fmt == OutputFormat::csv) write_curves_csv(os, run.curves);
      if (fmt == OutputFormat::svg) write_curves_svg(os, run.curves, title);
      if (fmt == OutputFormat::json) {
        json j = json::object();
        for (const auto& c : run.curves) j[std::string(to_string(c.kind))] = curve_json(c);
        os << j.dump() << '\n';
      }
      break;
    case TaskKind::scan:
      if (fmt == OutputFormat::csv) write_scan_csv(os, *run.scan);
      if (fmt == OutputFormat::svg) write_scan_svg(os, *run.scan, title);
      if (fmt == OutputFormat::json)
        os << json{{"points", scan_points_json(*run.scan)},
                   {"hysteresis", hysteresis_json(*run.hysteresis)},
                   {"oscillation", oscillation_json(*run.oscillation)}}
                  .dump()
           << '\n';
      break;
    case TaskKind::classify:
      if (fmt == OutputFormat::csv) write_spectrum_csv(os, *run.spectrum);
      if (fmt == OutputFormat::svg) write_spectrum_svg(os, *run.spectrum, title);
      if (fmt == OutputFormat::json) os << spectrum_json(*run.spectrum, true).dump() << '\n';
      break;
  }
}

}  // namespace

std::vector<std::filesystem::path> run_scenario(const Scenario& s, const std::filesystem::path& out_dir,
                                                ScenarioRun* run_out) {
  namespace fs = std::filesystem;
  ScenarioRun run = execute(s);

  std::vector<OutputSpec> outputs = s.outputs;
  if (outputs.empty()) outputs.push_back({OutputFormat::csv, s.id + ".csv"});

  std::vector<fs::path> written;
  try {
    if (!out_dir.empty()) fs::create_directories(out_dir);
    for (const auto& o : outputs) {
      const fs::path target = fs::path(o.path).is_absolute() ? fs::path(o.path) : out_dir / o.path;
      std::ofstream os(target, std::ios::binary);
      if (!os) throw std::runtime_error("cannot open " + target.string() + " for writing");
      written.push_back(target);
      write_output(os, s, run, o.format);
      os.flush();
      if (!os) throw std::runtime_error("failed writing " + target.string());
    }
  } catch (...) {
    std::error_code ec;
    for (const auto& p : written) fs::remove(p, ec);
    throw;
  }
  if (run_out) *run_out = std::move(run);
  return written;
}

}  // namespace neuromod
