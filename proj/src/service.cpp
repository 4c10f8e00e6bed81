#include "neuromod/service.hpp"

#include <charconv>
#include <cmath>
#include <optional>
#include <set>

#include "neuromod/output.hpp"
#include "neuromod/scenario.hpp"

// After Eigen: <resolv.h>, pulled in by httplib, defines a `_res` macro that
// collides with Eigen parameter names.
#include <httplib.h>

namespace neuromod::service {

using nlohmann::json;

namespace {

Reply error_reply(int status, const std::string& message, json fields = json::object()) {
  json body{{"error", message}};
  if (!fields.empty()) body["fields"] = std::move(fields);
  return {status, std::move(body)};
}

std::optional<std::string> first(const Query& q, const std::string& key) {
  const auto it = q.find(key);
  if (it == q.end()) return std::nullopt;
  return it->second;
}

// Collects per-field problems while reading query parameters.
class QueryReader {
 public:
  explicit QueryReader(const Query& q) : q_(q) {}

  double number(const std::string& key, double fallback) {
    const auto raw = first(q_, key);
    if (!raw) return fallback;
    double v = 0;
    const auto* end = raw->data() + raw->size();
    const auto res = std::from_chars(raw->data(), end, v);
    if (res.ec != std::errc() || res.ptr != end || !std::isfinite(v)) {
      errors_[key] = "expected a finite decimal number";
      return fallback;
    }
    return v;
  }

  void fail(const std::string& key, const std::string& message) { errors_[key] = message; }
  const json& errors() const { return errors_; }

 private:
  const Query& q_;
  json errors_ = json::object();
};

}  // namespace

Reply presets() {
  json arr = json::array();
  for (const auto& p : preset_list()) arr.push_back({{"id", p.id}, {"description", p.description}});
  return {200, arr};
}

Reply curves(const Query& query) {
  QueryReader r(query);
  const std::string system = first(query, "system").value_or("two");
  if (system != "two" && system != "single") r.fail("system", "expected two or single");

  const double xmin = r.number("xmin", -8.0);
  const double xmax = r.number("xmax", 8.0);
  const double n_raw = r.number("n", 2001.0);
  if (!(xmin < xmax)) r.fail("xmin", "must be below xmax");
  if (!(n_raw >= 1) || n_raw != std::floor(n_raw)) {
    r.fail("n", "must be a positive integer");
  } else if (n_raw > static_cast<double>(kMaxCurveSamples)) {
    r.fail("n", "must not exceed " + std::to_string(kMaxCurveSamples));
  }

  if (system == "single") {
    const double gamma = r.number("gamma", 0.5);
    if (!(gamma > 0 && gamma < 1)) r.fail("gamma", "gamma must lie in (0,1)");
    if (!r.errors().empty()) return error_reply(400, "invalid query", r.errors());
    const auto grid = uniform_grid(xmin, xmax, static_cast<std::size_t>(n_raw));
    return {200,
            {{"fold", curve_json(single_neuron_boundary(gamma, SingleBranch::b_plus, grid))},
             {"flip", curve_json(single_neuron_boundary(gamma, SingleBranch::b_minus, grid))}}};
  }

  TwoNeuronPlane plane;
  plane.alpha = r.number("alpha", 1.0);
  plane.beta = r.number("beta", 0.3);
  plane.b2 = r.number("b2", 3.0);
  plane.w11 = r.number("w11", 0.0);
  plane.w21 = r.number("w21", 5.0);
  if (!(plane.alpha > 0)) r.fail("alpha", "must be positive");
  if (!(plane.beta > 0)) r.fail("beta", "must be positive");
  if (!r.errors().empty()) return error_reply(400, "invalid query", r.errors());
  if (plane.w21 == 0) return error_reply(422, "w21 must be nonzero to trace boundaries", {{"w21", "must be nonzero"}});

  const auto grid = uniform_grid(xmin, xmax, static_cast<std::size_t>(n_raw));
  return {200,
          {{"fold", curve_json(two_neuron_boundary(BoundaryKind::fold, plane, grid))},
           {"flip", curve_json(two_neuron_boundary(BoundaryKind::flip, plane, grid))},
           {"ns", curve_json(two_neuron_boundary(BoundaryKind::neimark_sacker, plane, grid))}}};
}

Reply scan(const std::string& body) {
  json req;
  try {
    req = json::parse(body);
  } catch (const json::parse_error& e) {
    return error_reply(400, std::string("malformed JSON: ") + e.what());
  }
  if (!req.is_object()) return error_reply(400, "request body must be a JSON object");

  static const std::set<std::string> known{"system",          "params", "schedules", "step", "steps_per_leg",
                                           "iterations_per_step", "initial_state", "tolerance"};
  for (const auto& item : req.items())
    if (!known.count(item.key())) return error_reply(400, "unknown field", {{item.key(), "unknown key"}});

  ModelParams params;
  ScanConfig config;
  double tolerance = kDefaultHysteresisTol;
  try {
    const std::string system = req.value("system", std::string("two"));
    params = params_from_json(req.contains("params") ? req["params"] : json(), system, "params");
    if (!req.contains("schedules")) throw ValidationError("schedules: required");
    config.schedules = schedules_from_json(req["schedules"], "schedules");
    if (config.schedules.empty()) throw ValidationError("schedules: at least one schedule required");

    if (req.contains("steps_per_leg")) {
      const auto& v = req["steps_per_leg"];
      if (!v.is_number_unsigned() || v.get<std::size_t>() < 1)
        throw ValidationError("steps_per_leg: expected a positive integer");
      config.steps_per_leg = v.get<std::size_t>();
    } else {
      const auto& v = req.contains("step") ? req["step"] : json(0.01);
      if (!v.is_number()) throw ValidationError("step: expected a number");
      config.steps_per_leg = steps_for_step_size(config.schedules.front(), v.get<double>());
    }
    if (req.contains("iterations_per_step")) {
      const auto& v = req["iterations_per_step"];
      if (!v.is_number_unsigned() || v.get<std::size_t>() < 1)
        throw ValidationError("iterations_per_step: expected a positive integer");
      config.iterations_per_step = v.get<std::size_t>();
    }
    if (req.contains("initial_state")) config.initial_state = state_from_json(req["initial_state"], "initial_state");
    if (req.contains("tolerance")) {
      if (!req["tolerance"].is_number() || !(req["tolerance"].get<double>() > 0))
        throw ValidationError("tolerance: expected a positive number");
      tolerance = req["tolerance"].get<double>();
    }
  } catch (const ValidationError& e) {
    return error_reply(400, e.what());
  } catch (const ParameterError& e) {
    return error_reply(400, e.what());
  } catch (const json::exception& e) {
    return error_reply(400, e.what());
  }

  const double total = 2.0 * static_cast<double>(config.steps_per_leg) * static_cast<double>(config.iterations_per_step);
  if (total > static_cast<double>(kMaxScanSteps))
    return error_reply(413, "scan needs " + std::to_string(static_cast<long long>(total)) +
                                " steps; the limit is " + std::to_string(kMaxScanSteps));

  ScanResult result;
  try {
    result = run_ramp_scan(params, config);
  } catch (const ValidationError& e) {
    return error_reply(400, e.what());
  }
  if (result.failure) return error_reply(500, "divergence", {{"detail", result.failure->message}});

  return {200,
          {{"points", scan_points_json(result)},
           {"hysteresis", hysteresis_json(detect_hysteresis(result, tolerance))},
           {"oscillation", oscillation_json(detect_oscillation(result))}}};
}

struct ExplorerServer::Impl {
  httplib::Server server;
};

namespace {

void send(httplib::Response& res, const Reply& reply) {
  res.status = reply.status;
  res.set_content(reply.body.dump(), "application/json");
}

Query to_query(const httplib::Params& params) { return Query(params.begin(), params.end()); }

}  // namespace

ExplorerServer::ExplorerServer(std::filesystem::path static_dir) : impl_(std::make_unique<Impl>()) {
  auto& srv = impl_->server;
  srv.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                           {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                           {"Access-Control-Allow-Headers", "Content-Type"}});
  srv.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  srv.Get("/api/presets", [](const httplib::Request&, httplib::Response& res) { send(res, presets()); });
  srv.Get("/api/curves",
          [](const httplib::Request& req, httplib::Response& res) { send(res, curves(to_query(req.params))); });
  srv.Post("/api/scan", [](const httplib::Request& req, httplib::Response& res) { send(res, scan(req.body)); });
  if (!static_dir.empty()) srv.set_mount_point("/", static_dir.string());
}

ExplorerServer::~ExplorerServer() = default;

int ExplorerServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool ExplorerServer::listen() { return impl_->server.listen_after_bind(); }

void ExplorerServer::stop() { impl_->server.stop(); }

}  // namespace neuromod::service
