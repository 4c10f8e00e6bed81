// neuromod: stability boundaries, feedback-ramped bifurcation scans and
// orbit spectra for the single-neuron and two-neuron discrete modules.

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "neuromod/output.hpp"
#include "neuromod/scenario.hpp"
#include "neuromod/service.hpp"

namespace fs = std::filesystem;
using namespace neuromod;

namespace {

enum ExitCode { kOk = 0, kValidation = 2, kDivergence = 3, kIo = 4 };

struct Overrides {
  std::optional<double> step;
  std::vector<double> init;
  std::optional<std::size_t> iters_per_step;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--step", step, "ramp step size on the first swept parameter");
    cmd->add_option("--init", init, "initial state: x [y]")->expected(1, 2);
    cmd->add_option("--iters-per-step", iters_per_step, "map iterations per ramp step");
  }

  void apply(Scenario& s) const {
    if (step) s.scan.step = *step;
    if (iters_per_step) s.scan.iterations_per_step = *iters_per_step;
    if (!init.empty()) {
      const State2<> st(init[0], init.size() > 1 ? init[1] : 0.0);
      s.scan.initial_state = st;
      s.classify.initial_state = st;
    }
  }
};

void print_summary(const Scenario& s, const ScenarioRun& run) {
  if (run.hysteresis) {
    std::cout << s.id << ": " << run.hysteresis->windows.size() << " hysteresis window(s)";
    for (const auto& w : run.hysteresis->windows)
      std::cout << " [" << format_number(w.param_lo) << ", " << format_number(w.param_hi) << "]";
    std::cout << '\n';
  }
  if (run.oscillation && !run.oscillation->windows.empty()) {
    std::cout << s.id << ": oscillation";
    for (const auto& w : run.oscillation->windows)
      std::cout << " leg" << static_cast<int>(w.leg) << "[" << format_number(w.param_lo) << ", "
                << format_number(w.param_hi) << "]";
    std::cout << '\n';
  }
}

int run_and_report(const Scenario& s, const fs::path& out_dir) {
  ScenarioRun run;
  for (const auto& p : run_scenario(s, out_dir, &run)) std::cout << p.string() << '\n';
  print_summary(s, run);
  return kOk;
}

std::vector<OutputFormat> parse_formats(const std::string& list) {
  std::vector<OutputFormat> out;
  std::stringstream ss(list);
  for (std::string item; std::getline(ss, item, ',');) {
    const auto f = parse_output_format(item);
    if (!f) throw ValidationError("--formats: unknown format '" + item + "'");
    out.push_back(*f);
  }
  if (out.empty()) throw ValidationError("--formats: empty list");
  return out;
}

service::ExplorerServer* g_server = nullptr;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bifurcation and stability analysis of bistable neuromodules"};
  app.require_subcommand(1);

  // figure
  auto* figure = app.add_subcommand("figure", "reproduce a figure preset");
  std::string figure_id;
  fs::path figure_out = ".";
  std::string formats = "csv";
  Overrides figure_over;
  figure->add_option("id", figure_id, "figure id (see `neuromod presets`)")->required();
  figure->add_option("--out", figure_out, "output directory")->required();
  figure->add_option("--formats", formats, "comma-separated: csv,json,svg");
  figure_over.add_to(figure);

  // curve
  auto* curve = app.add_subcommand("curve", "trace stability boundaries");
  std::string curve_system = "two", curve_kind = "all";
  double w11 = 0, b2 = 3, w21 = 5, alpha = 1, beta = 0.3, gamma = 0.5;
  double xmin = -8, xmax = 8;
  std::size_t samples = 2001;
  fs::path curve_out;
  curve->add_option("--system", curve_system, "single or two")->check(CLI::IsMember({"single", "two"}));
  curve->add_option("--kind", curve_kind, "fold, flip, ns or all")->check(CLI::IsMember({"fold", "flip", "ns", "all"}));
  curve->add_option("--w11", w11);
  curve->add_option("--b2", b2);
  curve->add_option("--w21", w21);
  curve->add_option("--alpha", alpha);
  curve->add_option("--beta", beta);
  curve->add_option("--gamma", gamma, "single-neuron decay rate");
  curve->add_option("--xmin", xmin);
  curve->add_option("--xmax", xmax);
  curve->add_option("--n", samples, "number of parametrisation samples");
  curve->add_option("--out", curve_out, "CSV file (stdout when omitted)");

  // scan
  auto* scan = app.add_subcommand("scan", "run a scenario file");
  fs::path scan_file, scan_out = ".";
  Overrides scan_over;
  scan->add_option("--scenario", scan_file, "scenario JSON file")->required();
  scan->add_option("--out", scan_out, "output directory");
  scan_over.add_to(scan);

  // classify
  auto* classify = app.add_subcommand("classify", "classify the orbit of a scenario by its power spectrum");
  fs::path classify_file;
  Overrides classify_over;
  classify->add_option("--scenario", classify_file, "scenario JSON file")->required();
  classify_over.add_to(classify);

  // serve
  auto* serve = app.add_subcommand("serve", "start the explorer HTTP API");
  int port = 8080;
  std::string host = "127.0.0.1";
  fs::path static_dir;
  serve->add_option("--port", port);
  serve->add_option("--host", host);
  serve->add_option("--static", static_dir, "directory with the explorer UI bundle");

  app.add_subcommand("presets", "list figure presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kValidation;
  }

  try {
    if (*figure) {
      Scenario s = preset(figure_id);
      figure_over.apply(s);
      for (auto f : parse_formats(formats)) s.outputs.push_back({f, s.id + "." + std::string(to_string(f))});
      return run_and_report(s, figure_out);
    }
    if (*curve) {
      Scenario s;
      s.id = "curve";
      s.task = TaskKind::curve;
      if (curve_system == "single") {
        SingleNeuronParams<> p;
        p.gamma = gamma;
        s.params = p;
        s.curve.kinds = {BoundaryKind::fold, BoundaryKind::flip};
      } else {
        TwoNeuronParams<> p;
        p.w11 = w11, p.b2 = b2, p.w21 = w21, p.alpha = alpha, p.beta = beta;
        s.params = p;
      }
      if (curve_kind != "all") s.curve.kinds = {*parse_boundary_kind(curve_kind)};
      s.curve.x_min = xmin;
      s.curve.x_max = xmax;
      s.curve.samples = samples;
      validate(s);
      const auto curves = compute_curves(s);
      if (curve_out.empty()) {
        write_curves_csv(std::cout, curves);
      } else {
        std::ofstream os(curve_out, std::ios::binary);
        if (!os) throw std::runtime_error("cannot open " + curve_out.string() + " for writing");
        write_curves_csv(os, curves);
        if (!os) throw std::runtime_error("failed writing " + curve_out.string());
      }
      return kOk;
    }
    if (*scan) {
      Scenario s = load_scenario(scan_file);
      scan_over.apply(s);
      return run_and_report(s, scan_out);
    }
    if (*classify) {
      Scenario s = load_scenario(classify_file);
      classify_over.apply(s);
      s.task = TaskKind::classify;
      std::cout << spectrum_json(*execute(s).spectrum, false).dump(2) << '\n';
      return kOk;
    }
    if (*serve) {
      service::ExplorerServer server(static_dir);
      const int bound = server.bind(host, port);
      if (bound < 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
      g_server = &server;
      std::signal(SIGINT, [](int) {
        if (g_server) g_server->stop();
      });
      std::cout << "listening on http://" << host << ":" << bound << std::endl;
      server.listen();
      g_server = nullptr;
      return kOk;
    }
    for (const auto& p : preset_list()) std::cout << p.id << "\t" << p.description << '\n';
    return kOk;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kValidation;
  } catch (const ParameterError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kValidation;
  } catch (const DivergenceError& e) {
    std::cerr << "numerical divergence: " << e.what() << '\n';
    return kDivergence;
  } catch (const std::exception& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  }
}
