// Acceptance run: one PASS/FAIL line per primary criterion.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/LU>

#include "neuromod/bifurcation.hpp"
#include "neuromod/output.hpp"
#include "neuromod/scenario.hpp"
#include "neuromod/service.hpp"
#include "neuromod/spectrum.hpp"
#include "neuromod/stability_curves.hpp"

#include <httplib.h>

using namespace neuromod;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v, int prec = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;
  void require(bool ok, const std::string& note) {
    pass = pass && ok;
    notes.push_back((ok ? "" : "!") + note);
  }
};

int failures = 0;

void report(const std::string& name, const std::function<void(Outcome&)>& body) {
  Outcome o;
  try {
    body(o);
  } catch (const std::exception& e) {
    o.require(false, std::string("exception: ") + e.what());
  }
  std::cout << (o.pass ? "PASS" : "FAIL") << "  " << name;
  for (std::size_t i = 0; i < o.notes.size(); ++i) std::cout << (i ? "; " : " | ") << o.notes[i];
  std::cout << std::endl;
  failures += !o.pass;
}

ScanResult run_preset_scan(const std::string& id, std::size_t ips = 1) {
  Scenario s = preset(id);
  s.scan.iterations_per_step = ips;
  return run_ramp_scan(s.params, s.scan.config());
}

std::string window_text(double lo, double hi) { return "[" + fmt(lo) + ", " + fmt(hi) + "]"; }

bool near(double v, double target, double tol) { return std::abs(v - target) <= tol; }

double sech2(double u) { return 1 / (std::cosh(u) * std::cosh(u)); }

// ---------------------------------------------------------------------------

struct Residuals {
  double single_fp = 0, single_slope = 0, two_fp = 0, eq5 = 0, det = 0, tr = 0;
  std::size_t two_samples = 0;
};

// scaled: residuals divided by max(1, |p1|, |p2|) of the sample
Residuals boundary_residuals(const std::vector<double>& grid, bool scaled) {
  Residuals r;
  auto scale = [&](const Eigen::Vector2d& pt) {
    return scaled ? std::max({1.0, std::abs(pt[0]), std::abs(pt[1])}) : 1.0;
  };
  for (double gamma : {0.25, 0.5, 0.75}) {
    for (auto branch : {SingleBranch::b_plus, SingleBranch::b_minus}) {
      const double target = branch == SingleBranch::b_plus ? 1 : -1;
      for (const auto& s : single_neuron_boundary(gamma, branch, grid).samples) {
        const SingleNeuronParams<> p{s.point[0], gamma, s.point[1]};
        r.single_fp = std::max(r.single_fp, std::abs(step_single(p, s.x) - s.x) / scale(s.point));
        r.single_slope = std::max(r.single_slope, std::abs(jacobian_single(p, s.x) - target));
      }
    }
  }
  const std::vector<TwoNeuronPlane> planes{{0, 3, 5, 1, 0.3}, {1, 1, 2, 1, 0.3}, {-2, -3, 5, 1, 0.3}};
  for (const auto& f : planes) {
    for (auto kind : {BoundaryKind::fold, BoundaryKind::flip, BoundaryKind::neimark_sacker}) {
      for (const auto& s : two_neuron_boundary(kind, f, grid).samples) {
        ++r.two_samples;
        const double w12 = s.point[1];
        TwoNeuronParams<> p{s.point[0], f.b2, f.w11, w12, f.w21, 0, f.alpha, f.beta};
        const double y = f.b2 + f.w21 * std::tanh(f.alpha * s.x);
        const State2<> st(s.x, y);
        r.two_fp = std::max(r.two_fp, (step_two(p, st) - st).cwiseAbs().maxCoeff() / scale(s.point));
        const double t = f.alpha * f.w11 * sech2(f.alpha * s.x);
        const double c = f.alpha * f.beta * w12 * f.w21 * sech2(f.alpha * s.x) * sech2(f.beta * y);
        if (kind == BoundaryKind::fold) r.eq5 = std::max(r.eq5, std::abs(1 - t - c));
        if (kind == BoundaryKind::flip) r.eq5 = std::max(r.eq5, std::abs(1 + t - c));
        if (kind == BoundaryKind::neimark_sacker) {
          r.det = std::max(r.det, std::abs(jacobian_two(p, st).determinant() - 1));
          r.tr = std::max(r.tr, std::abs(t));
        }
      }
    }
  }
  return r;
}

void boundary_identities(Outcome& o) {
  const auto t0 = Clock::now();
  // 200 samples per curve where the parameters stay O(10), absolute residuals
  const Residuals a = boundary_residuals(uniform_grid(-4, 4, 200), false);
  o.require(a.single_fp < 1e-12, "single fixed-point residual " + fmt(a.single_fp, 3));
  o.require(a.single_slope < 1e-12, "single |f'-+1| " + fmt(a.single_slope, 3));
  o.require(a.two_fp < 1e-12, "two-neuron fixed-point residual " + fmt(a.two_fp, 3) + " over " +
                                  std::to_string(a.two_samples) + " samples");
  o.require(a.eq5 < 1e-10, "characteristic polynomial at +-1 " + fmt(a.eq5, 3));
  o.require(a.det < 1e-10, "NS |det J - 1| " + fmt(a.det, 3));
  o.require(a.tr < 2, "NS max |tr J| " + fmt(a.tr, 8));
  // the full default range reaches |w12| ~ 1e6, so residuals are relative there
  const Residuals w = boundary_residuals(uniform_grid(-8, 8, 200), true);
  o.require(std::max(w.single_fp, w.two_fp) < 1e-12 && w.single_slope < 1e-12 && w.eq5 < 1e-10 && w.det < 1e-10 &&
                w.tr < 2,
            "on [-8, 8] scaled residual " + fmt(std::max(w.single_fp, w.two_fp), 3) + ", eigen conditions " +
                fmt(std::max({w.single_slope, w.eq5, w.det}), 3));
  const double secs = seconds_since(t0);
  o.require(secs < 1, fmt(secs, 2) + " s");
}

// cube root of machine epsilon, the usual central-difference step
const double kFdStep = std::cbrt(std::numeric_limits<double>::epsilon());

void jacobian_correctness(Outcome& o) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(424242);
  std::uniform_real_distribution<double> w(-10, 10), st(-6, 6), g(0.1, 3), gm(0.01, 0.99);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    TwoNeuronParams<> p{w(rng), w(rng), w(rng), w(rng), w(rng), w(rng), g(rng), g(rng)};
    const State2<> s(st(rng), st(rng));
    const Jacobian2<> j = jacobian_two(p, s);
    Jacobian2<> fd;
    for (int c = 0; c < 2; ++c) {
      const double h = kFdStep * std::max(1.0, std::abs(s[c]));
      State2<> up = s, dn = s;
      up[c] += h;
      dn[c] -= h;
      fd.col(c) = (step_two(p, up) - step_two(p, dn)) / (2 * h);
    }
    worst = std::max(worst, (j - fd).cwiseAbs().maxCoeff() / std::max(j.cwiseAbs().maxCoeff(), 1e-3));

    const SingleNeuronParams<> q{w(rng), gm(rng), w(rng)};
    const double x = st(rng);
    const double h = kFdStep * std::max(1.0, std::abs(x));
    const double a = jacobian_single(q, x);
    const double d = (step_single(q, x + h) - step_single(q, x - h)) / (2 * h);
    worst = std::max(worst, std::abs(a - d) / std::max(std::abs(a), 1e-3));
  }
  o.require(worst < 1e-6, "max relative error " + fmt(worst, 3) + " over 1000 draws");
  const double secs = seconds_since(t0);
  o.require(secs < 1, fmt(secs, 2) + " s");
}

void single_neuron_window(Outcome& o) {
  const double s_lo = (1 - std::sqrt(1.0 / 3)) / 2, s_hi = (1 + std::sqrt(1.0 / 3)) / 2;
  // the negative tangency x gives the upper fold
  const double fold_hi = 0.5 * std::log(s_lo / (1 - s_lo)) - 0.5 / (1 - s_lo);
  const double fold_lo = 0.5 * std::log(s_hi / (1 - s_hi)) - 0.5 / (1 - s_hi);

  const auto t0 = Clock::now();
  const auto h = detect_hysteresis(run_preset_scan("2a", 100), 0.5);
  const double secs = seconds_since(t0);
  o.require(h.windows.size() == 1, std::to_string(h.windows.size()) + " window(s), 100 iterations per step");
  if (!h.windows.empty()) {
    const auto& w = h.windows.front();
    o.require(near(w.param_lo, fold_lo, 0.05) && near(w.param_hi, fold_hi, 0.05),
              window_text(w.param_lo, w.param_hi) + " vs folds " + window_text(fold_lo, fold_hi));
  }
  o.require(secs < 1, fmt(secs, 2) + " s");
  const auto lag = detect_hysteresis(run_preset_scan("2a", 1), 0.5);
  if (!lag.windows.empty())
    o.notes.push_back("1 iteration per step gives " +
                      window_text(lag.windows.front().param_lo, lag.windows.back().param_hi));
}

void figure_windows(Outcome& o) {
  constexpr double kTol = 0.5;
  auto timed = [&](const std::string& id) {
    const auto t0 = Clock::now();
    ScanResult r = run_preset_scan(id);
    const double secs = seconds_since(t0);
    o.require(secs < 2 && r.complete(), id + " scan " + fmt(secs, 2) + " s");
    return r;
  };
  auto hysteresis_check = [&](const std::string& id, double lo, double hi) {
    const auto h = detect_hysteresis(timed(id), kTol);
    bool ok = h.windows.size() == 1;
    std::string text = std::to_string(h.windows.size()) + " window(s)";
    if (ok) {
      ok = near(h.windows[0].param_lo, lo, kTol) && near(h.windows[0].param_hi, hi, kTol);
      text = window_text(h.windows[0].param_lo, h.windows[0].param_hi);
    }
    o.require(ok, id + " hysteresis " + text + " vs " + window_text(lo, hi));
  };

  hysteresis_check("7a", -4, 1);

  {
    const auto hull = detect_oscillation(timed("7b"), kTol).hull();
    o.require(hull && near(hull->first, -3, kTol) && near(hull->second, 4, kTol),
              "7b oscillation " + (hull ? window_text(hull->first, hull->second) : std::string("none")) + " vs [-3, 4]");
    Scenario s = preset("7b");
    const double centre = hull ? 0.5 * (hull->first + hull->second) : 0.5;
    set_param(s.params, "b1", centre);
    const auto spec = classify_orbit(s.params, s.scan.initial_state);
    const bool ok = spec.classification == OrbitClass::periodic && spec.period == 2;
    o.require(ok, "7b classify at b1=" + fmt(centre, 3) + ": " + std::string(to_string(spec.classification)) +
                      (spec.classification == OrbitClass::periodic ? "(" + std::to_string(spec.period) + ")" : ""));
  }

  hysteresis_check("9a", -3, 1);

  {
    const auto hull = detect_oscillation(timed("9b"), kTol).hull();
    o.require(hull && near(hull->first, -1, kTol) && near(hull->second, 3, kTol),
              "9b oscillation " + (hull ? window_text(hull->first, hull->second) : std::string("none")) + " vs [-1, 3]");
    int quasi = 0, total = 0;
    if (hull) {
      Scenario s = preset("9b");
      for (double b1 = std::ceil(hull->first * 4) / 4; b1 <= hull->second; b1 += 0.25) {
        set_param(s.params, "b1", b1);
        quasi += classify_orbit(s.params, s.scan.initial_state).classification == OrbitClass::quasiperiodic;
        ++total;
      }
    }
    o.require(quasi > 0, "9b quasiperiodic at " + std::to_string(quasi) + "/" + std::to_string(total) + " b1 values");
  }

  {
    const ScanResult r = timed("11a");
    const auto osc = detect_oscillation(r, kTol);
    const auto hys = detect_hysteresis(r, kTol);
    bool ok = false;
    std::string found;
    auto consider = [&](double lo, double hi) {
      found += (found.empty() ? "" : " ") + window_text(lo, hi);
      ok = ok || (near(lo, 3, kTol) && near(hi, 6, kTol));
    };
    for (const auto& w : osc.windows) consider(w.param_lo, w.param_hi);
    for (const auto& w : hys.windows) consider(w.param_lo, w.param_hi);
    o.require(ok, "11a windows " + (found.empty() ? std::string("none") : found) + " vs [3, 6]");
  }
}

void history_dependence(Outcome& o) {
  const auto t0 = Clock::now();
  const ScanResult a = run_preset_scan("3a");
  const ScanResult b = run_preset_scan("3b");
  double diff = 0;
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    const auto& p = a.points[i];
    if (p.leg != Leg::second || !(p.param_values[0] > -5 && p.param_values[0] < -1)) continue;
    diff = std::max(diff, std::abs(p.state.x() - b.points[i].state.x()));
  }
  o.require(diff > 1.0, "3a vs 3b down-leg max difference " + fmt(diff, 3) + " on -5 < b < -1");

  Scenario s = preset("13");
  const auto open = detect_hysteresis(run_ramp_scan(s.params, s.scan.config()), 0.5);
  s.scan.initial_state = State2<>(-7, -7);
  const auto far = detect_hysteresis(run_ramp_scan(s.params, s.scan.config()), 0.5);
  o.require(open.windows.size() == 1, "13 from (4, 2): " + std::to_string(open.windows.size()) + " window(s)");
  o.require(far.windows.empty(), "13 from (-7, -7): " + std::to_string(far.windows.size()) + " window(s)");
  const double secs = seconds_since(t0);
  o.require(secs < 2, fmt(secs, 2) + " s");
}

void spectrum_checks(Outcome& o) {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> noise;
  std::vector<double> xs(4096);
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = std::sin(0.3 * i) + 0.2 * noise(rng);
  const auto r = power_spectrum(xs, 4096);
  double total = 0, energy = 0, mean = 0;
  for (double p : r.power) total += p;
  for (double v : xs) mean += v;
  mean /= 4096;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double w = 0.5 - 0.5 * std::cos(2 * std::numbers::pi * i / 4096.0);
    energy += std::pow(w * (xs[i] - mean), 2);
  }
  const double rel = std::abs(total - energy) / energy;
  o.require(rel < 1e-10, "Parseval relative error " + fmt(rel, 3));

  std::string trains;
  bool trains_ok = true;
  for (int p : {2, 3, 4, 5, 8}) {
    std::vector<double> t(4096);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = i % p == 0 ? 1.0 : 0.0;
    auto s = power_spectrum(t, 4096);
    classify_spectrum(s);
    const bool ok = s.classification == OrbitClass::periodic && s.period == p;
    trains_ok = trains_ok && ok;
    trains += (trains.empty() ? "" : ",") + std::to_string(p) + (ok ? "" : "x");
  }
  o.require(trains_ok, "impulse trains p=" + trains);

  const double rho = (std::sqrt(5.0) - 1) / 2;
  std::vector<double> g(4096);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::cos(2 * std::numbers::pi * rho * i);
  const auto gs = power_spectrum(g, 4096);
  const double peak = gs.dominant_peaks.empty() ? -1 : gs.dominant_peaks.front().frequency;
  o.require(std::abs(peak - 0.382) <= 1.0 / 4096 + 1e-3 && std::abs(peak - (1 - rho)) <= 1.0 / 4096,
            "golden-ratio peak " + fmt(peak, 6));
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void determinism_and_parity(Outcome& o) {
  const fs::path root = fs::temp_directory_path() / ("neuromod_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  std::size_t same = 0, total = 0;
  for (const auto& info : preset_list()) {
    Scenario s = preset(info.id);
    run_scenario(s, root / "a");
    run_scenario(s, root / "b");
    ++total;
    same += slurp(root / "a" / (s.id + ".csv")) == slurp(root / "b" / (s.id + ".csv"));
  }
  o.require(same == total, std::to_string(same) + "/" + std::to_string(total) + " presets byte-identical");

  const fs::path csv = root / "fig6.csv";
  const std::string cmd = std::string(NEUROMOD_CLI) +
                          " curve --system two --kind all --w11 0 --b2 3 --w21 5 --alpha 1 --beta 0.3 --out " +
                          csv.string() + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  o.require(WIFEXITED(status) && WEXITSTATUS(status) == 0, "CLI curve exit " + std::to_string(WEXITSTATUS(status)));

  service::ExplorerServer server;
  const int port = server.bind("127.0.0.1", 0);
  std::thread t([&] { server.listen(); });
  httplib::Client client("127.0.0.1", port);
  auto res = client.Get("/api/curves?system=two&w11=0&b2=3&w21=5&alpha=1&beta=0.3");
  server.stop();
  t.join();
  o.require(res && res->status == 200, "GET /api/curves");
  if (!res || res->status != 200) return;
  const json api = json::parse(res->body);

  std::istringstream is(slurp(csv));
  std::string line;
  std::map<std::string, std::size_t> next;
  std::size_t rows = 0, mismatched = 0;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("x,", 0) == 0) continue;
    std::stringstream ls(line);
    std::string x, p1, p2, kind;
    std::getline(ls, x, ',');
    std::getline(ls, p1, ',');
    std::getline(ls, p2, ',');
    std::getline(ls, kind, ',');
    const auto& arr = api.at(kind);
    const std::size_t k = next[kind]++;
    ++rows;
    if (k >= arr.size() || std::stod(x) != arr[k]["x"].get<double>() ||
        std::stod(p1) != arr[k]["b1"].get<double>() || std::stod(p2) != arr[k]["w12"].get<double>())
      ++mismatched;
  }
  std::size_t api_rows = 0;
  for (const auto& [k, v] : api.items()) api_rows += v.size();
  o.require(mismatched == 0 && rows == api_rows && rows > 0,
            std::to_string(rows) + " CLI rows vs " + std::to_string(api_rows) + " API samples, " +
                std::to_string(mismatched) + " mismatched");
  fs::remove_all(root);
}

}  // namespace

int main() {
  report("Boundary identities", boundary_identities);
  report("Jacobian correctness", jacobian_correctness);
  report("Single-neuron hysteresis window", single_neuron_window);
  report("Figure-window reproduction", figure_windows);
  report("History dependence", history_dependence);
  report("Spectrum", spectrum_checks);
  report("Determinism and parity", determinism_and_parity);
  std::cout << (failures ? std::to_string(failures) + " criterion(s) failed" : std::string("all criteria passed"))
            << std::endl;
  return failures ? 1 : 0;
}
