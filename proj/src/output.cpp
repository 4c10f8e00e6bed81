#include "neuromod/output.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>

namespace neuromod {

std::string format_number(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

void write_curves_csv(std::ostream& os, const std::vector<BoundaryCurve>& curves) {
  const std::string p1 = curves.empty() ? "p1" : curves.front().first_param;
  const std::string p2 = curves.empty() ? "p2" : curves.front().second_param;
  os << "# plane: p1=" << p1 << ", p2=" << p2 << '\n';
  os << "x,p1,p2,kind\n";
  for (const auto& c : curves)
    for (const auto& s : c.samples)
      os << format_number(s.x) << ',' << format_number(s.point.x()) << ',' << format_number(s.point.y()) << ','
         << to_string(c.kind) << '\n';
}

void write_scan_csv(std::ostream& os, const ScanResult& scan) {
  os << "leg,step";
  for (const auto& name : scan.param_names) os << ',' << name;
  os << (scan.two_neuron ? ",x,y\n" : ",x\n");
  for (const auto& p : scan.points) {
    os << static_cast<int>(p.leg) << ',' << p.step;
    for (double v : p.param_values) os << ',' << format_number(v);
    os << ',' << format_number(p.state.x());
    if (scan.two_neuron) os << ',' << format_number(p.state.y());
    os << '\n';
  }
}

void write_spectrum_csv(std::ostream& os, const SpectrumResult& spectrum) {
  os << "frequency,power\n";
  for (std::size_t k = 0; k < spectrum.power.size(); ++k)
    os << format_number(spectrum.frequencies[k]) << ',' << format_number(spectrum.power[k]) << '\n';
}

namespace {

struct Series {
  std::string label;
  std::string colour;
  std::vector<std::pair<double, double>> points;
};

constexpr double kWidth = 640, kHeight = 480, kMargin = 60;

void write_svg(std::ostream& os, const std::vector<Series>& series, const std::string& title,
               const std::string& xlabel, const std::string& ylabel) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      xmin = std::min(xmin, x), xmax = std::max(xmax, x);
      ymin = std::min(ymin, y), ymax = std::max(ymax, y);
    }
  if (!(xmin <= xmax)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (xmax == xmin) xmin -= 0.5, xmax += 0.5;
  if (ymax == ymin) ymin -= 0.5, ymax += 0.5;

  const auto px = [&](double x) { return kMargin + (x - xmin) / (xmax - xmin) * (kWidth - 2 * kMargin); };
  const auto py = [&](double y) { return kHeight - kMargin - (y - ymin) / (ymax - ymin) * (kHeight - 2 * kMargin); };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << title << "</text>\n";
  os << "<g stroke=\"black\" fill=\"none\">\n";
  os << "<line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin << "\" x2=\"" << kWidth - kMargin << "\" y2=\""
     << kHeight - kMargin << "\"/>\n";
  os << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin << "\" y2=\"" << kHeight - kMargin
     << "\"/>\n</g>\n";
  os << "<g font-size=\"11\">\n";
  os << "<text x=\"" << kMargin << "\" y=\"" << kHeight - kMargin + 16 << "\">" << format_number(xmin) << "</text>\n";
  os << "<text x=\"" << kWidth - kMargin << "\" y=\"" << kHeight - kMargin + 16 << "\" text-anchor=\"end\">"
     << format_number(xmax) << "</text>\n";
  os << "<text x=\"" << kMargin - 4 << "\" y=\"" << kHeight - kMargin << "\" text-anchor=\"end\">"
     << format_number(ymin) << "</text>\n";
  os << "<text x=\"" << kMargin - 4 << "\" y=\"" << kMargin + 4 << "\" text-anchor=\"end\">" << format_number(ymax)
     << "</text>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 16 << "\" text-anchor=\"middle\">" << xlabel
     << "</text>\n";
  os << "<text x=\"16\" y=\"" << kHeight / 2 << "\" transform=\"rotate(-90 16 " << kHeight / 2
     << ")\" text-anchor=\"middle\">" << ylabel << "</text>\n</g>\n";

  for (const auto& s : series) {
    os << "<g fill=\"" << s.colour << "\"><title>" << s.label << "</title>\n";
    for (const auto& [x, y] : s.points)
      os << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"1.2\"/>\n";
    os << "</g>\n";
  }
  os << "</svg>\n";
}

constexpr std::array<const char*, 3> kPalette{"#1f77b4", "#d62728", "#2ca02c"};

}  // namespace

void write_curves_svg(std::ostream& os, const std::vector<BoundaryCurve>& curves, const std::string& title) {
  std::vector<Series> series;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    Series s{std::string(to_string(curves[i].kind)), kPalette[i % kPalette.size()], {}};
    for (const auto& smp : curves[i].samples) s.points.emplace_back(smp.point.x(), smp.point.y());
    series.push_back(std::move(s));
  }
  const std::string xl = curves.empty() ? "p1" : curves.front().first_param;
  const std::string yl = curves.empty() ? "p2" : curves.front().second_param;
  write_svg(os, series, title, xl, yl);
}

void write_scan_svg(std::ostream& os, const ScanResult& scan, const std::string& title) {
  Series up{"leg 1", kPalette[0], {}}, down{"leg 2", kPalette[1], {}};
  for (const auto& p : scan.points)
    (p.leg == Leg::first ? up : down).points.emplace_back(p.param_values.front(), p.state.x());
  write_svg(os, {up, down}, title, scan.param_names.empty() ? "param" : scan.param_names.front(), "x");
}

void write_spectrum_svg(std::ostream& os, const SpectrumResult& spectrum, const std::string& title) {
  Series s{"log10 power", kPalette[0], {}};
  for (std::size_t k = 0; k < spectrum.power.size(); ++k)
    s.points.emplace_back(spectrum.frequencies[k], std::log10(std::max(spectrum.power[k], 1e-30)));
  write_svg(os, {s}, title, "frequency", "log10 power");
}

nlohmann::json curve_json(const BoundaryCurve& curve) {
  auto arr = nlohmann::json::array();
  for (const auto& s : curve.samples)
    arr.push_back({{"x", s.x}, {curve.first_param, s.point.x()}, {curve.second_param, s.point.y()}});
  return arr;
}

nlohmann::json scan_points_json(const ScanResult& scan) {
  auto arr = nlohmann::json::array();
  for (const auto& p : scan.points) {
    nlohmann::json params = nlohmann::json::object();
    for (std::size_t i = 0; i < scan.param_names.size(); ++i) params[scan.param_names[i]] = p.param_values[i];
    nlohmann::json j{{"leg", static_cast<int>(p.leg)}, {"step", p.step}, {"params", params}, {"x", p.state.x()}};
    if (scan.two_neuron) j["y"] = p.state.y();
    arr.push_back(std::move(j));
  }
  return arr;
}

nlohmann::json hysteresis_json(const HysteresisReport& report) {
  auto windows = nlohmann::json::array();
  for (const auto& w : report.windows)
    windows.push_back({{"param_lo", w.param_lo}, {"param_hi", w.param_hi}, {"max_gap", w.max_gap}});
  return {{"windows", windows}, {"tolerance", report.tolerance}};
}

nlohmann::json oscillation_json(const OscillationReport& report) {
  auto windows = nlohmann::json::array();
  for (const auto& w : report.windows)
    windows.push_back({{"leg", static_cast<int>(w.leg)}, {"param_lo", w.param_lo}, {"param_hi", w.param_hi},
                       {"steps", w.steps}});
  return {{"windows", windows}, {"tolerance", report.tolerance}};
}

nlohmann::json spectrum_json(const SpectrumResult& spectrum, bool include_bins) {
  auto peaks = nlohmann::json::array();
  for (const auto& p : spectrum.dominant_peaks) peaks.push_back({{"frequency", p.frequency}, {"power", p.power}});
  nlohmann::json j{{"classification", std::string(to_string(spectrum.classification))},
                   {"confidence", spectrum.confidence},
                   {"heuristic", spectrum.heuristic},
                   {"dominant_peaks", peaks}};
  if (spectrum.classification == OrbitClass::periodic) j["period"] = spectrum.period;
  if (include_bins) {
    j["frequencies"] = spectrum.frequencies;
    j["power"] = spectrum.power;
  }
  return j;
}

}  // namespace neuromod
