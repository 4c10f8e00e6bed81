#ifndef NEUROMOD_OUTPUT_HPP
#define NEUROMOD_OUTPUT_HPP

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "neuromod/bifurcation.hpp"
#include "neuromod/spectrum.hpp"
#include "neuromod/stability_curves.hpp"

namespace neuromod {

/// Shortest decimal text that parses back to the same double.
std::string format_number(double v);

// CSV writers. Curve files carry a "# plane:" comment naming p1/p2.
void write_curves_csv(std::ostream& os, const std::vector<BoundaryCurve>& curves);
void write_scan_csv(std::ostream& os, const ScanResult& scan);
void write_spectrum_csv(std::ostream& os, const SpectrumResult& spectrum);

// Minimal SVG scatter plots: one <circle> per CSV data row.
void write_curves_svg(std::ostream& os, const std::vector<BoundaryCurve>& curves, const std::string& title);
void write_scan_svg(std::ostream& os, const ScanResult& scan, const std::string& title);
void write_spectrum_svg(std::ostream& os, const SpectrumResult& spectrum, const std::string& title);

// JSON views shared by scenario output and the HTTP service.
nlohmann::json curve_json(const BoundaryCurve& curve);
nlohmann::json scan_points_json(const ScanResult& scan);
nlohmann::json hysteresis_json(const HysteresisReport& report);
nlohmann::json oscillation_json(const OscillationReport& report);
nlohmann::json spectrum_json(const SpectrumResult& spectrum, bool include_bins);

}  // namespace neuromod

#endif  // NEUROMOD_OUTPUT_HPP
