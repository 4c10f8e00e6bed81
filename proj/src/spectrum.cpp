#include "neuromod/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>
#include <set>

#include <fftw3.h>

namespace neuromod {
namespace {

// fftw planning is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

struct PlanDestroy {
  void operator()(fftw_plan p) const {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(p);
  }
};

using PlanHandle = std::unique_ptr<std::remove_pointer_t<fftw_plan>, PlanDestroy>;

std::vector<std::complex<double>> real_fft(const std::vector<double>& signal) {
  const std::size_t n = signal.size();
  std::unique_ptr<double, FftwFree> in(fftw_alloc_real(n));
  std::unique_ptr<fftw_complex, FftwFree> out(fftw_alloc_complex(n / 2 + 1));
  PlanHandle plan;
  {
    std::lock_guard lock(planner_mutex());
    plan.reset(fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE));
  }
  std::copy(signal.begin(), signal.end(), in.get());
  fftw_execute(plan.get());

  std::vector<std::complex<double>> spectrum(n / 2 + 1);
  for (std::size_t k = 0; k <= n / 2; ++k) spectrum[k] = {out.get()[k][0], out.get()[k][1]};
  return spectrum;
}

bool is_power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

// Fold any frequency into [0, 0.5].
double fold_frequency(double f) {
  f -= std::floor(f);
  return f > 0.5 ? 1.0 - f : f;
}

constexpr int kLineHalfWidth = 2;  // Hann main lobe, in bins

void mark_line(std::set<std::size_t>& bins, double f, std::size_t n) {
  const auto centre = static_cast<long>(std::lround(fold_frequency(f) * static_cast<double>(n)));
  const long last = static_cast<long>(n / 2);
  for (long k = centre - kLineHalfWidth; k <= centre + kLineHalfWidth; ++k)
    if (k >= 0 && k <= last) bins.insert(static_cast<std::size_t>(k));
}

double fraction_on(const std::set<std::size_t>& bins, const std::vector<double>& power, double total) {
  double s = 0;
  for (std::size_t k : bins) s += power[k];
  return s / total;
}

std::vector<SpectralPeak> find_peaks(const std::vector<double>& power, std::size_t n, std::size_t max_peaks) {
  std::vector<std::size_t> idx;
  for (std::size_t k = 1; k + 1 < power.size(); ++k)
    if (power[k] > power[k - 1] && power[k] >= power[k + 1]) idx.push_back(k);
  if (power.size() >= 2 && power.back() > power[power.size() - 2]) idx.push_back(power.size() - 1);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return power[a] > power[b]; });
  if (idx.size() > max_peaks) idx.resize(max_peaks);

  std::vector<SpectralPeak> peaks;
  for (std::size_t k : idx) {
    double offset = 0;
    // Parabolic interpolation of log power sharpens the line position.
    if (k > 0 && k + 1 < power.size() && power[k - 1] > 0 && power[k + 1] > 0) {
      const double a = std::log(power[k - 1]), b = std::log(power[k]), c = std::log(power[k + 1]);
      const double denom = a - 2 * b + c;
      if (denom < 0) offset = std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
    }
    peaks.push_back({(static_cast<double>(k) + offset) / static_cast<double>(n), power[k]});
  }
  return peaks;
}

}  // namespace

std::string_view to_string(OrbitClass c) {
  switch (c) {
    case OrbitClass::unclassified: return "unclassified";
    case OrbitClass::fixed_point: return "fixed_point";
    case OrbitClass::periodic: return "periodic";
    case OrbitClass::quasiperiodic: return "quasiperiodic";
    case OrbitClass::broadband: return "broadband";
  }
  return "unknown";
}

SpectrumResult power_spectrum(std::span<const double> samples, std::size_t n) {
  if (!is_power_of_two(n)) throw ParameterError("spectrum length must be a power of two");
  if (samples.size() < n) throw ParameterError("fewer samples than the spectrum length");

  const auto tail = samples.last(n);
  const double mean = std::accumulate(tail.begin(), tail.end(), 0.0) / static_cast<double>(n);
  std::vector<double> windowed(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double hann = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
    windowed[i] = hann * (tail[i] - mean);
  }

  const auto dft = real_fft(windowed);
  SpectrumResult out;
  out.frequencies.resize(n / 2 + 1);
  out.power.resize(n / 2 + 1);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k <= n / 2; ++k) {
    out.frequencies[k] = static_cast<double>(k) * scale;
    const double p = std::norm(dft[k]) * scale;
    out.power[k] = (k == 0 || k == n / 2) ? p : 2.0 * p;
  }
  out.dominant_peaks = find_peaks(out.power, n, 8);
  return out;
}

void classify_spectrum(SpectrumResult& s) {
  const std::size_t n = 2 * (s.power.size() - 1);
  const double total = std::accumulate(s.power.begin(), s.power.end(), 0.0);
  s.period = 0;
  s.heuristic = false;

  if (!(total >= 1e-16 * static_cast<double>(n))) {
    s.classification = OrbitClass::fixed_point;
    s.confidence = 1.0;
    return;
  }

  for (int p = 2; p <= kMaxPeriod; ++p) {
    std::set<std::size_t> bins;
    for (int k = 0; 2 * k <= p; ++k) mark_line(bins, static_cast<double>(k) / p, n);
    const double frac = fraction_on(bins, s.power, total);
    if (frac >= 0.95) {
      s.classification = OrbitClass::periodic;
      s.period = p;
      s.confidence = frac;
      return;
    }
  }

  // Lines at |a f1 + b f2| (folded) for small integers a, b; f2 = 0 covers a
  // single generator with its harmonics.
  constexpr int kOrder = 6;
  constexpr std::size_t kGenerators = 6;
  std::vector<double> gens;
  for (const auto& pk : s.dominant_peaks) {
    if (gens.size() == kGenerators) break;
    if (pk.frequency > 0) gens.push_back(pk.frequency);
  }
  std::vector<std::pair<double, double>> candidates;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    candidates.emplace_back(gens[i], 0.0);
    for (std::size_t j = i + 1; j < gens.size(); ++j) candidates.emplace_back(gens[i], gens[j]);
  }
  double best = 0;
  for (const auto& [f1, f2] : candidates) {
    std::set<std::size_t> bins;
    for (int a = -kOrder; a <= kOrder; ++a)
      for (int b = -kOrder; b <= kOrder; ++b)
        if (std::abs(a) + std::abs(b) <= kOrder) mark_line(bins, a * f1 + b * f2, n);
    best = std::max(best, fraction_on(bins, s.power, total));
  }
  s.heuristic = true;
  if (best >= 0.9) {
    s.classification = OrbitClass::quasiperiodic;
    s.confidence = best;
  } else {
    s.classification = OrbitClass::broadband;
    s.confidence = 1.0 - best;
  }
}

SpectrumResult classify_orbit(const ModelParams& params, const State2<>& state0, std::size_t transient,
                              std::size_t n) {
  validate(params);
  if (!is_power_of_two(n)) throw ParameterError("spectrum length must be a power of two");
  std::vector<double> xs;
  if (const auto* two = std::get_if<TwoNeuronParams<>>(&params)) {
    const auto states = orbit(*two, state0, transient, n);
    xs.reserve(states.size());
    for (const auto& s : states) xs.push_back(s.x());
  } else {
    xs = orbit(std::get<SingleNeuronParams<>>(params), state0.x(), transient, n);
  }
  SpectrumResult spectrum = power_spectrum(xs, n);
  classify_spectrum(spectrum);
  return spectrum;
}

}  // namespace neuromod
