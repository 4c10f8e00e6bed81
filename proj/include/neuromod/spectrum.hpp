#ifndef NEUROMOD_SPECTRUM_HPP
#define NEUROMOD_SPECTRUM_HPP

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "neuromod/maps.hpp"

namespace neuromod {

enum class OrbitClass { unclassified, fixed_point, periodic, quasiperiodic, broadband };

std::string_view to_string(OrbitClass c);

struct SpectralPeak {
  double frequency;  // cycles per iteration
  double power;
};

struct SpectrumResult {
  std::vector<double> frequencies;  // k / n, k = 0 .. n/2
  std::vector<double> power;        // one-sided; sums to the windowed signal energy
  std::vector<SpectralPeak> dominant_peaks;
  OrbitClass classification = OrbitClass::unclassified;
  int period = 0;            // set for OrbitClass::periodic
  double confidence = 0.0;   // fraction of power explained by the chosen model
  bool heuristic = false;    // quasiperiodic/broadband labels are heuristic
};

inline constexpr std::size_t kDefaultSpectrumLength = 4096;
inline constexpr std::size_t kDefaultTransient = 1000;
inline constexpr int kMaxPeriod = 32;

/// Hann-windowed periodogram of the last n samples after removing their mean.
/// Throws ParameterError unless n is a power of two no larger than the
/// sample count.
SpectrumResult power_spectrum(std::span<const double> samples, std::size_t n = kDefaultSpectrumLength);

/// Labels a spectrum:
///  - fixed_point   total power < 1e-16 n
///  - periodic(p)   >= 95% of power on harmonics of 1/p, smallest p <= 32
///  - quasiperiodic >= 90% of power on integer combinations of at most two
///                  incommensurate generator frequencies
///  - broadband     otherwise
void classify_spectrum(SpectrumResult& spectrum);

/// Runs the orbit from `state0` (x only for the single neuron), then
/// classifies the x-component spectrum.
SpectrumResult classify_orbit(const ModelParams& params, const State2<>& state0,
                              std::size_t transient = kDefaultTransient, std::size_t n = kDefaultSpectrumLength);

}  // namespace neuromod

#endif  // NEUROMOD_SPECTRUM_HPP
