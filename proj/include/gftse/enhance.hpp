#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gftse/audio.hpp"
#include "gftse/evd.hpp"
#include "gftse/framing.hpp"
#include "gftse/svd.hpp"
#include "gftse/topology.hpp"
#include "gftse/transforms.hpp"

namespace gftse {

// Elementwise spectral gain, clamped to [clamp_lo, clamp_hi].
struct Mask {
  Matrix data;  // num_frames x N
  double clamp_lo = -10.0;
  double clamp_hi = 10.0;
};

// Oracle ideal ratio mask on real graph spectra:
// M = clamp(S_G / (X_G + eps*sgn(X_G))), eps = 1e-8, sgn(0) = +1.
// Graph spectra are real and signed, hence the symmetric clamp.
Mask ideal_graph_mask(const TimeGraphSpectrum& clean, const TimeGraphSpectrum& noisy,
                      double clamp_lo = -10.0, double clamp_hi = 10.0);

// Magnitude-ratio oracle for complex spectra; the mask is real and applied
// to the complex noisy spectrum, so the noisy phase is retained.
Mask ideal_magnitude_mask(const ComplexSpectrum& clean, const ComplexSpectrum& noisy,
                          double clamp_lo = -10.0, double clamp_hi = 10.0);

TimeGraphSpectrum apply_mask(const Mask& mask, const TimeGraphSpectrum& noisy);
ComplexSpectrum apply_mask(const Mask& mask, const ComplexSpectrum& noisy);

struct MetricsReport {
  double si_sdr_noisy = 0.0;
  double si_sdr_enhanced = 0.0;
  double si_sdr_improvement = 0.0;  // enhanced - noisy
  double seg_snr_enhanced = 0.0;
  std::size_t num_frames = 0;

  std::string to_json() const;
};

// SI-SDR of enhanced and noisy against clean plus segmental SNR of the
// enhanced signal (32 ms non-overlapping segments, per-segment SNR clamped
// to [-10, 35] dB before averaging).  Lengths and rates must match.
MetricsReport evaluate(const AudioBuffer& enhanced, const AudioBuffer& clean,
                       const AudioBuffer& noisy);

enum class TransformKind { kStft, kGftEvd, kGftSvd, kGftSvdLearned };

std::string transform_name(TransformKind kind);
TransformKind parse_transform(const std::string& name);

// Everything enhance() needs besides the waveforms.  Basis pointers must
// outlive the call; only the ones the selected transform uses are read.
struct EnhanceOptions {
  TransformKind transform = TransformKind::kGftSvd;
  std::size_t frame_len = 400;
  std::size_t hop = 100;
  std::size_t pad_to = 512;
  WindowKind window = WindowKind::kSqrtHannCola;
  double mask_lo = -10.0;
  double mask_hi = 10.0;
  const GraphBasis* basis = nullptr;             // kGftSvd, kGftSvdLearned
  const EvdBasis* evd = nullptr;                 // kGftEvd
  const FourierMatrix* fourier = nullptr;        // kStft
  const SynthesisOperator* synthesis = nullptr;  // kGftSvdLearned
};

// Oracle-mask pipeline: frame -> forward transform -> ideal mask from the
// clean signal -> inverse (exact or learned) -> overlap-add.  Metrics are
// computed on the fully-overlapped interior of the reconstruction.
std::pair<AudioBuffer, MetricsReport> enhance(const AudioBuffer& noisy,
                                              const AudioBuffer& clean,
                                              const EnhanceOptions& options);

struct Mixture {
  AudioBuffer clean;
  AudioBuffer noisy;
};

// Seeded fixture set: alternating sine/chirp clean signals mixed with white
// noise at snr_db.  Pure function of its arguments.
std::vector<Mixture> make_mixture_set(std::uint64_t seed, std::size_t count,
                                      double duration_s, double sample_rate,
                                      double snr_db);

struct ReportRow {
  std::string transform;
  double p = 0.0;
  std::size_t k = 0;
  double si_sdr_noisy = 0.0;
  double si_sdr_enhanced = 0.0;
  double improvement = 0.0;
  double seg_snr = 0.0;
};

struct ReportTable {
  std::vector<ReportRow> rows;

  std::string to_csv() const;
  std::string to_json() const;
};

struct SweepOptions {
  std::size_t frame_len = 400;
  std::size_t hop = 100;
  std::size_t pad_to = 512;
  WindowKind window = WindowKind::kSqrtHannCola;
  double mask_lo = -10.0;
  double mask_hi = 10.0;
  double ridge = 1e-6;  // least-squares synthesis training, kGftSvdLearned
  std::size_t jobs = 1;
};

// One row per (transform, p), fields averaged over the mixture set.  Rows
// are ordered by the input transform list, then by the sparsity list.
ReportTable compare_transforms(const std::vector<Mixture>& mixtures,
                               const std::vector<double>& sparsity_list,
                               const std::vector<TransformKind>& transforms,
                               const SweepOptions& options);

}  // namespace gftse
