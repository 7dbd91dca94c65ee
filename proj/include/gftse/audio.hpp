#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace gftse {

// Mono waveform plus its sample rate.  Samples are dimensionless amplitudes,
// nominally in [-1, 1].  Buffers are immutable by convention once built.
struct AudioBuffer {
  std::vector<double> samples;
  double sample_rate = 16000.0;

  std::size_t size() const { return samples.size(); }
  double duration() const { return static_cast<double>(samples.size()) / sample_rate; }
};

// Throws InvalidArgument if the buffer violates its invariants
// (non-positive rate or non-finite samples).
void validate(const AudioBuffer& buffer);

enum class WavFormat { kPcm16, kFloat32 };

// Reads a RIFF/WAVE file.  PCM-16 and IEEE float-32 are accepted; anything
// else raises IoError with Code::kUnsupportedCodec.  Multichannel data is
// downmixed by channel mean; PCM-16 samples are scaled by 1/32768.
AudioBuffer read_wav(const std::string& path);

// Writes a mono RIFF/WAVE file.  kPcm16 clamps to [-1, 32767/32768] before
// quantizing; kFloat32 stores IEEE single precision.
void write_wav(const std::string& path, const AudioBuffer& buffer, WavFormat format);

enum class SignalKind { kSine, kChirp, kWhiteNoise };

struct SynthParams {
  double frequency_hz = 440.0;  // sine
  double start_hz = 100.0;      // chirp
  double end_hz = 4000.0;       // chirp
};

// Deterministic test-fixture generator.  Output is peak-normalized to 0.5
// and depends only on (kind, params, seed).
AudioBuffer synth_signal(SignalKind kind, double duration_s, double sample_rate,
                         std::uint64_t seed, const SynthParams& params = {});

// +inf snr sentinel: gain 0, noisy == clean.
inline constexpr double kSnrClean = 1e30;

// Scales `noise` so that 10*log10(P_clean / P_scaled_noise) == snr_db and
// returns (clean + gain*noise, gain).  Noise longer than clean is truncated.
std::pair<AudioBuffer, double> mix_at_snr(const AudioBuffer& clean,
                                          const AudioBuffer& noise, double snr_db);

}  // namespace gftse
