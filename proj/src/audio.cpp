#include "gftse/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "gftse/errors.hpp"
#include "gftse/rng.hpp"

namespace gftse {

namespace {

constexpr double kPi = 3.14159265358979323846;

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatIeeeFloat = 0x0003;

template <typename T>
T read_le(const unsigned char* p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  return v;  // little-endian host assumed, as in the file format
}

template <typename T>
void append_le(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

std::vector<unsigned char> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(IoError::Code::kMissingFile, "cannot open wav file: " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  return bytes;
}

}  // namespace

void validate(const AudioBuffer& buffer) {
  if (!(buffer.sample_rate > 0.0))
    throw InvalidArgument("audio buffer: sample_rate must be positive");
  for (double v : buffer.samples) {
    if (!std::isfinite(v)) throw InvalidArgument("audio buffer: non-finite sample");
  }
}

AudioBuffer read_wav(const std::string& path) {
  const auto bytes = slurp(path);
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw IoError(IoError::Code::kMalformedHeader, "not a RIFF/WAVE file: " + path);

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t sample_rate = 0;
  bool have_fmt = false;
  const unsigned char* data = nullptr;
  std::uint32_t data_size = 0;
  bool have_data = false;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::uint32_t chunk_size = read_le<std::uint32_t>(chunk + 4);
    const std::size_t body = pos + 8;
    if (body + chunk_size > bytes.size())
      throw IoError(IoError::Code::kMalformedHeader, "truncated chunk in " + path);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (chunk_size < 16)
        throw IoError(IoError::Code::kMalformedHeader, "short fmt chunk in " + path);
      format = read_le<std::uint16_t>(bytes.data() + body);
      channels = read_le<std::uint16_t>(bytes.data() + body + 2);
      sample_rate = read_le<std::uint32_t>(bytes.data() + body + 4);
      bits = read_le<std::uint16_t>(bytes.data() + body + 14);
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_size = chunk_size;
      have_data = true;
    }
    pos = body + chunk_size + (chunk_size & 1);  // chunks are word-aligned
  }

  if (!have_fmt || !have_data)
    throw IoError(IoError::Code::kMalformedHeader, "missing fmt or data chunk in " + path);
  if (channels == 0 || sample_rate == 0)
    throw IoError(IoError::Code::kMalformedHeader, "bad fmt fields in " + path);

  const bool pcm16 = format == kFormatPcm && bits == 16;
  const bool f32 = format == kFormatIeeeFloat && bits == 32;
  if (!pcm16 && !f32)
    throw IoError(IoError::Code::kUnsupportedCodec,
                  "unsupported wav codec (fmt=" + std::to_string(format) +
                      ", bits=" + std::to_string(bits) + ") in " + path);

  const std::size_t bytes_per_sample = pcm16 ? 2 : 4;
  const std::size_t stride = bytes_per_sample * channels;
  if (stride == 0 || data_size % stride != 0)
    throw IoError(IoError::Code::kMalformedHeader, "data chunk not frame-aligned in " + path);
  const std::size_t num_frames = data_size / stride;

  AudioBuffer out;
  out.sample_rate = static_cast<double>(sample_rate);
  out.samples.resize(num_frames);
  for (std::size_t i = 0; i < num_frames; ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
      const unsigned char* p = data + i * stride + c * bytes_per_sample;
      if (pcm16) {
        acc += static_cast<double>(read_le<std::int16_t>(p)) / 32768.0;
      } else {
        acc += static_cast<double>(read_le<float>(p));
      }
    }
    out.samples[i] = acc / channels;
  }
  return out;
}

void write_wav(const std::string& path, const AudioBuffer& buffer, WavFormat format) {
  validate(buffer);
  const bool pcm16 = format == WavFormat::kPcm16;
  const std::uint32_t n = static_cast<std::uint32_t>(buffer.samples.size());
  const std::uint16_t bytes_per_sample = pcm16 ? 2 : 4;
  const std::uint32_t data_size = n * bytes_per_sample;
  const std::uint32_t rate = static_cast<std::uint32_t>(std::lround(buffer.sample_rate));

  std::string blob;
  blob.reserve(44 + data_size);
  blob.append("RIFF");
  append_le<std::uint32_t>(blob, 36 + data_size);
  blob.append("WAVE");
  blob.append("fmt ");
  append_le<std::uint32_t>(blob, 16);
  append_le<std::uint16_t>(blob, pcm16 ? kFormatPcm : kFormatIeeeFloat);
  append_le<std::uint16_t>(blob, 1);  // mono
  append_le<std::uint32_t>(blob, rate);
  append_le<std::uint32_t>(blob, rate * bytes_per_sample);
  append_le<std::uint16_t>(blob, bytes_per_sample);
  append_le<std::uint16_t>(blob, static_cast<std::uint16_t>(8 * bytes_per_sample));
  blob.append("data");
  append_le<std::uint32_t>(blob, data_size);

  for (double v : buffer.samples) {
    if (pcm16) {
      const double clamped = std::clamp(v, -1.0, 32767.0 / 32768.0);
      append_le<std::int16_t>(blob, static_cast<std::int16_t>(std::lround(clamped * 32768.0)));
    } else {
      append_le<float>(blob, static_cast<float>(v));
    }
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(IoError::Code::kUnwritablePath, "cannot write wav file: " + path);
  out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
  if (!out) throw IoError(IoError::Code::kUnwritablePath, "write failed: " + path);
}

AudioBuffer synth_signal(SignalKind kind, double duration_s, double sample_rate,
                         std::uint64_t seed, const SynthParams& params) {
  if (!(duration_s > 0.0)) throw InvalidArgument("synth_signal: duration must be positive");
  if (!(sample_rate > 0.0)) throw InvalidArgument("synth_signal: sample_rate must be positive");

  const std::size_t n = static_cast<std::size_t>(std::llround(duration_s * sample_rate));
  AudioBuffer out;
  out.sample_rate = sample_rate;
  out.samples.resize(n);

  switch (kind) {
    case SignalKind::kSine:
      for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / sample_rate;
        out.samples[i] = std::sin(2.0 * kPi * params.frequency_hz * t);
      }
      break;
    case SignalKind::kChirp: {
      const double rate = (params.end_hz - params.start_hz) / duration_s;
      for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / sample_rate;
        out.samples[i] = std::sin(2.0 * kPi * (params.start_hz * t + 0.5 * rate * t * t));
      }
      break;
    }
    case SignalKind::kWhiteNoise: {
      Rng rng(seed);
      for (std::size_t i = 0; i < n; ++i) out.samples[i] = rng.uniform(-1.0, 1.0);
      break;
    }
  }

  double peak = 0.0;
  for (double v : out.samples) peak = std::max(peak, std::abs(v));
  if (peak > 1e-30) {
    const double gain = 0.5 / peak;
    for (double& v : out.samples) v *= gain;
  }
  return out;
}

std::pair<AudioBuffer, double> mix_at_snr(const AudioBuffer& clean,
                                          const AudioBuffer& noise, double snr_db) {
  if (clean.sample_rate != noise.sample_rate)
    throw InvalidArgument("mix_at_snr: sample rates differ");
  if (noise.samples.size() < clean.samples.size())
    throw InvalidArgument("mix_at_snr: noise shorter than clean");
  const std::size_t n = clean.samples.size();
  if (n == 0) throw InvalidArgument("mix_at_snr: empty clean signal");

  double p_clean = 0.0, p_noise = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    p_clean += clean.samples[i] * clean.samples[i];
    p_noise += noise.samples[i] * noise.samples[i];
  }
  if (p_clean <= 0.0) throw InvalidArgument("mix_at_snr: clean signal has zero power");
  if (p_noise <= 0.0) throw InvalidArgument("mix_at_snr: noise has zero power");

  double gain = 0.0;
  if (snr_db < kSnrClean) {
    gain = std::sqrt(p_clean / (p_noise * std::pow(10.0, snr_db / 10.0)));
  }

  AudioBuffer noisy;
  noisy.sample_rate = clean.sample_rate;
  noisy.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    noisy.samples[i] = clean.samples[i] + gain * noise.samples[i];
  return {std::move(noisy), gain};
}

}  // namespace gftse
