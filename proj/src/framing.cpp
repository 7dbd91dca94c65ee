#include "gftse/framing.hpp"

#include <cmath>

#include "gftse/errors.hpp"

namespace gftse {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kColaTol = 1e-8;
}  // namespace

std::vector<double> make_window(WindowKind kind, std::size_t frame_len, std::size_t hop) {
  if (frame_len == 0) throw InvalidArgument("make_window: frame_len must be positive");
  if (hop == 0 || hop > frame_len)
    throw InvalidArgument("make_window: need 0 < hop <= frame_len");

  std::vector<double> w(frame_len, 1.0);
  if (kind == WindowKind::kRect) return w;

  // Periodic sqrt-Hann, then scale so the self-paired overlap sum is 1.
  for (std::size_t i = 0; i < frame_len; ++i)
    w[i] = std::sin(kPi * static_cast<double>(i) / static_cast<double>(frame_len));
  double env = 0.0;
  for (std::size_t j = 0; j * hop < frame_len; ++j) {
    const double v = w[j * hop];
    env += v * v;
  }
  if (env <= 0.0) throw InvalidArgument("make_window: degenerate overlap sum");
  const double scale = 1.0 / std::sqrt(env);
  for (double& v : w) v *= scale;
  return w;
}

FrameSequence frame_signal(const AudioBuffer& buffer, std::size_t frame_len,
                           std::size_t hop, const std::vector<double>& window,
                           std::size_t pad_to) {
  validate(buffer);
  if (frame_len == 0 || hop == 0 || hop > frame_len || frame_len > pad_to)
    throw InvalidArgument("frame_signal: need 0 < hop <= frame_len <= pad_to");
  if (window.size() != frame_len)
    throw DimensionMismatch("frame_signal: window length != frame_len");
  for (double v : window) {
    if (!(v >= 0.0)) throw InvalidArgument("frame_signal: window entries must be >= 0");
  }
  if (buffer.samples.size() < frame_len)
    throw InvalidArgument("frame_signal: buffer shorter than one frame");

  const std::size_t num_frames = (buffer.samples.size() - frame_len) / hop + 1;
  FrameSequence seq;
  seq.frames = Matrix(num_frames, pad_to);
  seq.frame_len = frame_len;
  seq.hop = hop;
  seq.pad_to = pad_to;
  seq.window = window;
  seq.sample_rate = buffer.sample_rate;
  for (std::size_t f = 0; f < num_frames; ++f) {
    double* row = seq.frames.row(f);
    const double* src = buffer.samples.data() + f * hop;
    for (std::size_t i = 0; i < frame_len; ++i) row[i] = window[i] * src[i];
  }
  return seq;
}

double cola_deviation(const std::vector<double>& analysis,
                      const std::vector<double>& synthesis, std::size_t hop) {
  if (analysis.size() != synthesis.size())
    throw DimensionMismatch("cola_deviation: window lengths differ");
  if (hop == 0 || hop > analysis.size())
    throw InvalidArgument("cola_deviation: need 0 < hop <= frame_len");
  const std::size_t len = analysis.size();
  double dev = 0.0;
  for (std::size_t n = 0; n < hop; ++n) {
    double sum = 0.0;
    for (std::size_t j = n; j < len; j += hop) sum += analysis[j] * synthesis[j];
    dev = std::max(dev, std::abs(sum - 1.0));
  }
  return dev;
}

std::pair<std::size_t, std::size_t> cola_interior(const FrameSequence& frames) {
  return {frames.frame_len - frames.hop, frames.num_frames() * frames.hop};
}

AudioBuffer overlap_add(const FrameSequence& frames,
                        const std::vector<double>& synthesis_window) {
  if (synthesis_window.size() != frames.frame_len)
    throw DimensionMismatch("overlap_add: synthesis window length != frame_len");
  const double dev = cola_deviation(frames.window, synthesis_window, frames.hop);
  if (dev > kColaTol)
    throw Error("overlap_add: window pair violates COLA (max deviation " +
                std::to_string(dev) + " > 1e-8)");

  const std::size_t num_frames = frames.num_frames();
  AudioBuffer out;
  out.sample_rate = frames.sample_rate;
  if (num_frames == 0) return out;

  out.samples.assign((num_frames - 1) * frames.hop + frames.frame_len, 0.0);
  for (std::size_t f = 0; f < num_frames; ++f) {
    const double* row = frames.frames.row(f);
    double* dst = out.samples.data() + f * frames.hop;
    for (std::size_t i = 0; i < frames.frame_len; ++i)
      dst[i] += synthesis_window[i] * row[i];
  }
  return out;
}

}  // namespace gftse
