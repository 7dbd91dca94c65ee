#pragma once

#include <cstddef>
#include <vector>

#include "gftse/audio.hpp"
#include "gftse/matrix.hpp"

namespace gftse {

enum class WindowKind { kRect, kSqrtHannCola };

// Analysis/synthesis window factory.  kSqrtHannCola is the periodic
// sqrt-Hann shape scaled so that the analysis*synthesis overlap sum at the
// given hop is exactly 1; the identical vector serves both sides.  kRect is
// all ones (unit overlap sum only when hop == frame_len).
std::vector<double> make_window(WindowKind kind, std::size_t frame_len, std::size_t hop);

// Windowed frames of a signal, zero-padded on the right to pad_to columns.
struct FrameSequence {
  Matrix frames;  // num_frames x pad_to
  std::size_t frame_len = 0;
  std::size_t hop = 0;
  std::size_t pad_to = 0;
  std::vector<double> window;  // analysis window, length frame_len
  double sample_rate = 16000.0;

  std::size_t num_frames() const { return frames.rows(); }
};

// Slices `buffer` into floor((len - frame_len)/hop) + 1 frames, multiplies
// each by `window` and zero-pads to pad_to.
FrameSequence frame_signal(const AudioBuffer& buffer, std::size_t frame_len,
                           std::size_t hop, const std::vector<double>& window,
                           std::size_t pad_to);

// Weighted overlap-add reconstruction.  Requires the analysis/synthesis
// window pair to satisfy unit constant-overlap-add at the sequence's hop
// (checked to 1e-8, Error otherwise).  Output length is
// (num_frames-1)*hop + frame_len; only the interior [frame_len - hop,
// num_frames*hop) has full overlap coverage and reconstructs exactly.
AudioBuffer overlap_add(const FrameSequence& frames,
                        const std::vector<double>& synthesis_window);

// max_n |sum_m (wa*ws)[n - m*hop] - 1| over the periodic tiling.
double cola_deviation(const std::vector<double>& analysis,
                      const std::vector<double>& synthesis, std::size_t hop);

// First/one-past-last sample indices of the fully-overlapped interior.
std::pair<std::size_t, std::size_t> cola_interior(const FrameSequence& frames);

}  // namespace gftse
