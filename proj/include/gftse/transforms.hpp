#pragma once

#include <cstdint>
#include <string>

#include "gftse/evd.hpp"
#include "gftse/framing.hpp"
#include "gftse/matrix.hpp"
#include "gftse/svd.hpp"

namespace gftse {

// Real-valued per-frame graph spectrum (rows = frames, cols = graph
// frequencies), tied to the basis that produced it.
struct TimeGraphSpectrum {
  Matrix data;  // num_frames x N
  std::uint64_t basis_id = 0;
};

// Complex per-frame spectrum (STFT or GFT-EVD).
struct ComplexSpectrum {
  CMatrix data;  // num_frames x N
};

// Learned N x N linear decoder standing in for the analytic inverse basis.
struct SynthesisOperator {
  Matrix b;  // N x N
  std::uint64_t basis_id = 0;
};

// X row = psi^T * frame.  Requires frames.pad_to == basis size.
TimeGraphSpectrum gft_svd_forward(const FrameSequence& frames, const GraphBasis& basis);
// frame row = psi * X row.  Requires matching basis_id.
Matrix gft_svd_inverse(const TimeGraphSpectrum& spectrum, const GraphBasis& basis);

ComplexSpectrum gft_evd_forward(const FrameSequence& frames, const EvdBasis& basis);
CMatrix gft_evd_inverse(const ComplexSpectrum& spectrum, const EvdBasis& basis);

ComplexSpectrum stft_forward(const FrameSequence& frames, const FourierMatrix& fourier);
CMatrix stft_inverse(const ComplexSpectrum& spectrum, const FourierMatrix& fourier);

// frame row = B * spectrum row.  Requires op.basis_id == spectrum.basis_id.
Matrix learned_inverse_apply(const SynthesisOperator& op, const TimeGraphSpectrum& spectrum);

// Drops imaginary parts (inverse of a conjugate-symmetric spectrum is real
// up to rounding) so complex pipelines can feed overlap_add.
Matrix real_part(const CMatrix& m);

// Replaces the frame payload of `like` with `rows`, keeping framing metadata.
FrameSequence with_frames(const FrameSequence& like, Matrix rows);

// Inspection and round-trip formats: CSV with 12 significant digits, and a
// raw float64 row-major blob with a small header.
void write_spectrum_csv(const std::string& path, const TimeGraphSpectrum& spectrum);
void write_spectrum_bin(const std::string& path, const TimeGraphSpectrum& spectrum);
TimeGraphSpectrum read_spectrum_bin(const std::string& path);

// Synthesis operator blob: magic, N, basis_id, row-major float64 B.
void save_operator(const std::string& path, const SynthesisOperator& op);
SynthesisOperator load_operator(const std::string& path);

}  // namespace gftse
