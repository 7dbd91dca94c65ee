#include "gftse/transforms.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "gftse/errors.hpp"

namespace gftse {

namespace {

constexpr char kSpectrumMagic[8] = {'G', 'F', 'T', 'S', 'P', 'E', 'C', '1'};
constexpr char kOperatorMagic[8] = {'G', 'F', 'T', 'S', 'Y', 'N', 'O', '1'};

// out(f, k) = sum_i frames(f, i) * op(i, k), optionally conjugating op.
CMatrix apply_complex(const Matrix& frames, const CMatrix& op, bool conjugate) {
  if (frames.cols() != op.rows())
    throw DimensionMismatch("transform: frame length != basis size");
  CMatrix out(frames.rows(), op.cols());
  for (std::size_t f = 0; f < frames.rows(); ++f) {
    const double* frow = frames.row(f);
    auto* orow = out.row(f);
    for (std::size_t i = 0; i < frames.cols(); ++i) {
      const double x = frow[i];
      if (x == 0.0) continue;
      const auto* oprow = op.row(i);
      for (std::size_t k = 0; k < op.cols(); ++k)
        orow[k] += x * (conjugate ? std::conj(oprow[k]) : oprow[k]);
    }
  }
  return out;
}

// out(f, i) = sum_k spec(f, k) * op(i, k), i.e. multiply by op^T.
CMatrix apply_complex_bt(const CMatrix& spec, const CMatrix& op) {
  if (spec.cols() != op.cols())
    throw DimensionMismatch("transform: spectrum width != basis size");
  CMatrix out(spec.rows(), op.rows());
  for (std::size_t f = 0; f < spec.rows(); ++f) {
    const auto* srow = spec.row(f);
    auto* orow = out.row(f);
    for (std::size_t i = 0; i < op.rows(); ++i) {
      const auto* oprow = op.row(i);
      std::complex<double> acc(0.0, 0.0);
      for (std::size_t k = 0; k < op.cols(); ++k) acc += srow[k] * oprow[k];
      orow[i] = acc;
    }
  }
  return out;
}

}  // namespace

TimeGraphSpectrum gft_svd_forward(const FrameSequence& frames, const GraphBasis& basis) {
  if (frames.pad_to != basis.size())
    throw DimensionMismatch("gft_svd_forward: pad_to != basis size");
  TimeGraphSpectrum spec;
  spec.data = matmul(frames.frames, basis.psi);  // row f = (psi^T x_f)^T
  spec.basis_id = basis.basis_id;
  return spec;
}

Matrix gft_svd_inverse(const TimeGraphSpectrum& spectrum, const GraphBasis& basis) {
  if (spectrum.basis_id != basis.basis_id)
    throw BasisMismatch("gft_svd_inverse: spectrum bound to a different basis");
  if (spectrum.data.cols() != basis.size())
    throw DimensionMismatch("gft_svd_inverse: spectrum width != basis size");
  return matmul_bt(spectrum.data, basis.psi);  // row f = (psi X_f)^T
}

ComplexSpectrum gft_evd_forward(const FrameSequence& frames, const EvdBasis& basis) {
  if (frames.pad_to != basis.size())
    throw DimensionMismatch("gft_evd_forward: pad_to != basis size");
  ComplexSpectrum spec;
  spec.data = apply_complex(frames.frames, basis.u, /*conjugate=*/true);  // U^H x
  return spec;
}

CMatrix gft_evd_inverse(const ComplexSpectrum& spectrum, const EvdBasis& basis) {
  if (spectrum.data.cols() != basis.size())
    throw DimensionMismatch("gft_evd_inverse: spectrum width != basis size");
  return apply_complex_bt(spectrum.data, basis.u);  // U X
}

ComplexSpectrum stft_forward(const FrameSequence& frames, const FourierMatrix& fourier) {
  if (frames.pad_to != fourier.size())
    throw DimensionMismatch("stft_forward: pad_to != DFT size");
  ComplexSpectrum spec;
  spec.data = apply_complex(frames.frames, fourier.d, /*conjugate=*/false);  // D x
  return spec;
}

CMatrix stft_inverse(const ComplexSpectrum& spectrum, const FourierMatrix& fourier) {
  if (spectrum.data.cols() != fourier.size())
    throw DimensionMismatch("stft_inverse: spectrum width != DFT size");
  // D is symmetric, so D^H X == conj(D) X; fold the conjugation into the
  // row product by conjugating twice: conj(conj(X) D).
  CMatrix conj_spec(spectrum.data.rows(), spectrum.data.cols());
  for (std::size_t f = 0; f < spectrum.data.rows(); ++f)
    for (std::size_t k = 0; k < spectrum.data.cols(); ++k)
      conj_spec(f, k) = std::conj(spectrum.data(f, k));
  CMatrix out = apply_complex_bt(conj_spec, fourier.d);
  for (std::size_t f = 0; f < out.rows(); ++f)
    for (std::size_t k = 0; k < out.cols(); ++k) out(f, k) = std::conj(out(f, k));
  return out;
}

Matrix learned_inverse_apply(const SynthesisOperator& op, const TimeGraphSpectrum& spectrum) {
  if (op.basis_id != spectrum.basis_id)
    throw BasisMismatch("learned_inverse_apply: operator bound to a different basis");
  if (spectrum.data.cols() != op.b.rows())
    throw DimensionMismatch("learned_inverse_apply: spectrum width != operator size");
  return matmul_bt(spectrum.data, op.b);  // row f = (B X_f)^T
}

Matrix real_part(const CMatrix& m) {
  Matrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).real();
  return out;
}

FrameSequence with_frames(const FrameSequence& like, Matrix rows) {
  if (rows.cols() != like.pad_to || rows.rows() != like.num_frames())
    throw DimensionMismatch("with_frames: replacement shape differs");
  FrameSequence seq = like;
  seq.frames = std::move(rows);
  return seq;
}

void write_spectrum_csv(const std::string& path, const TimeGraphSpectrum& spectrum) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError(IoError::Code::kUnwritablePath, "cannot write csv: " + path);
  char buf[40];
  for (std::size_t f = 0; f < spectrum.data.rows(); ++f) {
    for (std::size_t k = 0; k < spectrum.data.cols(); ++k) {
      std::snprintf(buf, sizeof(buf), "%.12g", spectrum.data(f, k));
      if (k) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

void write_spectrum_bin(const std::string& path, const TimeGraphSpectrum& spectrum) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(IoError::Code::kUnwritablePath, "cannot write spectrum: " + path);
  const std::uint64_t rows = spectrum.data.rows();
  const std::uint64_t cols = spectrum.data.cols();
  out.write(kSpectrumMagic, sizeof(kSpectrumMagic));
  out.write(reinterpret_cast<const char*>(&rows), sizeof(rows));
  out.write(reinterpret_cast<const char*>(&cols), sizeof(cols));
  out.write(reinterpret_cast<const char*>(&spectrum.basis_id), sizeof(spectrum.basis_id));
  out.write(reinterpret_cast<const char*>(spectrum.data.data()),
            static_cast<std::streamsize>(rows * cols * sizeof(double)));
  if (!out) throw IoError(IoError::Code::kUnwritablePath, "write failed: " + path);
}

TimeGraphSpectrum read_spectrum_bin(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(IoError::Code::kMissingFile, "cannot open spectrum: " + path);
  char magic[8];
  std::uint64_t rows = 0, cols = 0, basis_id = 0;
  in.read(magic, sizeof(magic));
  in.read(reinterpret_cast<char*>(&rows), sizeof(rows));
  in.read(reinterpret_cast<char*>(&cols), sizeof(cols));
  in.read(reinterpret_cast<char*>(&basis_id), sizeof(basis_id));
  if (!in || std::memcmp(magic, kSpectrumMagic, sizeof(magic)) != 0)
    throw IoError(IoError::Code::kMalformedHeader, "bad spectrum header: " + path);
  TimeGraphSpectrum spec;
  spec.basis_id = basis_id;
  spec.data = Matrix(rows, cols);
  in.read(reinterpret_cast<char*>(spec.data.data()),
          static_cast<std::streamsize>(rows * cols * sizeof(double)));
  if (!in) throw IoError(IoError::Code::kCorruptData, "truncated spectrum blob: " + path);
  return spec;
}

void save_operator(const std::string& path, const SynthesisOperator& op) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(IoError::Code::kUnwritablePath, "cannot write operator: " + path);
  const std::uint64_t n = op.b.rows();
  out.write(kOperatorMagic, sizeof(kOperatorMagic));
  out.write(reinterpret_cast<const char*>(&n), sizeof(n));
  out.write(reinterpret_cast<const char*>(&op.basis_id), sizeof(op.basis_id));
  out.write(reinterpret_cast<const char*>(op.b.data()),
            static_cast<std::streamsize>(n * n * sizeof(double)));
  if (!out) throw IoError(IoError::Code::kUnwritablePath, "write failed: " + path);
}

SynthesisOperator load_operator(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(IoError::Code::kMissingFile, "cannot open operator: " + path);
  char magic[8];
  std::uint64_t n = 0, basis_id = 0;
  in.read(magic, sizeof(magic));
  in.read(reinterpret_cast<char*>(&n), sizeof(n));
  in.read(reinterpret_cast<char*>(&basis_id), sizeof(basis_id));
  if (!in || std::memcmp(magic, kOperatorMagic, sizeof(magic)) != 0)
    throw IoError(IoError::Code::kMalformedHeader, "bad operator header: " + path);
  SynthesisOperator op;
  op.basis_id = basis_id;
  op.b = Matrix(n, n);
  in.read(reinterpret_cast<char*>(op.b.data()),
          static_cast<std::streamsize>(n * n * sizeof(double)));
  if (!in) throw IoError(IoError::Code::kCorruptData, "truncated operator blob: " + path);
  if (!op.b.all_finite())
    throw IoError(IoError::Code::kCorruptData, "non-finite operator entries: " + path);
  return op;
}

}  // namespace gftse
