#include <doctest.h>

#include <cmath>
#include <complex>
#include <filesystem>
#include <vector>

#include "gftse/audio.hpp"
#include "gftse/errors.hpp"
#include "gftse/evd.hpp"
#include "gftse/framing.hpp"
#include "gftse/rng.hpp"
#include "gftse/svd.hpp"
#include "gftse/topology.hpp"
#include "gftse/transforms.hpp"

using namespace gftse;
using cplx = std::complex<double>;

namespace {

FrameSequence random_frames(std::size_t count, std::size_t n, std::uint64_t seed) {
  FrameSequence seq;
  seq.frames = Matrix(count, n);
  seq.frame_len = n;
  seq.hop = n;
  seq.pad_to = n;
  seq.window.assign(n, 1.0);
  Rng rng(seed);
  for (std::size_t f = 0; f < count; ++f)
    for (std::size_t i = 0; i < n; ++i) seq.frames(f, i) = rng.uniform(-1.0, 1.0);
  return seq;
}

GraphBasis basis_for(std::size_t n, std::size_t k) {
  return svd(fixed_adjacency(build_shift_operator(n, k), AdjacencyMode::kRowNormalized));
}

}  // namespace

TEST_CASE("gft-svd forward maps psi columns to unit vectors") {
  const GraphBasis basis = basis_for(16, 3);
  FrameSequence seq = random_frames(1, 16, 0);
  const std::size_t j = 4;
  for (std::size_t i = 0; i < 16; ++i) seq.frames(0, i) = basis.psi(i, j);
  const TimeGraphSpectrum spec = gft_svd_forward(seq, basis);
  for (std::size_t k = 0; k < 16; ++k)
    CHECK(spec.data(0, k) == doctest::Approx(k == j ? 1.0 : 0.0).epsilon(1e-12));
}

TEST_CASE("unit-vector spectra invert to psi columns") {
  const GraphBasis basis = basis_for(16, 3);
  TimeGraphSpectrum spec;
  spec.basis_id = basis.basis_id;
  spec.data = Matrix(1, 16);
  spec.data(0, 7) = 1.0;
  const Matrix frame = gft_svd_inverse(spec, basis);
  for (std::size_t i = 0; i < 16; ++i)
    CHECK(frame(0, i) == doctest::Approx(basis.psi(i, 7)).epsilon(1e-14));
}

TEST_CASE("gft-svd zero frame maps to zero spectrum") {
  const GraphBasis basis = basis_for(8, 2);
  FrameSequence seq = random_frames(1, 8, 0);
  for (std::size_t i = 0; i < 8; ++i) seq.frames(0, i) = 0.0;
  const TimeGraphSpectrum spec = gft_svd_forward(seq, basis);
  for (std::size_t k = 0; k < 8; ++k) CHECK(spec.data(0, k) == 0.0);
}

TEST_CASE("gft-svd round trip, linearity, energy preservation") {
  for (std::size_t n : {8u, 64u}) {
    const GraphBasis basis = basis_for(n, 3);
    const FrameSequence seq = random_frames(20, n, n);
    const TimeGraphSpectrum spec = gft_svd_forward(seq, basis);
    const Matrix back = gft_svd_inverse(spec, basis);
    CHECK(max_abs_diff(back, seq.frames) < 1e-10);

    for (std::size_t f = 0; f < seq.num_frames(); ++f) {
      double ein = 0.0, eout = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        ein += seq.frames(f, i) * seq.frames(f, i);
        eout += spec.data(f, i) * spec.data(f, i);
      }
      CHECK(eout == doctest::Approx(ein).epsilon(1e-10));
    }

    // linearity of the inverse
    TimeGraphSpectrum xa = spec, xb = spec;
    for (std::size_t f = 0; f < n / 4; ++f)
      for (std::size_t i = 0; i < n; ++i) xb.data(f, i) *= -0.5;
    TimeGraphSpectrum combo = spec;
    for (std::size_t f = 0; f < spec.data.rows(); ++f)
      for (std::size_t i = 0; i < n; ++i)
        combo.data(f, i) = 2.0 * xa.data(f, i) + 3.0 * xb.data(f, i);
    Matrix lhs = gft_svd_inverse(combo, basis);
    Matrix ra = gft_svd_inverse(xa, basis);
    Matrix rb = gft_svd_inverse(xb, basis);
    for (std::size_t f = 0; f < lhs.rows(); ++f)
      for (std::size_t i = 0; i < n; ++i)
        CHECK(lhs(f, i) ==
              doctest::Approx(2.0 * ra(f, i) + 3.0 * rb(f, i)).epsilon(1e-12));
  }
}

TEST_CASE("spectra are rejected against foreign bases") {
  const GraphBasis b1 = basis_for(16, 3);
  const GraphBasis b2 = basis_for(16, 5);
  const FrameSequence seq = random_frames(2, 16, 1);
  const TimeGraphSpectrum spec = gft_svd_forward(seq, b1);
  CHECK_THROWS_AS(gft_svd_inverse(spec, b2), BasisMismatch);

  const FrameSequence wrong = random_frames(2, 8, 1);
  CHECK_THROWS_AS(gft_svd_forward(wrong, b1), DimensionMismatch);
}

TEST_CASE("stft impulse has a flat spectrum") {
  const FourierMatrix fourier = dft_matrix(32);
  FrameSequence seq = random_frames(1, 32, 0);
  for (std::size_t i = 0; i < 32; ++i) seq.frames(0, i) = (i == 0) ? 1.0 : 0.0;
  const ComplexSpectrum spec = stft_forward(seq, fourier);
  for (std::size_t k = 0; k < 32; ++k)
    CHECK(std::abs(spec.data(0, k) - cplx(1.0 / std::sqrt(32.0), 0.0)) < 1e-12);
}

TEST_CASE("stft pure tone occupies exactly two bins") {
  const std::size_t n = 64, k0 = 5;
  const FourierMatrix fourier = dft_matrix(n);
  FrameSequence seq = random_frames(1, n, 0);
  for (std::size_t i = 0; i < n; ++i)
    seq.frames(0, i) = std::cos(2.0 * 3.14159265358979323846 *
                                static_cast<double>(k0 * i) / static_cast<double>(n));
  const ComplexSpectrum spec = stft_forward(seq, fourier);
  for (std::size_t k = 0; k < n; ++k) {
    const double mag = std::abs(spec.data(0, k));
    if (k == k0 || k == n - k0) {
      CHECK(mag == doctest::Approx(std::sqrt(n) / 2.0).epsilon(1e-10));
    } else {
      CHECK(mag < 1e-10);
    }
  }
}

TEST_CASE("stft round trip and Parseval") {
  for (std::size_t n : {8u, 64u}) {
    const FourierMatrix fourier = dft_matrix(n);
    const FrameSequence seq = random_frames(10, n, 3 * n);
    const ComplexSpectrum spec = stft_forward(seq, fourier);
    const CMatrix back = stft_inverse(spec, fourier);
    for (std::size_t f = 0; f < seq.num_frames(); ++f) {
      double ein = 0.0, eout = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::abs(back(f, i) - cplx(seq.frames(f, i), 0.0)) < 1e-10);
        ein += seq.frames(f, i) * seq.frames(f, i);
        eout += std::norm(spec.data(f, i));
      }
      CHECK(eout == doctest::Approx(ein).epsilon(1e-10));
    }
  }
}

TEST_CASE("gft-evd spectra of real frames are Hermitian") {
  const GraphTopology topo = build_shift_operator(32, 4);
  const EvdBasis basis = circulant_evd(topo);
  const FrameSequence seq = random_frames(4, 32, 11);
  const ComplexSpectrum spec = gft_evd_forward(seq, basis);
  for (std::size_t f = 0; f < 4; ++f)
    for (std::size_t k = 0; k < 32; ++k)
      CHECK(std::abs(spec.data(f, k) - std::conj(spec.data(f, (32 - k) % 32))) < 1e-12);
}

TEST_CASE("gft-evd round trip is the identity and matches the DFT") {
  const GraphTopology topo = build_shift_operator(64, 5);
  const EvdBasis basis = circulant_evd(topo);
  const FourierMatrix fourier = dft_matrix(64);
  const FrameSequence seq = random_frames(6, 64, 17);

  // U^H x is the DFT after the documented bin permutation k -> (N-k) mod N
  const ComplexSpectrum evd_spec = gft_evd_forward(seq, basis);
  const ComplexSpectrum dft_spec = stft_forward(seq, fourier);
  for (std::size_t f = 0; f < 6; ++f)
    for (std::size_t k = 0; k < 64; ++k)
      CHECK(std::abs(evd_spec.data(f, k) - dft_spec.data(f, (64 - k) % 64)) < 1e-10);

  const CMatrix back = gft_evd_inverse(evd_spec, basis);
  for (std::size_t f = 0; f < 6; ++f)
    for (std::size_t i = 0; i < 64; ++i) {
      CHECK(std::abs(back(f, i).real() - seq.frames(f, i)) < 1e-10);
      CHECK(std::abs(back(f, i).imag()) < 1e-10);
    }
}

TEST_CASE("constant frame concentrates in the dc eigenvector") {
  const GraphTopology topo = build_shift_operator(16, 2);
  const EvdBasis basis = circulant_evd(topo);
  FrameSequence seq = random_frames(1, 16, 0);
  for (std::size_t i = 0; i < 16; ++i) seq.frames(0, i) = 1.0;
  const ComplexSpectrum spec = gft_evd_forward(seq, basis);
  CHECK(std::abs(spec.data(0, 0) - cplx(4.0, 0.0)) < 1e-12);  // sqrt(16)
  for (std::size_t k = 1; k < 16; ++k) CHECK(std::abs(spec.data(0, k)) < 1e-12);
}

TEST_CASE("learned inverse equals the exact inverse when B = psi") {
  const GraphBasis basis = basis_for(24, 3);
  const FrameSequence seq = random_frames(8, 24, 5);
  const TimeGraphSpectrum spec = gft_svd_forward(seq, basis);

  SynthesisOperator op;
  op.b = basis.psi;
  op.basis_id = basis.basis_id;
  const Matrix learned = learned_inverse_apply(op, spec);
  const Matrix exact = gft_svd_inverse(spec, basis);
  CHECK(max_abs_diff(learned, exact) == 0.0);

  SynthesisOperator zero;
  zero.b = Matrix(24, 24);
  zero.basis_id = basis.basis_id;
  const Matrix zeros = learned_inverse_apply(zero, spec);
  CHECK(max_abs(zeros) == 0.0);

  SynthesisOperator foreign = op;
  foreign.basis_id ^= 1;
  CHECK_THROWS_AS(learned_inverse_apply(foreign, spec), BasisMismatch);
}

TEST_CASE("spectrum serialization round trips") {
  const GraphBasis basis = basis_for(12, 2);
  const FrameSequence seq = random_frames(5, 12, 21);
  const TimeGraphSpectrum spec = gft_svd_forward(seq, basis);

  const auto dir = std::filesystem::temp_directory_path();
  const auto bin = (dir / "gftse_spec.bin").string();
  write_spectrum_bin(bin, spec);
  const TimeGraphSpectrum back = read_spectrum_bin(bin);
  CHECK(back.basis_id == spec.basis_id);
  CHECK(max_abs_diff(back.data, spec.data) == 0.0);

  const auto csv = (dir / "gftse_spec.csv").string();
  write_spectrum_csv(csv, spec);
  CHECK(std::filesystem::file_size(csv) > 0);
}
