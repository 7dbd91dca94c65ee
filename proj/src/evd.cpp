#include "gftse/evd.hpp"

#include <cmath>

#include "gftse/errors.hpp"

namespace gftse {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

FourierMatrix dft_matrix(std::size_t n) {
  if (n == 0) throw InvalidArgument("dft_matrix: need N >= 1");
  FourierMatrix f;
  f.d = CMatrix(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      // j*k reduced mod N keeps the angle small and the matrix exactly
      // symmetric in j and k.
      const std::size_t m = (j * k) % n;
      const double angle = -2.0 * kPi * static_cast<double>(m) / static_cast<double>(n);
      f.d(j, k) = std::complex<double>(std::cos(angle), std::sin(angle)) * scale;
    }
  }
  return f;
}

EvdBasis circulant_evd(const GraphTopology& topology) {
  const std::size_t n = topology.n_vertices;
  const Matrix& w = topology.shift_operator;
  if (w.rows() != n || w.cols() != n)
    throw InvalidArgument("circulant_evd: topology matrix has wrong shape");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (w(i, j) != w((i + 1) % n, (j + 1) % n))
        throw InvalidArgument("circulant_evd: shift operator is not circulant");

  EvdBasis basis;
  basis.u = dft_matrix(n).d;
  basis.lambda.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t m = 0; m < n; ++m) {
      const double c = w(0, m);
      if (c == 0.0) continue;
      const double angle =
          -2.0 * kPi * static_cast<double>((k * m) % n) / static_cast<double>(n);
      acc += c * std::complex<double>(std::cos(angle), std::sin(angle));
    }
    basis.lambda[k] = acc;
  }
  return basis;
}

double eigen_residual(const EvdBasis& basis, const Matrix& w) {
  const std::size_t n = basis.size();
  if (w.rows() != n || w.cols() != n)
    throw DimensionMismatch("eigen_residual: matrix size != basis size");
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::complex<double> wu(0.0, 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        if (w(i, j) != 0.0) wu += w(i, j) * basis.u(j, k);
      }
      acc += std::norm(wu - basis.lambda[k] * basis.u(i, k));
    }
    worst = std::max(worst, std::sqrt(acc));
  }
  return worst;
}

}  // namespace gftse
