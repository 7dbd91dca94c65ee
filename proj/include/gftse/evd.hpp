#pragma once

#include <complex>
#include <vector>

#include "gftse/matrix.hpp"
#include "gftse/topology.hpp"

namespace gftse {

// Eigendecomposition of a circulant shift operator: u's columns are the
// unitary DFT vectors (natural order k = 0..N-1), lambda[k] the matching
// eigenvalues.  The forward transform U^H x therefore equals the DFT up to
// the fixed bin permutation k -> (N - k) mod N.
struct EvdBasis {
  CMatrix u;                                 // N x N, unitary
  std::vector<std::complex<double>> lambda;  // N graph frequencies

  std::size_t size() const { return lambda.size(); }
};

// N x N matrix d(j,k) = exp(-2*pi*i*j*k/N) / sqrt(N).
struct FourierMatrix {
  CMatrix d;

  std::size_t size() const { return d.rows(); }
};

FourierMatrix dft_matrix(std::size_t n);

// Closed-form EVD of the topology's circulant W:
// lambda_k = sum_m c_m exp(-2*pi*i*k*m/N) with c = first row of W.
// Throws InvalidArgument if the matrix is not circulant.
EvdBasis circulant_evd(const GraphTopology& topology);

// max_k ||W u_k - lambda_k u_k||_2; used by tests and load-time checks.
double eigen_residual(const EvdBasis& basis, const Matrix& w);

}  // namespace gftse
