#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gftse/matrix.hpp"

namespace gftse {

// SVD factors of an adjacency matrix A: psi * diag(sigma) * gamma == A with
// orthogonal psi and gamma, and sigma sorted descending.  basis_id is a
// content hash so spectra and operators can be checked against the basis
// that produced them.
struct GraphBasis {
  Matrix psi;                 // N x N, left singular vectors (columns)
  std::vector<double> sigma;  // N, descending, >= 0
  Matrix gamma;               // N x N, right factor (rows)
  std::uint64_t basis_id = 0;

  std::size_t size() const { return sigma.size(); }
};

// One-sided Jacobi SVD with cyclic sweeps.  Deterministic: fixed sweep
// order, stable descending sort of sigma (ties keep original column order),
// and the largest-magnitude entry of every psi column is made positive.
// Convergence when every column pair satisfies
// |<g_i, g_j>| <= 1e-12 * ||g_i|| * ||g_j||; throws NumericError after 60
// sweeps without convergence.
GraphBasis svd(const Matrix& a);

// Residual helpers used by the invariant checks.
double orthogonality_residual(const Matrix& q);  // max |Q^T Q - I|
double reconstruction_residual(const GraphBasis& basis, const Matrix& a);

// Binary serialization: 8-byte magic, little-endian u64 N, then row-major
// float64 psi, sigma, gamma.  load_basis re-verifies orthogonality and the
// sigma ordering before returning.
void save_basis(const std::string& path, const GraphBasis& basis);
GraphBasis load_basis(const std::string& path);

std::uint64_t compute_basis_id(const Matrix& psi, const std::vector<double>& sigma,
                               const Matrix& gamma);

}  // namespace gftse
