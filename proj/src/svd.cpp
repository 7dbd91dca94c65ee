#include "gftse/svd.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>

#include "gftse/errors.hpp"
#include "gftse/rng.hpp"

namespace gftse {

namespace {

constexpr double kRotationTol = 1e-12;
constexpr int kMaxSweeps = 60;
constexpr char kBasisMagic[8] = {'G', 'F', 'T', 'B', 'A', 'S', 'I', '1'};

// Deterministic orthonormal completion for null-space columns: pick the
// canonical basis vector with the largest residual against the columns
// already placed, then re-orthogonalize once.
void complete_column(std::vector<double>& u, std::size_t n, std::size_t col,
                     const std::vector<std::size_t>& placed) {
  double best_norm = -1.0;
  std::vector<double> cand(n), best_vec(n);
  for (std::size_t e = 0; e < n; ++e) {
    std::fill(cand.begin(), cand.end(), 0.0);
    cand[e] = 1.0;
    for (std::size_t j : placed) {
      const double* uj = &u[j * n];
      double proj = uj[e];
      for (std::size_t i = 0; i < n; ++i) cand[i] -= proj * uj[i];
    }
    double norm2 = 0.0;
    for (double v : cand) norm2 += v * v;
    if (norm2 > best_norm) {
      best_norm = norm2;
      best_vec = cand;
    }
  }
  // second Gram-Schmidt pass for orthogonality at the 1e-12 level
  for (std::size_t j : placed) {
    const double* uj = &u[j * n];
    double proj = 0.0;
    for (std::size_t i = 0; i < n; ++i) proj += uj[i] * best_vec[i];
    for (std::size_t i = 0; i < n; ++i) best_vec[i] -= proj * uj[i];
  }
  double norm = 0.0;
  for (double v : best_vec) norm += v * v;
  norm = std::sqrt(norm);
  if (norm <= 0.0) throw NumericError("svd: failed to complete orthonormal basis");
  double* dst = &u[col * n];
  for (std::size_t i = 0; i < n; ++i) dst[i] = best_vec[i] / norm;
}

}  // namespace

GraphBasis svd(const Matrix& a) {
  const std::size_t n = a.rows();
  if (n == 0 || a.cols() != n) throw InvalidArgument("svd: expected a square matrix");
  if (!a.all_finite()) throw InvalidArgument("svd: non-finite input");

  // column-major working copies: g = A * V, v accumulates rotations
  std::vector<double> g(n * n), v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g[j * n + i] = a(i, j);
  for (std::size_t j = 0; j < n; ++j) v[j * n + j] = 1.0;

  bool converged = (n == 1);
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    converged = true;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double* gp = &g[p * n];
        double* gq = &g[q * n];
        double app = 0.0, aqq = 0.0, apq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          app += gp[i] * gp[i];
          aqq += gq[i] * gq[i];
          apq += gp[i] * gq[i];
        }
        if (std::abs(apq) <= kRotationTol * std::sqrt(app * aqq)) continue;
        converged = false;

        const double zeta = (aqq - app) / (2.0 * apq);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;

        for (std::size_t i = 0; i < n; ++i) {
          const double gpi = gp[i], gqi = gq[i];
          gp[i] = c * gpi - s * gqi;
          gq[i] = s * gpi + c * gqi;
        }
        double* vp = &v[p * n];
        double* vq = &v[q * n];
        for (std::size_t i = 0; i < n; ++i) {
          const double vpi = vp[i], vqi = vq[i];
          vp[i] = c * vpi - s * vqi;
          vq[i] = s * vpi + c * vqi;
        }
      }
    }
  }
  if (!converged) throw NumericError("svd: no convergence within 60 Jacobi sweeps");

  std::vector<double> norms(n);
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    const double* gj = &g[j * n];
    for (std::size_t i = 0; i < n; ++i) acc += gj[i] * gj[i];
    norms[j] = std::sqrt(acc);
  }
  const double sigma_max = n ? *std::max_element(norms.begin(), norms.end()) : 0.0;
  const double null_tol =
      static_cast<double>(n) * std::numeric_limits<double>::epsilon() * sigma_max;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });

  GraphBasis basis;
  basis.sigma.resize(n);
  std::vector<double> u(n * n, 0.0);   // column-major
  std::vector<double> vt(n * n, 0.0);  // gamma, row-major == V column dump

  std::vector<std::size_t> placed;
  placed.reserve(n);
  std::vector<std::size_t> null_cols;
  for (std::size_t slot = 0; slot < n; ++slot) {
    const std::size_t src = order[slot];
    const double* vcol = &v[src * n];
    for (std::size_t i = 0; i < n; ++i) vt[slot * n + i] = vcol[i];
    if (norms[src] > null_tol) {
      basis.sigma[slot] = norms[src];
      const double* gj = &g[src * n];
      double* uj = &u[slot * n];
      for (std::size_t i = 0; i < n; ++i) uj[i] = gj[i] / norms[src];
      placed.push_back(slot);
    } else {
      basis.sigma[slot] = 0.0;
      null_cols.push_back(slot);
    }
  }
  for (std::size_t slot : null_cols) {
    complete_column(u, n, slot, placed);
    placed.push_back(slot);
  }

  // Sign convention: first largest-magnitude entry of each left singular
  // vector is positive; the matching gamma row is flipped with it.
  for (std::size_t j = 0; j < n; ++j) {
    double* uj = &u[j * n];
    std::size_t arg = 0;
    double mag = std::abs(uj[0]);
    for (std::size_t i = 1; i < n; ++i) {
      if (std::abs(uj[i]) > mag) {
        mag = std::abs(uj[i]);
        arg = i;
      }
    }
    if (uj[arg] < 0.0) {
      for (std::size_t i = 0; i < n; ++i) uj[i] = -uj[i];
      for (std::size_t i = 0; i < n; ++i) vt[j * n + i] = -vt[j * n + i];
    }
  }

  basis.psi = Matrix(n, n);
  basis.gamma = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      basis.psi(i, j) = u[j * n + i];
      basis.gamma(i, j) = vt[i * n + j];
    }
  basis.basis_id = compute_basis_id(basis.psi, basis.sigma, basis.gamma);
  return basis;
}

double orthogonality_residual(const Matrix& q) {
  const std::size_t n = q.rows();
  Matrix qtq = matmul(transpose(q), q);
  double res = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      res = std::max(res, std::abs(qtq(i, j) - (i == j ? 1.0 : 0.0)));
  return res;
}

double reconstruction_residual(const GraphBasis& basis, const Matrix& a) {
  const std::size_t n = basis.size();
  Matrix scaled = basis.gamma;
  for (std::size_t i = 0; i < n; ++i) {
    double* row = scaled.row(i);
    for (std::size_t j = 0; j < n; ++j) row[j] *= basis.sigma[i];
  }
  return max_abs_diff(matmul(basis.psi, scaled), a);
}

std::uint64_t compute_basis_id(const Matrix& psi, const std::vector<double>& sigma,
                               const Matrix& gamma) {
  std::uint64_t h = fnv1a(psi.data(), psi.rows() * psi.cols() * sizeof(double));
  h = fnv1a(sigma.data(), sigma.size() * sizeof(double), h);
  h = fnv1a(gamma.data(), gamma.rows() * gamma.cols() * sizeof(double), h);
  const std::uint64_t n = sigma.size();
  return fnv1a(&n, sizeof(n), h);
}

void save_basis(const std::string& path, const GraphBasis& basis) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(IoError::Code::kUnwritablePath, "cannot write basis: " + path);
  const std::uint64_t n = basis.size();
  out.write(kBasisMagic, sizeof(kBasisMagic));
  out.write(reinterpret_cast<const char*>(&n), sizeof(n));
  out.write(reinterpret_cast<const char*>(basis.psi.data()),
            static_cast<std::streamsize>(n * n * sizeof(double)));
  out.write(reinterpret_cast<const char*>(basis.sigma.data()),
            static_cast<std::streamsize>(n * sizeof(double)));
  out.write(reinterpret_cast<const char*>(basis.gamma.data()),
            static_cast<std::streamsize>(n * n * sizeof(double)));
  if (!out) throw IoError(IoError::Code::kUnwritablePath, "write failed: " + path);
}

GraphBasis load_basis(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(IoError::Code::kMissingFile, "cannot open basis: " + path);
  char magic[8];
  std::uint64_t n = 0;
  in.read(magic, sizeof(magic));
  in.read(reinterpret_cast<char*>(&n), sizeof(n));
  if (!in || std::memcmp(magic, kBasisMagic, sizeof(magic)) != 0)
    throw IoError(IoError::Code::kMalformedHeader, "bad basis header: " + path);
  if (n == 0 || n > (1u << 20))
    throw IoError(IoError::Code::kMalformedHeader, "implausible basis size: " + path);

  GraphBasis basis;
  basis.psi = Matrix(n, n);
  basis.sigma.resize(n);
  basis.gamma = Matrix(n, n);
  in.read(reinterpret_cast<char*>(basis.psi.data()),
          static_cast<std::streamsize>(n * n * sizeof(double)));
  in.read(reinterpret_cast<char*>(basis.sigma.data()),
          static_cast<std::streamsize>(n * sizeof(double)));
  in.read(reinterpret_cast<char*>(basis.gamma.data()),
          static_cast<std::streamsize>(n * n * sizeof(double)));
  if (!in) throw IoError(IoError::Code::kCorruptData, "truncated basis blob: " + path);

  if (!basis.psi.all_finite() || !basis.gamma.all_finite())
    throw IoError(IoError::Code::kCorruptData, "non-finite basis entries: " + path);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(basis.sigma[i] >= 0.0) || (i + 1 < n && basis.sigma[i] < basis.sigma[i + 1]))
      throw IoError(IoError::Code::kCorruptData, "sigma not sorted/nonnegative: " + path);
  }
  if (orthogonality_residual(basis.psi) > 1e-9 ||
      orthogonality_residual(transpose(basis.gamma)) > 1e-9)
    throw IoError(IoError::Code::kCorruptData, "basis factors not orthogonal: " + path);

  basis.basis_id = compute_basis_id(basis.psi, basis.sigma, basis.gamma);
  return basis;
}

}  // namespace gftse
