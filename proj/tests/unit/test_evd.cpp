#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "gftse/errors.hpp"
#include "gftse/evd.hpp"
#include "gftse/topology.hpp"
#include "oracles/normal_eig.hpp"

using namespace gftse;
using cplx = std::complex<double>;

TEST_CASE("dft matrix small cases") {
  const FourierMatrix f1 = dft_matrix(1);
  CHECK(f1.d(0, 0) == cplx(1.0, 0.0));

  const FourierMatrix f2 = dft_matrix(2);
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(f2.d(0, 0) - cplx(r, 0)) < 1e-15);
  CHECK(std::abs(f2.d(0, 1) - cplx(r, 0)) < 1e-15);
  CHECK(std::abs(f2.d(1, 0) - cplx(r, 0)) < 1e-15);
  CHECK(std::abs(f2.d(1, 1) - cplx(-r, 0)) < 1e-15);
}

TEST_CASE("dft matrix is unitary") {
  for (std::size_t n : {8u, 33u, 128u}) {
    const FourierMatrix f = dft_matrix(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        cplx acc(0.0, 0.0);
        for (std::size_t k = 0; k < n; ++k) acc += std::conj(f.d(k, i)) * f.d(k, j);
        CHECK(std::abs(acc - (i == j ? cplx(1, 0) : cplx(0, 0))) < 1e-12);
      }
    }
  }
}

TEST_CASE("cyclic shift eigenvalues are the fourth roots of unity") {
  const GraphTopology topo = build_shift_operator(4, 1);
  const EvdBasis basis = circulant_evd(topo);
  std::vector<cplx> expected = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  CHECK(oracle::multiset_distance(basis.lambda, expected) < 1e-12);
  CHECK(eigen_residual(basis, topo.shift_operator) < 1e-12);
}

TEST_CASE("complete-minus-self eigenvalues") {
  const GraphTopology topo = build_shift_operator(6, 5);
  const EvdBasis basis = circulant_evd(topo);
  std::vector<cplx> expected(6, cplx(-1.0, 0.0));
  expected[0] = cplx(5.0, 0.0);
  CHECK(oracle::multiset_distance(basis.lambda, expected) < 1e-12);
}

TEST_CASE("eigen residual stays below 1e-9 through N=512") {
  for (auto [n, k] : std::vector<std::pair<std::size_t, std::size_t>>{
           {4, 1}, {8, 3}, {64, 5}, {512, 5}}) {
    const GraphTopology topo = build_shift_operator(n, k);
    const EvdBasis basis = circulant_evd(topo);
    CHECK(eigen_residual(basis, topo.shift_operator) < 1e-9);
  }
}

TEST_CASE("eigenvalue multisets match the brute-force oracle for N<=8") {
  for (std::size_t n = 2; n <= 8; ++n) {
    for (std::size_t k = 1; k < n; ++k) {
      const GraphTopology topo = build_shift_operator(n, k);
      const EvdBasis basis = circulant_evd(topo);
      const auto expected = oracle::normal_eigenvalues(topo.shift_operator);
      CHECK(oracle::multiset_distance(basis.lambda, expected) < 1e-8);
    }
  }
}

TEST_CASE("non-circulant input is rejected") {
  GraphTopology topo = build_shift_operator(6, 2);
  topo.shift_operator(0, 2) = 1.0;  // break the circulant structure
  CHECK_THROWS_AS(circulant_evd(topo), InvalidArgument);
}
