#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "gftse/matrix.hpp"

namespace gftse {

// Cyclic graph over frame samples: vertex n depends on its K predecessors
// (n-1) mod N .. (n-K) mod N.  The shift operator W is the binary matrix of
// that support.
struct GraphTopology {
  std::size_t n_vertices = 0;
  std::size_t k_neighbors = 0;
  Matrix shift_operator;  // N x N, entries in {0, 1}

  // Column index of the k-th supported edge of row n (k in [0, K)).
  std::size_t support_col(std::size_t n, std::size_t k) const {
    return (n + n_vertices - 1 - k) % n_vertices;
  }
};

// Builds the cyclic shift operator.  Requires N >= 2 and 1 <= K <= N-1.
GraphTopology build_shift_operator(std::size_t n_vertices, std::size_t k_neighbors);

// Maps a sparsity fraction p in (0, 1] to a neighbor count:
// K = clamp(round(p*N), 1, N-1).
std::size_t sparsity_to_k(double p, std::size_t n_vertices);

enum class AdjacencyMode { kBinary, kRowNormalized };

// The fixed-topology baseline: W itself, or W/K with unit row sums.
Matrix fixed_adjacency(const GraphTopology& base, AdjacencyMode mode);

enum class TopologyInit { kZeros, kSeededUniform };

// One unconstrained scalar per supported edge; a per-row softmax over the
// support turns the parameters into a row-stochastic adjacency.  Mutated
// only through set_theta (single-writer); the adjacency is cached and
// rebuilt lazily after updates.
class LearnableTopology {
 public:
  LearnableTopology(GraphTopology base, TopologyInit init, std::uint64_t seed = 0);

  const GraphTopology& base() const { return base_; }
  std::size_t n_vertices() const { return base_.n_vertices; }
  std::size_t k_neighbors() const { return base_.k_neighbors; }

  // Row-major support order: theta[n*K + k] weights edge (n, (n-1-k) mod N).
  const std::vector<double>& theta() const { return theta_; }
  void set_theta(std::vector<double> theta);
  void nudge_theta(std::size_t index, double delta);

  // Masked row-softmax of theta; rows sum to 1, off-support entries are 0.
  const Matrix& adjacency() const;

  std::string to_json() const;
  static LearnableTopology from_json(const std::string& text);

  void save_json(const std::string& path) const;
  static LearnableTopology load_json(const std::string& path);

 private:
  GraphTopology base_;
  std::vector<double> theta_;
  mutable Matrix adjacency_cache_;
  mutable bool cache_valid_ = false;
};

}  // namespace gftse
