#include "gftse/topology.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "gftse/errors.hpp"
#include "gftse/rng.hpp"

namespace gftse {

GraphTopology build_shift_operator(std::size_t n_vertices, std::size_t k_neighbors) {
  if (n_vertices < 2) throw InvalidArgument("build_shift_operator: need N >= 2");
  if (k_neighbors < 1 || k_neighbors > n_vertices - 1)
    throw InvalidArgument("build_shift_operator: need 1 <= K <= N-1");

  GraphTopology topo;
  topo.n_vertices = n_vertices;
  topo.k_neighbors = k_neighbors;
  topo.shift_operator = Matrix(n_vertices, n_vertices);
  for (std::size_t n = 0; n < n_vertices; ++n)
    for (std::size_t k = 0; k < k_neighbors; ++k)
      topo.shift_operator(n, topo.support_col(n, k)) = 1.0;
  return topo;
}

std::size_t sparsity_to_k(double p, std::size_t n_vertices) {
  if (!(p > 0.0) || p > 1.0) throw InvalidArgument("sparsity_to_k: need p in (0, 1]");
  if (n_vertices < 2) throw InvalidArgument("sparsity_to_k: need N >= 2");
  const long long k = std::llround(p * static_cast<double>(n_vertices));
  const long long hi = static_cast<long long>(n_vertices) - 1;
  return static_cast<std::size_t>(std::clamp(k, 1ll, hi));
}

Matrix fixed_adjacency(const GraphTopology& base, AdjacencyMode mode) {
  Matrix a = base.shift_operator;
  if (mode == AdjacencyMode::kRowNormalized) {
    const double inv_k = 1.0 / static_cast<double>(base.k_neighbors);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      double* row = a.row(i);
      for (std::size_t j = 0; j < a.cols(); ++j) row[j] *= inv_k;
    }
  }
  return a;
}

LearnableTopology::LearnableTopology(GraphTopology base, TopologyInit init,
                                     std::uint64_t seed)
    : base_(std::move(base)),
      theta_(base_.n_vertices * base_.k_neighbors, 0.0) {
  if (init == TopologyInit::kSeededUniform) {
    Rng rng(seed);
    for (double& t : theta_) t = rng.uniform(-1.0, 1.0);
  }
}

void LearnableTopology::set_theta(std::vector<double> theta) {
  if (theta.size() != theta_.size())
    throw DimensionMismatch("set_theta: expected N*K parameters");
  for (double t : theta) {
    if (!std::isfinite(t)) throw InvalidArgument("set_theta: non-finite parameter");
  }
  theta_ = std::move(theta);
  cache_valid_ = false;
}

void LearnableTopology::nudge_theta(std::size_t index, double delta) {
  if (index >= theta_.size()) throw InvalidArgument("nudge_theta: index out of range");
  theta_[index] += delta;
  if (!std::isfinite(theta_[index])) throw InvalidArgument("nudge_theta: non-finite parameter");
  cache_valid_ = false;
}

const Matrix& LearnableTopology::adjacency() const {
  if (cache_valid_) return adjacency_cache_;

  const std::size_t n = base_.n_vertices;
  const std::size_t k = base_.k_neighbors;
  adjacency_cache_ = Matrix(n, n);
  for (std::size_t row = 0; row < n; ++row) {
    const double* t = theta_.data() + row * k;
    double row_max = t[0];
    for (std::size_t j = 1; j < k; ++j) row_max = std::max(row_max, t[j]);
    double denom = 0.0;
    for (std::size_t j = 0; j < k; ++j) denom += std::exp(t[j] - row_max);
    for (std::size_t j = 0; j < k; ++j)
      adjacency_cache_(row, base_.support_col(row, j)) = std::exp(t[j] - row_max) / denom;
  }
  cache_valid_ = true;
  return adjacency_cache_;
}

std::string LearnableTopology::to_json() const {
  nlohmann::json j;
  j["n"] = base_.n_vertices;
  j["k"] = base_.k_neighbors;
  j["theta"] = theta_;
  return j.dump();
}

LearnableTopology LearnableTopology::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(IoError::Code::kCorruptData, std::string("topology json: ") + e.what());
  }
  if (!j.contains("n") || !j.contains("k") || !j.contains("theta"))
    throw IoError(IoError::Code::kCorruptData, "topology json: missing n/k/theta");
  LearnableTopology topo(
      build_shift_operator(j["n"].get<std::size_t>(), j["k"].get<std::size_t>()),
      TopologyInit::kZeros);
  topo.set_theta(j["theta"].get<std::vector<double>>());
  return topo;
}

void LearnableTopology::save_json(const std::string& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError(IoError::Code::kUnwritablePath, "cannot write topology: " + path);
  out << to_json() << "\n";
}

LearnableTopology LearnableTopology::load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(IoError::Code::kMissingFile, "cannot open topology: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_json(text);
}

}  // namespace gftse
