#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "gftse/enhance.hpp"
#include "gftse/framing.hpp"
#include "gftse/svd.hpp"
#include "gftse/topology.hpp"
#include "gftse/transforms.hpp"

namespace gftse {

struct TrainConfig {
  double learning_rate = 1.0;
  std::size_t max_iters = 50;
  double tolerance = 1e-6;  // stop when an accepted step improves less than this (dB)
  std::uint64_t seed = 0;
  double fd_epsilon = 1e-4;
  double ridge = 1e-6;
};

void validate(const TrainConfig& config);

// trace_db[0] is the objective at initialization; one entry is appended per
// accepted step, so the trace of a backtracking run is non-decreasing.
struct TrainReport {
  std::vector<double> trace_db;
  double final_db = 0.0;
  std::size_t iterations = 0;  // == trace_db.size()
  double wall_seconds = 0.0;

  // Timing is excluded by default so that report artifacts are
  // byte-identical across reruns of the same seed.
  std::string to_json(bool include_timing = false) const;
  std::string trace_to_csv() const;
};

enum class InverseTrainMethod { kGradient, kLeastSquares };

// Learns the synthesis operator B that reconstructs the training frames
// from their graph spectra Y = frames * psi.
//   kLeastSquares: closed form argmin_B sum ||B y - x||^2 + ridge ||B - psi||_F^2
//                  via Cholesky on the normal equations; with ridge == 0 a
//                  rank-deficient system raises NumericError.
//   kGradient:     ascends mean per-frame reconstruction SI-SDR from B = psi
//                  with backtracking (accept only improvements).
std::pair<SynthesisOperator, TrainReport> train_inverse(const FrameSequence& frames,
                                                        const GraphBasis& basis,
                                                        const TrainConfig& config,
                                                        InverseTrainMethod method);

struct TopologyPipeline {
  std::size_t frame_len = 32;
  std::size_t hop = 8;
  WindowKind window = WindowKind::kSqrtHannCola;
  double mask_lo = -10.0;
  double mask_hi = 10.0;
};

// Largest N accepted by the finite-difference topology trainer.
inline constexpr std::size_t kMaxFdVertices = 64;

// Optimizes theta by central finite differences on the mean oracle-mask
// enhancement SI-SDR over the pairs (the SVD is recomputed for every
// probe).  Backtracking step acceptance keeps the objective trace
// non-decreasing.  on_accept, when set, fires after initialization and
// after every accepted step.
std::pair<LearnableTopology, TrainReport> train_topology(
    const std::vector<Mixture>& pairs, const GraphTopology& base,
    const TrainConfig& config, const TopologyPipeline& pipeline,
    const std::function<void(const LearnableTopology&)>& on_accept = {});

// Mean oracle-mask SI-SDR of `pairs` under a fixed adjacency; the training
// objective, exposed so callers can score the uniform initialization.
double topology_objective(const std::vector<Mixture>& pairs, const Matrix& adjacency,
                          const TopologyPipeline& pipeline);

}  // namespace gftse
