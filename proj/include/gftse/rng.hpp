#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace gftse {

// Deterministic random stream.  The raw engine is std::mt19937_64 but the
// uniform/gaussian mappings are spelled out here instead of going through
// std::*_distribution, whose output sequences differ between standard
// library implementations.  Identical seeds must mean identical artifacts.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1) with 53 bits of resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller, one value per call.
  double gaussian();

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Derives a named sub-seed from a run seed, so that every randomized stage
// (signal, noise, init, ...) draws from its own stream.
std::uint64_t sub_seed(std::uint64_t run_seed, std::string_view stream_name);

// FNV-1a over arbitrary bytes; used for sub-seeding and content ids.
std::uint64_t fnv1a(const void* bytes, std::size_t len, std::uint64_t basis = 0xcbf29ce484222325ull);

}  // namespace gftse
