#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace spinrl {

// Mixes a 64-bit value through the splitmix64 finalizer. Used to whiten
// seeds before they reach the main engine.
std::uint64_t splitmix64(std::uint64_t x);

// Derives an independent stream seed from a master seed and up to two
// stream coordinates (e.g. epoch and batch index), so that workers can be
// given their own streams without any shared state.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0);

// Deterministic random stream. The uniform and normal transforms are pinned
// here (rather than taken from std:: distributions) so that a given seed
// produces the same draw sequence on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  // Uniform in [0, 1), 53-bit resolution.
  double uniform();
  // Uniform in [lo, hi).
  double uniform(double lo, double hi);
  // Gaussian via Box-Muller; consumes exactly two uniforms per call.
  double normal(double mean, double stddev);
  // Samples an index from a probability vector (assumed ~normalized).
  int categorical(std::span<const double> probs);

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace spinrl
