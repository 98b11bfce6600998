#include "spinrl/rng.hpp"

#include <cmath>
#include <numbers>

namespace spinrl {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = splitmix64(master);
  s = splitmix64(s ^ (a + 0x123456789abcdefULL));
  s = splitmix64(s ^ (b + 0xfedcba9876543210ULL));
  return s;
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

double Rng::normal(double mean, double stddev) {
  // u1 in (0, 1] so the log is finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double z = std::sqrt(-2.0 * std::log(u1)) *
                   std::cos(2.0 * std::numbers::pi * u2);
  return mean + stddev * z;
}

int Rng::categorical(std::span<const double> probs) {
  const double r = uniform();
  double cumulative = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    cumulative += probs[k];
    if (r < cumulative) return static_cast<int>(k);
  }
  return static_cast<int>(probs.size()) - 1;
}

}  // namespace spinrl
