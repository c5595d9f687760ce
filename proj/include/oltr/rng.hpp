#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>

namespace oltr {

// splitmix64. Used both as the draw generator and as the seed-derivation
// mixer, so substreams for (replicate, stream, round) tuples are plain
// counter hashes: cheap to construct and reproducible by construction.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

// Distinct draw purposes get distinct stream tags so that, e.g., environment
// losses and sampler permutation picks never share a sequence.
enum StreamTag : std::uint64_t {
  kStreamEnvironment = 0x454e56,
  kStreamSampler = 0x534d50,
};

// Hash-chains root -> path elements; every element permutes the state, so
// (seed, {a, b}) and (seed, {b, a}) land in unrelated streams.
std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path);

// Thin generator with pinned draw algorithms. The distributions are spelled
// out here (instead of <random> adaptors) so traces are byte-stable across
// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_.next(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  // Uniform on {lo, ..., hi - 1}.
  int uniform_int(int lo, int hi);

  // Index k with probability weights[k] / sum(weights); weights must be
  // nonnegative with positive sum.
  int discrete(std::span<const double> weights);

 private:
  SplitMix64 gen_;
};

}  // namespace oltr
