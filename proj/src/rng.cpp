#include "oltr/rng.hpp"

#include <stdexcept>

namespace oltr {

std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path) {
  std::uint64_t state = root;
  for (std::uint64_t element : path) {
    SplitMix64 mixer(state ^ (element + 0x632be59bd9b4e019ULL));
    state = mixer.next();
  }
  return state;
}

int Rng::uniform_int(int lo, int hi) {
  if (hi <= lo) throw std::invalid_argument("uniform_int: empty range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo);
  return lo + static_cast<int>(next_u64() % span);
}

int Rng::discrete(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("discrete: negative weight");
    total += w;
  }
  if (total <= 0.0) throw std::invalid_argument("discrete: zero total weight");
  double u = uniform01() * total;
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < weights.size(); ++k) {
    acc += weights[k];
    if (u < acc) return static_cast<int>(k);
  }
  return static_cast<int>(weights.size()) - 1;
}

}  // namespace oltr
