#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace mpcmatch {

// splitmix64 step. stable across platforms, unlike libstdc++ distributions.
inline std::uint64_t splitmix64_next(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a ^ (0x9e3779b97f4a7c15ull + (b << 6) + (b >> 2));
  std::uint64_t first = splitmix64_next(s);
  return first ^ splitmix64_next(s);
}

// deterministic stream with cheap hierarchical forking. fork(tag) depends only on
// (base seed, tag), never on how much the parent has already drawn, so independent
// components can own disjoint streams and replays stay bitwise stable.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), state_(mix_seed(seed, 0x5eedull)) {}

  std::uint64_t seed() const { return seed_; }

  RngStream fork(std::uint64_t tag) const { return RngStream(mix_seed(seed_, tag + 1)); }

  std::uint64_t next_u64() { return splitmix64_next(state_); }

  // uniform in [0,1) with 53 random bits
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // p <= 0 never fires, p >= 1 always fires, exactly one u64 consumed either way
  bool bernoulli(double p) { return next_double() < p; }

  // uniform in [0, bound), Lemire's multiply-shift with rejection
  std::uint64_t uniform_index(std::uint64_t bound) {
    if (bound == 0) throw std::logic_error("uniform_index: bound must be positive");
    while (true) {
      std::uint64_t x = next_u64();
      __uint128_t m = static_cast<__uint128_t>(x) * bound;
      std::uint64_t lo = static_cast<std::uint64_t>(m);
      if (lo >= bound || lo >= (0ull - bound) % bound) return static_cast<std::uint64_t>(m >> 64);
    }
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform_index(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
};

}  // namespace mpcmatch
