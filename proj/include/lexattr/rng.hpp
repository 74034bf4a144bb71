#ifndef LEXATTR_RNG_HPP_
#define LEXATTR_RNG_HPP_

#include <cstdint>
#include <random>
#include <vector>

namespace lexattr {

// Deterministic random source. mt19937_64 output is fully specified by the
// standard, and every derived draw below is built from raw 64-bit words, so
// identical seeds give identical streams on every platform. std::*_distribution
// is deliberately avoided: its mapping from generator output is
// implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::seed_seq seq{seed, stream};
    gen_.seed(seq);
  }

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1) with 53 bits of mantissa.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform index in [0, n); rejection sampling keeps it exactly unbiased.
  std::size_t index(std::size_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return static_cast<std::size_t>(x % n);
  }

  // Fisher-Yates; std::shuffle is not bit-stable across standard libraries.
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[index(i)]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace lexattr

#endif  // LEXATTR_RNG_HPP_
