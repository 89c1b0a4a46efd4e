#ifndef SENTI_KEYED_RNG_H_
#define SENTI_KEYED_RNG_H_

#include <cstdint>
#include <initializer_list>

namespace senti {

// Identifies one random decision stream: (master seed, epoch, example
// index). Workers that see the same key make the same decisions no matter
// which order examples are visited in.
struct RngKey {
  std::uint64_t seed = 0;
  std::uint64_t epoch = 0;
  std::uint64_t index = 0;

  friend bool operator==(const RngKey&, const RngKey&) = default;
};

// Purpose tags so that independent consumers of the same key draw
// uncorrelated streams.
enum class RngStream : std::uint64_t {
  kTokenDrop = 1,
  kMlmMask = 2,
  kShuffle = 3,
  kFeatureDropout = 4,
  kSeedDerivation = 5,
  kSynthetic = 6,
};

// SplitMix64 generator whose state is a hash of the key. All draws are
// computed with integer arithmetic only, so sequences are bit-identical on
// every platform (unlike the <random> distributions).
class KeyedRng {
 public:
  KeyedRng(const RngKey& key, RngStream stream)
      : state_(mix({key.seed, key.epoch, key.index,
                    static_cast<std::uint64_t>(stream)})) {}

  explicit KeyedRng(std::uint64_t seed) : state_(mix({seed})) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 bits of precision.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Unbiased uniform integer in [0, n); n must be > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  static std::uint64_t finalize(std::uint64_t z) {
    z = (z ^ (z >> 33)) * 0xff51afd7ed558ccdULL;
    z = (z ^ (z >> 33)) * 0xc4ceb9fe1a85ec53ULL;
    return z ^ (z >> 33);
  }
  static std::uint64_t mix(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = 0x6a09e667f3bcc909ULL;
    for (std::uint64_t p : parts) h = finalize(h ^ finalize(p + 0x9e3779b97f4a7c15ULL));
    return h;
  }

  std::uint64_t state_;
};

}  // namespace senti

#endif  // SENTI_KEYED_RNG_H_
