#pragma once

#include <cstdint>
#include <random>

namespace osa {

/// Seeded stream with independent substreams addressed by (seed, index), so
/// parallel work items draw the same numbers regardless of scheduling.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t index) : engine_(mix(seed, index)) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi].
  int uniform_int(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(engine_() % span);
  }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  static std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t index) {
    return splitmix(splitmix(seed) ^ (index * 0xd1342543de82ef95ULL + 0x632be59bd9b4e019ULL));
  }

  std::mt19937_64 engine_;
};

}  // namespace osa
