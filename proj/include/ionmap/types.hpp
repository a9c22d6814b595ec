#pragma once

#include <cstdint>
#include <vector>

namespace ionmap {

/// All simulated time is integer microseconds.
using Duration = std::int64_t;

struct Coord {
  int row = 0;
  int col = 0;

  friend bool operator==(const Coord& a, const Coord& b) {
    return a.row == b.row && a.col == b.col;
  }
  friend bool operator!=(const Coord& a, const Coord& b) { return !(a == b); }
  /// Row-major order; used for deterministic tie-breaking.
  friend bool operator<(const Coord& a, const Coord& b) {
    if (a.row != b.row) return a.row < b.row;
    return a.col < b.col;
  }
};

enum class Direction { Horizontal, Vertical };

/// Qubit index -> cell coordinate (normally a trap cell).
using Placement = std::vector<Coord>;

/// Deterministic, portable RNG (splitmix64). The standard <random>
/// distributions are implementation-defined, which would break byte-identical
/// traces across platforms, so all randomness goes through this.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, n). Modulo bias is irrelevant for the small n used here;
  /// determinism is what matters.
  std::uint64_t uniform(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

  /// Child stream that is independent of how many values were drawn from
  /// this generator. Derivation uses the original seed, so stream k of a
  /// given master seed is stable -- this is what makes prefix properties
  /// (seeds 0..24 of a 100-seed sweep equal the 25-seed sweep) hold.
  Rng derive(std::uint64_t stream) const {
    Rng mix(seed_ ^ (0xD1B54A32D192ED03ull * (stream + 1)));
    return Rng(mix.next());
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
};

}  // namespace ionmap
