#pragma once

#include <cstdint>
#include <limits>

namespace monogame {

// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based generator: output n is mix64(key + (n+1) * golden gamma).
// The full state is (key, counter), so streams can be derived, copied and
// replayed without touching any shared state.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  constexpr explicit CounterRng(std::uint64_t key = 0) : key_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() {
    ++counter_;
    return mix64(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
  }

  constexpr std::uint64_t key() const { return key_; }
  constexpr std::uint64_t counter() const { return counter_; }

  friend constexpr bool operator==(const CounterRng&, const CounterRng&) = default;

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Stream purposes. Each (seed, purpose, index) triple gets its own key.
enum class StreamPurpose : std::uint64_t {
  kGame = 1,    // game construction (payoff matrices)
  kNoise = 2,   // feedback noise; index = player
  kVerify = 3,  // property-test sampling
};

// Key derivation: mix64(mix64(mix64(seed) ^ purpose) ^ index).
constexpr std::uint64_t derive_key(std::uint64_t seed, StreamPurpose purpose,
                                   std::uint64_t index = 0) {
  return mix64(mix64(mix64(seed) ^ static_cast<std::uint64_t>(purpose)) ^ index);
}

constexpr CounterRng make_stream(std::uint64_t seed, StreamPurpose purpose,
                                 std::uint64_t index = 0) {
  return CounterRng(derive_key(seed, purpose, index));
}

}  // namespace monogame
