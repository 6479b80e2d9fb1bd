// distillkit/rng.hpp

// Copyright 2026  DistillKit Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef DISTILLKIT_RNG_HPP_
#define DISTILLKIT_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace distillkit {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Deterministic random stream (xoshiro256**). The algorithm is fully
/// specified here, so a fixed seed gives the same draw sequence on every
/// platform and standard library. All randomness in the toolkit flows
/// through this class; std::random distributions are avoided because their
/// output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) {
      x = splitmix64(x);
      word = x;
    }
  }

  /// Derives an independent stream from a seed and a tag path, e.g.
  /// derive(seed, {kAugmentStream, epoch, sample_index}). Streams with
  /// different tag paths are de-correlated regardless of worker layout.
  static Rng derive(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
    std::uint64_t h = splitmix64(seed);
    for (std::uint64_t t : tags) h = splitmix64(h ^ (t + 0x9E3779B97F4A7C15ULL));
    return Rng(h);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

  /// Uniform integer in [lo, hi], both ends inclusive. Requires lo <= hi.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(next_u64() % span);
  }

  /// Standard normal via Box-Muller. Consumes exactly two uniform draws.
  double gaussian() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  /// Fisher-Yates shuffle of indices [0, n) stored in `perm`.
  template <typename Container>
  void shuffle(Container& perm) {
    for (std::size_t i = perm.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(i) - 1));
      std::swap(perm[i - 1], perm[j]);
    }
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t state_[4];
};

/// Stream tags used to derive de-correlated substreams from one master seed.
namespace rng_stream {
constexpr std::uint64_t kEpochShuffle = 0x45504F43ULL;   // subset + batch order
constexpr std::uint64_t kAugment = 0x41554748ULL;        // crop + spec-augment
constexpr std::uint64_t kNetInit = 0x494E4954ULL;        // parameter init
constexpr std::uint64_t kClassWeights = 0x434C5357ULL;   // AAM class weights
constexpr std::uint64_t kSynthSpeaker = 0x53504B52ULL;   // synth per-speaker
constexpr std::uint64_t kSynthUtt = 0x55545452ULL;       // synth per-utterance
constexpr std::uint64_t kSynthTrials = 0x5452494CULL;    // synth trial sampling
}  // namespace rng_stream

}  // namespace distillkit

#endif  // DISTILLKIT_RNG_HPP_
