// spt/rng.hpp

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPT_RNG_HPP_
#define SPT_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>
#include <utility>
#include <vector>

namespace spt {

/// SplitMix64 generator (Steele, Lea & Flood). Splittable: independent
/// streams are derived by hashing a (seed, tag, index) triple, so stream d
/// depends only on those values and never on how many other streams were
/// drawn. All randomness in this project flows through this class; the
/// stdlib engines and distributions are avoided because their output is
/// implementation-defined.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  /// Unbiased uniform integer in [0, n); n >= 1. Rejection sampling keeps
  /// the result independent of platform integer-division quirks.
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % n;
  }

  /// Standard normal via Box-Muller; the spare half of each pair is cached.
  double next_gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1;
    do {
      u1 = next_double();
    } while (u1 <= 0.0);
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

namespace detail {
inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}
}  // namespace detail

/// Derives a stage seed from the top-level seed and a stage tag, so stages
/// (quantizer training, permutation trials, fixture synthesis) consume
/// disjoint streams and can be re-run independently.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view tag) {
  return SplitMix64(base ^ detail::fnv1a64(tag)).next();
}

/// Per-item stream within a stage; item index enters the hash, not the
/// draw order, which is what makes trials safe to run in parallel.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view tag,
                                 std::uint64_t index) {
  return SplitMix64(derive_seed(base, tag) ^
                    (0x9e3779b97f4a7c15ULL * (index + 1))).next();
}

/// In-place Fisher-Yates shuffle driven by the supplied stream.
template <typename T>
void shuffle_in_place(std::vector<T>& values, SplitMix64& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.next_below(i));
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace spt

#endif  // SPT_RNG_HPP_
