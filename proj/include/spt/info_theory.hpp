// spt/info_theory.hpp

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

#ifndef SPT_INFO_THEORY_HPP_
#define SPT_INFO_THEORY_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "spt/quantize.hpp"
#include "spt/types.hpp"

namespace spt {

/// Per-symbol observation counts of one discrete sample.
struct CountTable {
  std::vector<std::int64_t> counts;  // per observed symbol, >= 0
  std::int64_t total = 0;            // n
  std::int64_t singletons = 0;       // m, symbols seen exactly once

  static CountTable from_counts(std::vector<std::int64_t> counts);
  static CountTable from_symbols(std::span<const std::int32_t> symbols,
                                 std::int32_t alphabet_size);
};

enum class Estimator {
  kChaoShen,  // coverage-adjusted, the production path
  kPlugIn,    // maximum-likelihood plug-in, used as a bounded sanity oracle
};

/// Empirical PMF over the sequence's alphabet; entries sum to 1.
Vector empirical_pmf(const QuantizedSequence& seq);

/// Good-Turing-corrected frequency estimates over observed symbols.
/// When every symbol is a singleton (m == n) the correction factor would
/// zero all mass, so m is replaced by n-1 in that case.
Vector good_turing_pmf(const CountTable& table);

/// Chao-Shen entropy of one sample, in bits. Non-negative; zero iff the
/// sample is constant.
double chao_shen_entropy(const CountTable& table);

/// Maximum-likelihood plug-in entropy, in bits.
double plugin_entropy(const CountTable& table);

/// H(Y|X): per-x-cell entropies weighted by the empirical PMF of X.
/// Requires equal, non-zero lengths.
double conditional_entropy(const QuantizedSequence& x,
                           const QuantizedSequence& y,
                           Estimator estimator = Estimator::kChaoShen);

/// C = 2^H. Requires H >= 0.
double effective_cardinality(double entropy_bits);

/// Dense joint counts of an (x, y) symbol pairing. Separated out so
/// permutation trials can reuse one zeroed table per thread instead of
/// rebuilding hash maps 10^5 times.
class JointCounts {
 public:
  JointCounts(std::int32_t x_alphabet, std::int32_t y_alphabet);

  void reset();
  void accumulate(std::span<const std::int32_t> x,
                  std::span<const std::int32_t> y);
  double conditional_entropy_bits(Estimator estimator) const;

  std::int64_t total() const { return total_; }

 private:
  std::int32_t num_x_;
  std::int32_t num_y_;
  std::vector<std::int64_t> cells_;     // num_x * num_y, row-major by x
  std::vector<std::int64_t> x_totals_;  // n_j
  std::int64_t total_ = 0;              // N
};

}  // namespace spt

#endif  // SPT_INFO_THEORY_HPP_
