// spt/perm_test.hpp

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

#ifndef SPT_PERM_TEST_HPP_
#define SPT_PERM_TEST_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "spt/info_theory.hpp"
#include "spt/quantize.hpp"
#include "spt/rng.hpp"

namespace spt {

struct HistogramBin {
  double left = 0.0;
  double right = 0.0;
  std::int64_t count = 0;
};

/// Effective cardinalities of the shuffled trials plus a
/// Freedman-Diaconis histogram of them.
struct NullDistribution {
  std::vector<double> samples;  // one per trial, all >= 1
  std::uint64_t seed = 0;
  std::vector<HistogramBin> histogram;

  std::int64_t num_trials() const {
    return static_cast<std::int64_t>(samples.size());
  }
};

struct NullSummary {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double stddev = 0.0;
};

struct TestReport {
  std::string speaker;
  std::string feature;       // f0 | energy | voicing
  std::int64_t sequence_length = 0;
  std::int32_t x_alphabet = 0;
  std::int32_t y_alphabet = 0;
  double c_test = 0.0;
  std::int64_t p_count = 0;  // null samples <= c_test
  double p_value_bound = 0.0;  // (p_count + 1) / (D + 1)
  std::string p_note;          // "p < 1/D" when p_count == 0
  std::int64_t num_trials = 0;
  std::uint64_t seed = 0;
  Estimator estimator = Estimator::kChaoShen;
  NullSummary null_summary;
  std::string config_fingerprint;  // RunConfig JSON, verbatim
};

struct PermTestOptions {
  std::int64_t num_trials = 100000;  // D
  std::uint64_t seed = 0;
  int threads = 1;
  Estimator estimator = Estimator::kChaoShen;
  bool progress = false;  // trial counter on stderr
};

/// Uniform random permutation (Fisher-Yates) of the symbols; the multiset
/// is preserved and the result depends only on rng's state.
QuantizedSequence shuffled(const QuantizedSequence& seq, SplitMix64& rng);

/// D effective cardinalities of conditional entropies against shuffled
/// copies of y. Trial d draws from a stream derived from (seed, d), so the
/// result is independent of trial order and thread count.
NullDistribution null_distribution(const QuantizedSequence& x,
                                   const QuantizedSequence& y,
                                   const PermTestOptions& options);

/// (#{C_d <= c_test}, (count + 1) / (D + 1)).
std::pair<std::int64_t, double> p_value_bound(double c_test,
                                              const NullDistribution& null);

/// Full test on the naturally ordered pair: test statistic, null
/// distribution, p bound. null_out, when given, receives the trial samples
/// and histogram for report figures.
TestReport run_test(const QuantizedSequence& x,
                    const QuantizedSequence& y_test,
                    const PermTestOptions& options,
                    NullDistribution* null_out = nullptr);

void save_report(const TestReport& report, const std::string& path);
TestReport load_report(const std::string& path);
void save_histogram_csv(const NullDistribution& null, const std::string& path);

}  // namespace spt

#endif  // SPT_PERM_TEST_HPP_
