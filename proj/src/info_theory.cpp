// spt/info_theory.cpp

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

#include "spt/info_theory.hpp"

#include <cmath>

namespace spt {

namespace {

/// Good-Turing discount factor 1 - m/n, with m -> n-1 when every symbol is
/// a singleton. That substitution keeps both the factor and the Chao-Shen
/// denominator away from zero; with n = 1 it reduces to no correction and a
/// zero entropy contribution.
double good_turing_factor(std::int64_t n, std::int64_t m) {
  if (m == n) m = n - 1;
  return 1.0 - static_cast<double>(m) / static_cast<double>(n);
}

/// Chao-Shen entropy in bits over one count row. Skips zero counts
/// (0*log 0 = 0 by convention).
double chao_shen_bits(std::span<const std::int64_t> counts, std::int64_t n,
                      std::int64_t m) {
  const double factor = good_turing_factor(n, m);
  const double inv_n = 1.0 / static_cast<double>(n);
  double h = 0.0;
  for (std::int64_t c : counts) {
    if (c == 0) continue;
    const double p_gt = factor * static_cast<double>(c) * inv_n;
    const double coverage = 1.0 - std::pow(1.0 - p_gt, static_cast<double>(n));
    h += -p_gt * std::log2(p_gt) / coverage;
  }
  return h;
}

double plugin_bits(std::span<const std::int64_t> counts, std::int64_t n) {
  const double inv_n = 1.0 / static_cast<double>(n);
  double h = 0.0;
  for (std::int64_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) * inv_n;
    h += -p * std::log2(p);
  }
  return h;
}

std::int64_t count_singletons(std::span<const std::int64_t> counts) {
  std::int64_t m = 0;
  for (std::int64_t c : counts) m += (c == 1);
  return m;
}

}  // namespace

CountTable CountTable::from_counts(std::vector<std::int64_t> counts) {
  CountTable table;
  table.counts = std::move(counts);
  for (std::int64_t c : table.counts) {
    require(c >= 0, ErrorCode::kInvalidInput, "CountTable: negative count");
    table.total += c;
    table.singletons += (c == 1);
  }
  require(table.total >= 1, ErrorCode::kInvalidInput, "CountTable: empty");
  return table;
}

CountTable CountTable::from_symbols(std::span<const std::int32_t> symbols,
                                    std::int32_t alphabet_size) {
  require(!symbols.empty(), ErrorCode::kInvalidInput,
          "CountTable: empty symbol sequence");
  std::vector<std::int64_t> counts(static_cast<std::size_t>(alphabet_size), 0);
  for (std::int32_t s : symbols) {
    require(s >= 0 && s < alphabet_size, ErrorCode::kInvalidInput,
            "CountTable: symbol outside alphabet");
    ++counts[static_cast<std::size_t>(s)];
  }
  return from_counts(std::move(counts));
}

Vector empirical_pmf(const QuantizedSequence& seq) {
  require(!seq.symbols.empty(), ErrorCode::kInvalidInput,
          "empirical_pmf: empty sequence");
  const CountTable table =
      CountTable::from_symbols(seq.symbols, seq.alphabet_size);
  Vector pmf(table.counts.size());
  for (std::size_t j = 0; j < table.counts.size(); ++j) {
    pmf[static_cast<Index>(j)] =
        static_cast<double>(table.counts[j]) / static_cast<double>(table.total);
  }
  return pmf;
}

Vector good_turing_pmf(const CountTable& table) {
  const double factor = good_turing_factor(table.total, table.singletons);
  Vector p_gt(table.counts.size());
  for (std::size_t j = 0; j < table.counts.size(); ++j) {
    p_gt[static_cast<Index>(j)] = factor *
                                  static_cast<double>(table.counts[j]) /
                                  static_cast<double>(table.total);
  }
  return p_gt;
}

double chao_shen_entropy(const CountTable& table) {
  return chao_shen_bits(table.counts, table.total, table.singletons);
}

double plugin_entropy(const CountTable& table) {
  return plugin_bits(table.counts, table.total);
}

double conditional_entropy(const QuantizedSequence& x,
                           const QuantizedSequence& y, Estimator estimator) {
  require(x.symbols.size() == y.symbols.size(), ErrorCode::kInvalidInput,
          "conditional_entropy: sequence length mismatch");
  require(!x.symbols.empty(), ErrorCode::kInvalidInput,
          "conditional_entropy: empty sequences");
  JointCounts joint(x.alphabet_size, y.alphabet_size);
  joint.accumulate(x.symbols, y.symbols);
  return joint.conditional_entropy_bits(estimator);
}

double effective_cardinality(double entropy_bits) {
  require(entropy_bits >= 0.0, ErrorCode::kInvalidInput,
          "effective_cardinality: negative entropy");
  return std::exp2(entropy_bits);
}

JointCounts::JointCounts(std::int32_t x_alphabet, std::int32_t y_alphabet)
    : num_x_(x_alphabet),
      num_y_(y_alphabet),
      cells_(static_cast<std::size_t>(x_alphabet) *
                 static_cast<std::size_t>(y_alphabet),
             0),
      x_totals_(static_cast<std::size_t>(x_alphabet), 0) {
  require(x_alphabet >= 1 && y_alphabet >= 1, ErrorCode::kInvalidInput,
          "JointCounts: alphabets must be non-empty");
}

void JointCounts::reset() {
  std::fill(cells_.begin(), cells_.end(), 0);
  std::fill(x_totals_.begin(), x_totals_.end(), 0);
  total_ = 0;
}

void JointCounts::accumulate(std::span<const std::int32_t> x,
                             std::span<const std::int32_t> y) {
  require(x.size() == y.size(), ErrorCode::kInvalidInput,
          "JointCounts: length mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) {
    const std::uint32_t a = static_cast<std::uint32_t>(x[i]);
    const std::uint32_t b = static_cast<std::uint32_t>(y[i]);
    require(a < static_cast<std::uint32_t>(num_x_) &&
                b < static_cast<std::uint32_t>(num_y_),
            ErrorCode::kInvalidInput, "JointCounts: symbol outside alphabet");
    ++cells_[static_cast<std::size_t>(a) * static_cast<std::size_t>(num_y_) +
             static_cast<std::size_t>(b)];
    ++x_totals_[static_cast<std::size_t>(a)];
  }
  total_ += static_cast<std::int64_t>(x.size());
}

double JointCounts::conditional_entropy_bits(Estimator estimator) const {
  require(total_ >= 1, ErrorCode::kInvalidInput, "JointCounts: no pairs");
  // Sum over observed x symbols in index order so the reduction is
  // deterministic regardless of the caller's threading.
  double h = 0.0;
  for (std::int32_t j = 0; j < num_x_; ++j) {
    const std::int64_t n_j = x_totals_[static_cast<std::size_t>(j)];
    if (n_j == 0) continue;
    const std::span<const std::int64_t> row(
        cells_.data() +
            static_cast<std::size_t>(j) * static_cast<std::size_t>(num_y_),
        static_cast<std::size_t>(num_y_));
    const double weight =
        static_cast<double>(n_j) / static_cast<double>(total_);
    const double cell_bits =
        estimator == Estimator::kChaoShen
            ? chao_shen_bits(row, n_j, count_singletons(row))
            : plugin_bits(row, n_j);
    h += weight * cell_bits;
  }
  return h;
}

}  // namespace spt
