// spt/quantize.cpp

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

#include "spt/quantize.hpp"

#include <cmath>
#include <fstream>
#include <unordered_map>

namespace spt {

std::int64_t round_quantize(double value) {
  require(std::isfinite(value), ErrorCode::kInvalidInput,
          "round_quantize: non-finite value");
  // llround rounds halfway cases away from zero irrespective of the
  // current rounding mode.
  require(std::abs(value) < 9.2e18, ErrorCode::kInvalidInput,
          "round_quantize: value out of integer range");
  return std::llround(value);
}

QuantizedSequence compact_alphabet(std::span<const std::int64_t> raw) {
  require(!raw.empty(), ErrorCode::kInvalidInput,
          "compact_alphabet: empty symbol sequence");
  QuantizedSequence out;
  out.symbols.reserve(raw.size());
  std::unordered_map<std::int64_t, std::int32_t> relabel;
  relabel.reserve(raw.size());
  for (std::int64_t symbol : raw) {
    auto [it, inserted] =
        relabel.try_emplace(symbol, static_cast<std::int32_t>(relabel.size()));
    out.symbols.push_back(it->second);
  }
  out.alphabet_size = static_cast<std::int32_t>(relabel.size());
  return out;
}

void write_sequence_csv(const QuantizedSequence& seq,
                        const std::string& path) {
  std::ofstream out(path);
  require(out.good(), ErrorCode::kIo, "cannot write sequence file: " + path);
  out << "frame_index,symbol\n";
  for (std::size_t i = 0; i < seq.symbols.size(); ++i) {
    out << i << ',' << seq.symbols[i] << '\n';
  }
  require(out.good(), ErrorCode::kIo, "failed writing sequence file: " + path);
}

}  // namespace spt
