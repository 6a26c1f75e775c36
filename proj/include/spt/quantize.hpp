// spt/quantize.hpp

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

#ifndef SPT_QUANTIZE_HPP_
#define SPT_QUANTIZE_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "spt/types.hpp"

namespace spt {

/// Ordered discrete symbols over a dense alphabet 0..alphabet_size-1,
/// tagged with the feature they were quantized from and the speaker that
/// produced them.
struct QuantizedSequence {
  std::vector<std::int32_t> symbols;
  std::int32_t alphabet_size = 0;
  std::string source;   // mfcc_id | energy | f0 | voicing
  std::string speaker;

  Index size() const { return static_cast<Index>(symbols.size()); }
};

/// Nearest integer, ties (.5) away from zero. Rejects non-finite input.
std::int64_t round_quantize(double value);

/// Order-preserving relabeling of raw (possibly negative or sparse) symbols
/// onto 0..G-1 by first appearance. alphabet_size = distinct raw symbols.
QuantizedSequence compact_alphabet(std::span<const std::int64_t> raw);

/// CSV with columns frame_index, symbol; frame_index is the position
/// within the (possibly voiced-filtered) sequence.
void write_sequence_csv(const QuantizedSequence& seq, const std::string& path);

}  // namespace spt

#endif  // SPT_QUANTIZE_HPP_
