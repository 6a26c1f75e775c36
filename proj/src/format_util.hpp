// spt/format_util.hpp

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

#ifndef SPT_FORMAT_UTIL_HPP_
#define SPT_FORMAT_UTIL_HPP_

#include <charconv>
#include <string>
#include <system_error>

namespace spt::detail {

/// Shortest round-trip decimal form; reproducible independent of locale
/// and stream state, which keeps emitted CSV byte-stable across runs.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace spt::detail

#endif  // SPT_FORMAT_UTIL_HPP_
