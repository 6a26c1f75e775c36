// spt/types.hpp

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

#ifndef SPT_TYPES_HPP_
#define SPT_TYPES_HPP_

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace spt {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Array = Eigen::ArrayXd;

enum class ErrorCode {
  kInvalidInput,
  kConfig,
  kIo,
  kWavFormat,
  kWavSampleRate,
  kWavChannels,
};

/// Exception carrying a machine-checkable error code alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

inline void require(bool condition, ErrorCode code, const std::string& msg) {
  if (!condition) fail(code, msg);
}

// Literal-message overload: no std::string is materialized unless the
// check actually fails. Matters in per-element loops.
inline void require(bool condition, ErrorCode code, const char* msg) {
  if (!condition) fail(code, std::string(msg));
}

}  // namespace spt

#endif  // SPT_TYPES_HPP_
