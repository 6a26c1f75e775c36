// spt/config.hpp

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

#ifndef SPT_CONFIG_HPP_
#define SPT_CONFIG_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "spt/corpus.hpp"
#include "spt/dsp_features.hpp"
#include "spt/version.hpp"

namespace spt {

/// One run's full configuration. Serialized verbatim into every report as
/// the config fingerprint.
struct RunConfig {
  std::string manifest_path;
  std::string out_dir;
  DspConfig dsp;
  double max_gap_s = 0.033;
  int num_components = 40;         // K
  std::int64_t num_trials = 100000;  // D
  std::uint64_t seed = 0;
  std::vector<std::string> features = {"f0", "energy", "voicing"};
  std::vector<std::string> speakers;  // empty = every speaker in manifest
  int threads = 0;                    // 0 = hardware concurrency

  void validate() const;
  std::string to_json_string() const;
  static RunConfig from_json_file(const std::string& path);
};

}  // namespace spt

#endif  // SPT_CONFIG_HPP_
