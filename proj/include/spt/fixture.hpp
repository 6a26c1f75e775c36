// spt/fixture.hpp

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

#ifndef SPT_FIXTURE_HPP_
#define SPT_FIXTURE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "spt/corpus.hpp"

namespace spt {

struct FixtureConfig {
  std::uint64_t seed = 7;
  int num_utterances = 2;  // per speaker
  double duration_s = 1.0;
  double voiced_fraction = 0.6;
  double sample_rate_hz = 20000.0;
  std::vector<std::string> speakers = {"female", "male"};
};

/// Writes a synthetic corpus (harmonic voiced spans with time-varying F0,
/// noise bursts in between) plus matching F0 label files and a
/// manifest.json under out_dir. Byte-identical for a given config.
CorpusManifest synth_fixture(const std::string& out_dir,
                             const FixtureConfig& config);

}  // namespace spt

#endif  // SPT_FIXTURE_HPP_
