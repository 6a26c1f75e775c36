// spt/prosody.hpp

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

#ifndef SPT_PROSODY_HPP_
#define SPT_PROSODY_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "spt/types.hpp"

namespace spt {

/// One glottal-closure F0 label. f0_hz == 0 marks an unvoiced point.
struct F0Label {
  double time_s = 0.0;
  double f0_hz = 0.0;
};

struct TimeInterval {
  double begin_s = 0.0;
  double end_s = 0.0;
};

/// Frame-synchronous contour: f0 > 0 exactly where voicing == 1.
struct F0Contour {
  Vector f0_hz;                       // per frame, 0 when unvoiced
  std::vector<std::int32_t> voicing;  // per frame bit
};

/// Parses "time_seconds f0_hz" lines; '#' lines ignored. Times must be
/// strictly increasing.
std::vector<F0Label> read_f0_labels(const std::string& path);

/// Maximal runs of positive-f0 labels whose inter-label gaps stay within
/// max_gap_s; each region spans the first to last label time of its run.
std::vector<TimeInterval> voiced_regions(std::span<const F0Label> labels,
                                         double max_gap_s);

/// Linear interpolation of the labels at the given frame times. Frames
/// whose time falls outside every voiced region get f0 = 0.
F0Contour interpolate_f0(std::span<const F0Label> labels,
                         const Vector& frame_times_s, double max_gap_s);

/// 1 if f0 != 0 else 0; rejects negative input.
std::int32_t voicing_index(double f0_hz);

}  // namespace spt

#endif  // SPT_PROSODY_HPP_
