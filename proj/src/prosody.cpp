// spt/prosody.cpp

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

#include "spt/prosody.hpp"

#include <fstream>
#include <sstream>

namespace spt {

namespace {

void check_labels(std::span<const F0Label> labels) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    require(labels[i].time_s >= 0.0 && labels[i].f0_hz >= 0.0,
            ErrorCode::kInvalidInput, "F0 labels: negative time or f0");
    if (i > 0) {
      require(labels[i].time_s > labels[i - 1].time_s,
              ErrorCode::kInvalidInput,
              "F0 labels: times must be strictly increasing");
    }
  }
}

struct VoicedRun {
  std::size_t first = 0;  // label indices, inclusive
  std::size_t last = 0;
};

// Maximal runs of positive-f0 labels with inter-label gap <= max_gap_s.
// A zero-f0 label is an explicit unvoiced marker and terminates a run.
std::vector<VoicedRun> voiced_runs(std::span<const F0Label> labels,
                                   double max_gap_s) {
  check_labels(labels);
  require(max_gap_s > 0.0, ErrorCode::kInvalidInput,
          "voiced regions: max_gap must be positive");
  std::vector<VoicedRun> runs;
  bool open = false;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].f0_hz <= 0.0) {
      open = false;
      continue;
    }
    const bool continues =
        open &&
        labels[i].time_s - labels[runs.back().last].time_s <= max_gap_s;
    if (continues) {
      runs.back().last = i;
    } else {
      runs.push_back({i, i});
      open = true;
    }
  }
  return runs;
}

}  // namespace

std::vector<F0Label> read_f0_labels(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::kIo, "cannot open F0 label file: " + path);
  std::vector<F0Label> labels;
  std::string line;
  while (std::getline(in, line)) {
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::istringstream fields(line);
    F0Label label;
    if (!(fields >> label.time_s >> label.f0_hz)) {
      fail(ErrorCode::kInvalidInput,
           "malformed F0 label line in " + path + ": " + line);
    }
    labels.push_back(label);
  }
  check_labels(labels);
  return labels;
}

std::vector<TimeInterval> voiced_regions(std::span<const F0Label> labels,
                                         double max_gap_s) {
  std::vector<TimeInterval> regions;
  for (const VoicedRun& run : voiced_runs(labels, max_gap_s)) {
    regions.push_back({labels[run.first].time_s, labels[run.last].time_s});
  }
  return regions;
}

F0Contour interpolate_f0(std::span<const F0Label> labels,
                         const Vector& frame_times_s, double max_gap_s) {
  const std::vector<VoicedRun> runs = voiced_runs(labels, max_gap_s);
  for (Index i = 1; i < frame_times_s.size(); ++i) {
    require(frame_times_s[i] > frame_times_s[i - 1], ErrorCode::kInvalidInput,
            "interpolate_f0: frame times must be increasing");
  }

  F0Contour contour;
  contour.f0_hz = Vector::Zero(frame_times_s.size());
  contour.voicing.assign(static_cast<std::size_t>(frame_times_s.size()), 0);

  std::size_t run_idx = 0;
  std::size_t seg = 0;  // left label index of the current bracketing pair
  for (Index i = 0; i < frame_times_s.size(); ++i) {
    const double t = frame_times_s[i];
    while (run_idx < runs.size() && labels[runs[run_idx].last].time_s < t) {
      ++run_idx;
      seg = 0;
    }
    if (run_idx >= runs.size()) break;
    const VoicedRun& run = runs[run_idx];
    if (t < labels[run.first].time_s) continue;  // unvoiced gap before run

    if (seg < run.first) seg = run.first;
    while (seg + 1 < run.last && labels[seg + 1].time_s < t) ++seg;
    const F0Label& a = labels[seg];
    const F0Label& b = labels[std::min(seg + 1, run.last)];
    double f0;
    if (run.first == run.last || t <= a.time_s) {
      f0 = a.f0_hz;
    } else if (t >= b.time_s) {
      f0 = b.f0_hz;
    } else {
      const double u = (t - a.time_s) / (b.time_s - a.time_s);
      f0 = (1.0 - u) * a.f0_hz + u * b.f0_hz;
    }
    contour.f0_hz[i] = f0;
    contour.voicing[static_cast<std::size_t>(i)] = voicing_index(f0);
  }
  return contour;
}

std::int32_t voicing_index(double f0_hz) {
  require(f0_hz >= 0.0, ErrorCode::kInvalidInput,
          "voicing_index: negative f0");
  return f0_hz != 0.0 ? 1 : 0;
}

}  // namespace spt
