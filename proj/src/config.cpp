// spt/config.cpp

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

#include "spt/config.hpp"

#include <json.hpp>

#include <fstream>

namespace spt {

void RunConfig::validate() const {
  require(dsp.sample_rate_hz > 0.0, ErrorCode::kConfig,
          "sample_rate_hz must be positive");
  require(dsp.frame_ms > 0.0, ErrorCode::kConfig, "frame_ms must be positive");
  require(dsp.overlap >= 0.0 && dsp.overlap < 1.0, ErrorCode::kConfig,
          "overlap must be in [0, 1)");
  require(dsp.frame_length() >= 2, ErrorCode::kConfig, "frame too short");
  require(dsp.hop() >= 1, ErrorCode::kConfig, "hop must be at least 1 sample");
  require(dsp.nfft >= dsp.frame_length(), ErrorCode::kConfig,
          "nfft must be at least the frame length");
  require(dsp.num_mel_filters >= 1, ErrorCode::kConfig,
          "num_mel_filters must be >= 1");
  require(dsp.num_mfcc >= 1 && dsp.num_mfcc <= dsp.num_mel_filters,
          ErrorCode::kConfig, "num_mfcc must be in [1, num_mel_filters]");
  require(dsp.preemphasis >= 0.0 && dsp.preemphasis < 1.0, ErrorCode::kConfig,
          "preemphasis must be in [0, 1)");
  require(max_gap_s > 0.0, ErrorCode::kConfig, "max_gap_s must be positive");
  require(num_components >= 1, ErrorCode::kConfig, "K must be >= 1");
  require(num_trials >= 1, ErrorCode::kConfig, "trials must be >= 1");
  require(threads >= 0, ErrorCode::kConfig, "threads must be >= 0");
  for (const std::string& f : features) {
    require(f == "f0" || f == "energy" || f == "voicing", ErrorCode::kConfig,
            "unknown feature: " + f);
  }
}

namespace {

nlohmann::ordered_json to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["manifest"] = c.manifest_path;
  j["out"] = c.out_dir;
  j["sample_rate_hz"] = c.dsp.sample_rate_hz;
  j["frame_ms"] = c.dsp.frame_ms;
  j["overlap"] = c.dsp.overlap;
  j["nfft"] = c.dsp.nfft;
  j["num_mel_filters"] = c.dsp.num_mel_filters;
  j["num_mfcc"] = c.dsp.num_mfcc;
  j["preemphasis"] = c.dsp.preemphasis;
  j["max_gap_s"] = c.max_gap_s;
  j["components"] = c.num_components;
  j["trials"] = c.num_trials;
  j["seed"] = c.seed;
  j["features"] = c.features;
  j["speakers"] = c.speakers;
  j["threads"] = c.threads;
  return j;
}

}  // namespace

std::string RunConfig::to_json_string() const { return to_json(*this).dump(); }

RunConfig RunConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::kIo, "cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kIo, "malformed config " + path + ": " + e.what());
  }
  RunConfig c;
  auto get = [&j](const char* key, auto& target) {
    if (j.contains(key)) target = j.at(key).get<std::decay_t<decltype(target)>>();
  };
  get("manifest", c.manifest_path);
  get("out", c.out_dir);
  get("sample_rate_hz", c.dsp.sample_rate_hz);
  get("frame_ms", c.dsp.frame_ms);
  get("overlap", c.dsp.overlap);
  get("nfft", c.dsp.nfft);
  get("num_mel_filters", c.dsp.num_mel_filters);
  get("num_mfcc", c.dsp.num_mfcc);
  get("preemphasis", c.dsp.preemphasis);
  get("max_gap_s", c.max_gap_s);
  get("components", c.num_components);
  get("trials", c.num_trials);
  get("seed", c.seed);
  get("features", c.features);
  get("speakers", c.speakers);
  get("threads", c.threads);
  return c;
}

}  // namespace spt
