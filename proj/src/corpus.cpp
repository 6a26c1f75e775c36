// spt/corpus.cpp

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

#include "spt/corpus.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "format_util.hpp"
#include "spt/info_theory.hpp"
#include "spt/prosody.hpp"
#include "spt/wav.hpp"

namespace spt {

namespace fs = std::filesystem;

CorpusManifest CorpusManifest::load(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::kIo, "cannot open manifest: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kIo, "malformed manifest " + path + ": " + e.what());
  }
  require(j.is_object(), ErrorCode::kIo,
          "manifest must be an object mapping speaker to utterances: " + path);

  const fs::path base = fs::path(path).parent_path();
  auto resolve = [&base](const std::string& p) {
    const fs::path candidate(p);
    return candidate.is_absolute() ? candidate.string()
                                   : (base / candidate).string();
  };

  CorpusManifest manifest;
  for (const auto& [speaker, utterances] : j.items()) {
    require(utterances.is_array(), ErrorCode::kIo,
            "manifest entry for speaker '" + speaker + "' must be an array");
    for (const auto& u : utterances) {
      UtteranceSpec spec;
      spec.id = u.at("id").get<std::string>();
      spec.audio_path = resolve(u.at("audio").get<std::string>());
      spec.label_path = resolve(u.at("labels").get<std::string>());
      manifest.speakers[speaker].push_back(std::move(spec));
    }
  }
  return manifest;
}

void CorpusManifest::save(const std::string& path) const {
  const fs::path base = fs::path(path).parent_path();
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [speaker, utterances] : speakers) {
    auto& list = j[speaker] = nlohmann::ordered_json::array();
    for (const UtteranceSpec& u : utterances) {
      list.push_back({{"id", u.id},
                      {"audio", fs::relative(u.audio_path, base).string()},
                      {"labels", fs::relative(u.label_path, base).string()}});
    }
  }
  std::ofstream out(path);
  require(out.good(), ErrorCode::kIo, "cannot write manifest: " + path);
  out << j.dump(2) << "\n";
  require(out.good(), ErrorCode::kIo, "failed writing manifest: " + path);
}

SpeakerDataset extract_utterance(const std::string& speaker,
                                 const UtteranceSpec& utterance,
                                 const ExtractOptions& options) {
  const DspConfig& dsp = options.dsp;
  const SignalBuffer signal =
      read_wav(utterance.audio_path, dsp.sample_rate_hz);
  const std::vector<Frame> frames =
      frame_signal(signal, dsp.frame_length(), dsp.hop());
  const std::vector<F0Label> labels = read_f0_labels(utterance.label_path);
  const MfccExtractor extractor(dsp);

  const Index n = static_cast<Index>(frames.size());
  SpeakerDataset out;
  out.speaker = speaker;
  out.mfcc = Matrix(n, dsp.num_mfcc);
  out.log_energy = Vector(n);
  out.center_time_s = Vector(n);
  out.frame_index.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    // Energy comes from the raw frame; the MFCC pipeline works on its own
    // pre-emphasized, windowed copy.
    out.log_energy[i] = log_energy(frames[i], dsp.energy_floor);
    out.mfcc.row(i) = extractor.extract(frames[i]).transpose();
    out.center_time_s[i] = frames[i].center_time_s;
    out.frame_index.push_back(static_cast<std::int32_t>(i));
  }
  const F0Contour contour =
      interpolate_f0(labels, out.center_time_s, options.max_gap_s);
  out.f0_hz = contour.f0_hz;
  out.voicing = contour.voicing;
  out.utterance_frame_counts.emplace_back(utterance.id, n);
  return out;
}

SpeakerDataset build_speaker_dataset(const std::string& speaker,
                                     std::vector<UtteranceSpec> utterances,
                                     const ExtractOptions& options) {
  require(!utterances.empty(), ErrorCode::kInvalidInput,
          "build_speaker_dataset: no utterances for speaker " + speaker);
  std::sort(utterances.begin(), utterances.end(),
            [](const UtteranceSpec& a, const UtteranceSpec& b) {
              return a.id < b.id;
            });

  std::vector<SpeakerDataset> parts;
  parts.reserve(utterances.size());
  Index total = 0;
  for (const UtteranceSpec& u : utterances) {
    try {
      parts.push_back(extract_utterance(speaker, u, options));
    } catch (const Error& e) {
      fail(e.code(), "utterance '" + u.id + "': " + e.what());
    }
    total += parts.back().num_frames();
  }

  SpeakerDataset out;
  out.speaker = speaker;
  out.mfcc = Matrix(total, options.dsp.num_mfcc);
  out.log_energy = Vector(total);
  out.f0_hz = Vector(total);
  out.center_time_s = Vector(total);
  out.voicing.reserve(static_cast<std::size_t>(total));
  out.frame_index.reserve(static_cast<std::size_t>(total));
  Index at = 0;
  for (const SpeakerDataset& part : parts) {
    const Index n = part.num_frames();
    out.mfcc.middleRows(at, n) = part.mfcc;
    out.log_energy.segment(at, n) = part.log_energy;
    out.f0_hz.segment(at, n) = part.f0_hz;
    out.center_time_s.segment(at, n) = part.center_time_s;
    out.voicing.insert(out.voicing.end(), part.voicing.begin(),
                       part.voicing.end());
    out.frame_index.insert(out.frame_index.end(), part.frame_index.begin(),
                           part.frame_index.end());
    out.utterance_frame_counts.push_back(part.utterance_frame_counts.front());
    at += n;
  }
  return out;
}

PreparedSequences prepare_sequences(const SpeakerDataset& dataset,
                                    const std::string& feature,
                                    const GmmModel& quantizer) {
  require(quantizer.speaker == dataset.speaker, ErrorCode::kInvalidInput,
          "prepare_sequences: quantizer for speaker '" + quantizer.speaker +
              "' cannot quantize data of speaker '" + dataset.speaker + "'");
  require(feature == "f0" || feature == "energy" || feature == "voicing",
          ErrorCode::kConfig, "unknown prosodic feature: " + feature);
  require(dataset.num_frames() > 0, ErrorCode::kInvalidInput,
          "prepare_sequences: empty dataset");

  const bool voiced_only = feature != "voicing";
  std::vector<std::int64_t> raw_x;
  std::vector<std::int64_t> raw_y;
  raw_x.reserve(static_cast<std::size_t>(dataset.num_frames()));
  raw_y.reserve(static_cast<std::size_t>(dataset.num_frames()));
  for (Index i = 0; i < dataset.num_frames(); ++i) {
    if (voiced_only && dataset.f0_hz[i] == 0.0) continue;
    raw_x.push_back(
        gmm_assign(quantizer, dataset.mfcc.row(i).transpose()));
    if (feature == "f0") {
      raw_y.push_back(round_quantize(dataset.f0_hz[i]));
    } else if (feature == "energy") {
      raw_y.push_back(round_quantize(dataset.log_energy[i]));
    } else {
      raw_y.push_back(dataset.voicing[static_cast<std::size_t>(i)]);
    }
  }
  require(!raw_x.empty(), ErrorCode::kInvalidInput,
          "prepare_sequences: no voiced frames for feature '" + feature +
              "' of speaker " + dataset.speaker);

  PreparedSequences prepared;
  prepared.x = compact_alphabet(raw_x);
  prepared.x.source = "mfcc_id";
  prepared.x.speaker = dataset.speaker;
  prepared.y = compact_alphabet(raw_y);
  prepared.y.source = feature;
  prepared.y.speaker = dataset.speaker;
  return prepared;
}

void write_feature_csv(const SpeakerDataset& utterance,
                       const std::string& path) {
  std::ofstream out(path);
  require(out.good(), ErrorCode::kIo, "cannot write feature file: " + path);
  out << "frame_index,center_time_s,log_energy";
  for (Index z = 1; z <= utterance.mfcc.cols(); ++z) out << ",mfcc_" << z;
  out << ",f0,voicing\n";
  for (Index i = 0; i < utterance.num_frames(); ++i) {
    out << utterance.frame_index[static_cast<std::size_t>(i)] << ','
        << detail::format_double(utterance.center_time_s[i]) << ','
        << detail::format_double(utterance.log_energy[i]);
    for (Index z = 0; z < utterance.mfcc.cols(); ++z) {
      out << ',' << detail::format_double(utterance.mfcc(i, z));
    }
    out << ',' << detail::format_double(utterance.f0_hz[i]) << ','
        << utterance.voicing[static_cast<std::size_t>(i)] << '\n';
  }
  require(out.good(), ErrorCode::kIo, "failed writing feature file: " + path);
}

void write_feature_jsonl(const SpeakerDataset& utterance,
                         const std::string& path) {
  std::ofstream out(path);
  require(out.good(), ErrorCode::kIo, "cannot write feature file: " + path);
  for (Index i = 0; i < utterance.num_frames(); ++i) {
    nlohmann::ordered_json record;
    record["frame_index"] = utterance.frame_index[static_cast<std::size_t>(i)];
    record["center_time_s"] = utterance.center_time_s[i];
    record["log_energy"] = utterance.log_energy[i];
    for (Index z = 0; z < utterance.mfcc.cols(); ++z) {
      record["mfcc_" + std::to_string(z + 1)] = utterance.mfcc(i, z);
    }
    record["f0"] = utterance.f0_hz[i];
    record["voicing"] = utterance.voicing[static_cast<std::size_t>(i)];
    out << record.dump() << '\n';
  }
  require(out.good(), ErrorCode::kIo, "failed writing feature file: " + path);
}

}  // namespace spt
