// spt/corpus.hpp

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

#ifndef SPT_CORPUS_HPP_
#define SPT_CORPUS_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "spt/dsp_features.hpp"
#include "spt/gmm.hpp"
#include "spt/quantize.hpp"
#include "spt/types.hpp"

namespace spt {

struct UtteranceSpec {
  std::string id;
  std::string audio_path;
  std::string label_path;
};

/// speaker -> utterances. Relative paths resolve against the manifest's
/// own directory.
struct CorpusManifest {
  std::map<std::string, std::vector<UtteranceSpec>> speakers;

  static CorpusManifest load(const std::string& path);
  void save(const std::string& path) const;
};

struct ExtractOptions {
  DspConfig dsp;
  double max_gap_s = 0.033;  // voiced-run gap for F0 interpolation
};

/// Column-oriented per-frame features of one speaker, concatenated across
/// utterances in lexicographic id order. No frame spans two utterances.
struct SpeakerDataset {
  std::string speaker;
  Matrix mfcc;          // num_frames x num_mfcc
  Vector log_energy;    // num_frames
  Vector f0_hz;         // num_frames, 0 when unvoiced
  std::vector<std::int32_t> voicing;  // num_frames
  Vector center_time_s;               // within-utterance frame centers
  std::vector<std::int32_t> frame_index;  // within-utterance frame index
  std::vector<std::pair<std::string, Index>> utterance_frame_counts;

  Index num_frames() const { return log_energy.size(); }
};

/// Features of a single utterance (same layout, one entry of
/// utterance_frame_counts).
SpeakerDataset extract_utterance(const std::string& speaker,
                                 const UtteranceSpec& utterance,
                                 const ExtractOptions& options);

/// Extracts every utterance (sorted by id) and concatenates. Errors are
/// rethrown with the offending utterance id attached.
SpeakerDataset build_speaker_dataset(const std::string& speaker,
                                     std::vector<UtteranceSpec> utterances,
                                     const ExtractOptions& options);

struct PreparedSequences {
  QuantizedSequence x;  // GMM component ids of the MFCC vectors
  QuantizedSequence y;  // quantized prosodic feature, aligned with x
};

/// Builds the aligned (S_X, S_Y_test) pair for one prosodic feature.
/// For "f0" and "energy" the unvoiced frames are removed from both
/// sequences in lockstep; for "voicing" every frame is kept. The quantizer
/// must carry the dataset's speaker tag.
PreparedSequences prepare_sequences(const SpeakerDataset& dataset,
                                    const std::string& feature,
                                    const GmmModel& quantizer);

/// Feature cache row order: frame_index, center_time_s, log_energy,
/// mfcc_1..mfcc_13, f0, voicing.
void write_feature_csv(const SpeakerDataset& utterance,
                       const std::string& path);
void write_feature_jsonl(const SpeakerDataset& utterance,
                         const std::string& path);

}  // namespace spt

#endif  // SPT_CORPUS_HPP_
