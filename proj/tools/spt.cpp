// tools/spt.cpp

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

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <thread>

#include "spt/config.hpp"
#include "spt/corpus.hpp"
#include "spt/fixture.hpp"
#include "spt/gmm.hpp"
#include "spt/perm_test.hpp"
#include "spt/rng.hpp"
#include "spt/version.hpp"

namespace fs = std::filesystem;
using namespace spt;

namespace {

/// Shared flags. Precedence: built-in defaults < --config file < explicit
/// flags < SPT_SEED environment variable (seed only).
class ConfigFlags {
 public:
  void attach(CLI::App* cmd) {
    config_ = cmd->add_option("--config", config_path_, "JSON config file");
    manifest_ = cmd->add_option("--manifest", manifest_path_,
                                "corpus manifest (JSON)");
    out_ = cmd->add_option("--out", out_dir_, "output directory");
    seed_ = cmd->add_option("--seed", seed_value_, "top-level seed");
    trials_ =
        cmd->add_option("--trials", trials_value_, "permutation trials D");
    components_ = cmd->add_option("--components", components_value_,
                                  "GMM components K");
    feature_ = cmd->add_option("--feature", feature_value_,
                               "prosodic feature: f0|energy|voicing|all");
    speaker_ =
        cmd->add_option("--speaker", speaker_value_, "speaker id or 'all'");
    threads_ = cmd->add_option("--threads", threads_value_,
                               "worker threads (0 = hardware)");
    sample_rate_ = cmd->add_option("--sample-rate", sample_rate_value_,
                                   "expected sample rate, Hz");
    frame_ms_ = cmd->add_option("--frame-ms", frame_ms_value_,
                                "frame duration, ms");
    overlap_ = cmd->add_option("--overlap", overlap_value_,
                               "frame overlap fraction");
    nfft_ = cmd->add_option("--nfft", nfft_value_, "DFT size");
    mel_filters_ = cmd->add_option("--mel-filters", mel_filters_value_,
                                   "mel filterbank size");
    num_mfcc_ = cmd->add_option("--mfcc", num_mfcc_value_,
                                "number of cepstral coefficients");
    preemph_ = cmd->add_option("--preemphasis", preemph_value_,
                               "pre-emphasis coefficient");
    max_gap_ = cmd->add_option("--max-gap-s", max_gap_value_,
                               "max voiced-run label gap, s");
  }

  RunConfig resolve() const {
    RunConfig cfg;
    if (config_->count() > 0) cfg = RunConfig::from_json_file(config_path_);
    if (manifest_->count() > 0) cfg.manifest_path = manifest_path_;
    if (out_->count() > 0) cfg.out_dir = out_dir_;
    if (seed_->count() > 0) cfg.seed = seed_value_;
    if (trials_->count() > 0) cfg.num_trials = trials_value_;
    if (components_->count() > 0) cfg.num_components = components_value_;
    if (threads_->count() > 0) cfg.threads = threads_value_;
    if (sample_rate_->count() > 0) cfg.dsp.sample_rate_hz = sample_rate_value_;
    if (frame_ms_->count() > 0) cfg.dsp.frame_ms = frame_ms_value_;
    if (overlap_->count() > 0) cfg.dsp.overlap = overlap_value_;
    if (nfft_->count() > 0) cfg.dsp.nfft = nfft_value_;
    if (mel_filters_->count() > 0)
      cfg.dsp.num_mel_filters = mel_filters_value_;
    if (num_mfcc_->count() > 0) cfg.dsp.num_mfcc = num_mfcc_value_;
    if (preemph_->count() > 0) cfg.dsp.preemphasis = preemph_value_;
    if (max_gap_->count() > 0) cfg.max_gap_s = max_gap_value_;
    if (feature_->count() > 0) {
      cfg.features = feature_value_ == "all"
                         ? std::vector<std::string>{"f0", "energy", "voicing"}
                         : std::vector<std::string>{feature_value_};
    }
    if (speaker_->count() > 0) {
      cfg.speakers = speaker_value_ == "all"
                         ? std::vector<std::string>{}
                         : std::vector<std::string>{speaker_value_};
    }
    if (const char* env = std::getenv("SPT_SEED")) {
      cfg.seed = std::strtoull(env, nullptr, 10);
    }
    cfg.validate();
    require(!cfg.manifest_path.empty(), ErrorCode::kConfig,
            "a corpus manifest is required (--manifest or config file)");
    require(!cfg.out_dir.empty(), ErrorCode::kConfig,
            "an output directory is required (--out or config file)");
    return cfg;
  }

 private:
  std::string config_path_, manifest_path_, out_dir_;
  std::string feature_value_ = "all", speaker_value_ = "all";
  std::uint64_t seed_value_ = 0;
  std::int64_t trials_value_ = 100000;
  int components_value_ = 40, threads_value_ = 0, nfft_value_ = 512;
  int mel_filters_value_ = 23, num_mfcc_value_ = 13;
  double sample_rate_value_ = 20000.0, frame_ms_value_ = 20.0;
  double overlap_value_ = 0.5, preemph_value_ = 0.97, max_gap_value_ = 0.033;
  CLI::Option *config_ = nullptr, *manifest_ = nullptr, *out_ = nullptr,
              *seed_ = nullptr, *trials_ = nullptr, *components_ = nullptr,
              *feature_ = nullptr, *speaker_ = nullptr, *threads_ = nullptr,
              *sample_rate_ = nullptr, *frame_ms_ = nullptr,
              *overlap_ = nullptr, *nfft_ = nullptr, *mel_filters_ = nullptr,
              *num_mfcc_ = nullptr, *preemph_ = nullptr, *max_gap_ = nullptr;
};

std::map<std::string, std::vector<UtteranceSpec>> selected_speakers(
    const CorpusManifest& manifest, const RunConfig& cfg) {
  if (cfg.speakers.empty()) return manifest.speakers;
  std::map<std::string, std::vector<UtteranceSpec>> selected;
  for (const std::string& speaker : cfg.speakers) {
    auto it = manifest.speakers.find(speaker);
    require(it != manifest.speakers.end(), ErrorCode::kInvalidInput,
            "speaker not in manifest: " + speaker);
    selected[speaker] = it->second;
  }
  return selected;
}

int resolved_threads(const RunConfig& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string model_path(const RunConfig& cfg, const std::string& speaker) {
  return (fs::path(cfg.out_dir) / ("gmm_" + speaker + ".json")).string();
}

GmmModel train_quantizer(const RunConfig& cfg, const std::string& speaker,
                         const SpeakerDataset& dataset) {
  GmmConfig gmm_cfg;
  gmm_cfg.num_components = cfg.num_components;
  gmm_cfg.seed = derive_seed(cfg.seed, "gmm:" + speaker);
  std::cerr << "[spt] training " << gmm_cfg.num_components
            << "-component GMM for speaker " << speaker << " on "
            << dataset.num_frames() << " frames\n";
  GmmModel model = gmm_fit(dataset.mfcc, speaker, gmm_cfg);
  std::cerr << "[spt]   log-likelihood " << model.train_log_likelihood
            << " after " << model.iteration_log_likelihoods.size()
            << " iterations\n";
  return model;
}

int cmd_extract(const RunConfig& cfg, const std::string& format) {
  const CorpusManifest manifest = CorpusManifest::load(cfg.manifest_path);
  const ExtractOptions options{cfg.dsp, cfg.max_gap_s};
  const fs::path feature_dir = fs::path(cfg.out_dir) / "features";
  fs::create_directories(feature_dir);

  int failures = 0;
  for (const auto& [speaker, utterances] : selected_speakers(manifest, cfg)) {
    for (const UtteranceSpec& utt : utterances) {
      try {
        const SpeakerDataset features =
            extract_utterance(speaker, utt, options);
        if (format == "csv" || format == "both") {
          write_feature_csv(features,
                            (feature_dir / (utt.id + ".csv")).string());
        }
        if (format == "jsonl" || format == "both") {
          write_feature_jsonl(features,
                              (feature_dir / (utt.id + ".jsonl")).string());
        }
        std::cerr << "[spt] extracted " << utt.id << ": "
                  << features.num_frames() << " frames\n";
      } catch (const Error& e) {
        std::cerr << "[spt] ERROR utterance '" << utt.id << "': " << e.what()
                  << "\n";
        ++failures;
      }
    }
  }
  return failures == 0 ? 0 : 1;
}

int cmd_train(const RunConfig& cfg) {
  const CorpusManifest manifest = CorpusManifest::load(cfg.manifest_path);
  const ExtractOptions options{cfg.dsp, cfg.max_gap_s};
  fs::create_directories(cfg.out_dir);
  for (const auto& [speaker, utterances] : selected_speakers(manifest, cfg)) {
    const SpeakerDataset dataset =
        build_speaker_dataset(speaker, utterances, options);
    const GmmModel model = train_quantizer(cfg, speaker, dataset);
    save_gmm(model, model_path(cfg, speaker));
    std::cout << "wrote " << model_path(cfg, speaker) << "\n";
  }
  return 0;
}

int cmd_test(const RunConfig& cfg) {
  const CorpusManifest manifest = CorpusManifest::load(cfg.manifest_path);
  const ExtractOptions options{cfg.dsp, cfg.max_gap_s};
  fs::create_directories(cfg.out_dir);
  const std::string fingerprint = cfg.to_json_string();

  std::vector<TestReport> reports;
  for (const auto& [speaker, utterances] : selected_speakers(manifest, cfg)) {
    const SpeakerDataset dataset =
        build_speaker_dataset(speaker, utterances, options);

    GmmModel model;
    const std::string mpath = model_path(cfg, speaker);
    if (fs::exists(mpath)) {
      model = load_gmm(mpath);
      std::cerr << "[spt] loaded quantizer " << mpath << "\n";
      if (model.num_components() != cfg.num_components) {
        std::cerr << "[spt]   note: cached model has K="
                  << model.num_components() << ", config asks K="
                  << cfg.num_components << "; using the cached model\n";
      }
    } else {
      model = train_quantizer(cfg, speaker, dataset);
      save_gmm(model, mpath);
    }

    for (const std::string& feature : cfg.features) {
      const PreparedSequences seqs =
          prepare_sequences(dataset, feature, model);
      PermTestOptions popts;
      popts.num_trials = cfg.num_trials;
      popts.seed = derive_seed(cfg.seed, "test:" + speaker + ":" + feature);
      popts.threads = resolved_threads(cfg);
      popts.progress = cfg.num_trials >= 10000;
      std::cerr << "[spt] testing speaker=" << speaker
                << " feature=" << feature << " N=" << seqs.x.size()
                << " D=" << popts.num_trials << "\n";
      NullDistribution null;
      TestReport report = run_test(seqs.x, seqs.y, popts, &null);
      report.config_fingerprint = fingerprint;

      const std::string stem = speaker + "_" + feature;
      save_report(report,
                  (fs::path(cfg.out_dir) / ("report_" + stem + ".json"))
                      .string());
      save_histogram_csv(
          null, (fs::path(cfg.out_dir) / ("hist_" + stem + ".csv")).string());
      write_sequence_csv(
          seqs.x, (fs::path(cfg.out_dir) / ("seq_" + stem + "_x.csv")).string());
      write_sequence_csv(
          seqs.y, (fs::path(cfg.out_dir) / ("seq_" + stem + "_y.csv")).string());
      reports.push_back(std::move(report));
    }
  }

  std::printf("%-10s %-8s %8s %6s %6s %12s %9s %13s\n", "speaker", "feature",
              "N", "|X|", "|Y|", "C_test", "p_count", "p_bound");
  for (const TestReport& r : reports) {
    const std::string note = r.p_note.empty() ? "" : "  (" + r.p_note + ")";
    std::printf("%-10s %-8s %8lld %6d %6d %12.4f %9lld %13.6g%s\n",
                r.speaker.c_str(), r.feature.c_str(),
                static_cast<long long>(r.sequence_length), r.x_alphabet,
                r.y_alphabet, r.c_test, static_cast<long long>(r.p_count),
                r.p_value_bound, note.c_str());
  }
  return 0;
}

int cmd_report(const std::string& path) {
  const TestReport r = load_report(path);
  std::printf("speaker          %s\n", r.speaker.c_str());
  std::printf("feature          %s\n", r.feature.c_str());
  std::printf("sequence length  %lld\n",
              static_cast<long long>(r.sequence_length));
  std::printf("alphabets        |X|=%d |Y|=%d\n", r.x_alphabet, r.y_alphabet);
  std::printf("estimator        %s\n",
              r.estimator == Estimator::kChaoShen ? "chao_shen" : "plugin");
  std::printf("C_test           %.6f\n", r.c_test);
  std::printf("p_count          %lld of %lld trials\n",
              static_cast<long long>(r.p_count),
              static_cast<long long>(r.num_trials));
  const std::string note = r.p_note.empty() ? "" : "  (" + r.p_note + ")";
  std::printf("p bound          %.6g%s\n", r.p_value_bound, note.c_str());
  std::printf("null C           min %.4f  max %.4f  mean %.4f  sd %.4f\n",
              r.null_summary.min, r.null_summary.max, r.null_summary.mean,
              r.null_summary.stddev);
  std::printf("seed             %llu\n",
              static_cast<unsigned long long>(r.seed));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Permutation tests of statistical independence between MFCC "
               "sequences and prosodic features"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  auto* fixture_cmd =
      app.add_subcommand("fixture", "generate a synthetic test corpus");
  std::string fixture_out;
  FixtureConfig fixture_cfg;
  fixture_cmd->add_option("--out", fixture_out, "output directory")
      ->required();
  fixture_cmd->add_option("--seed", fixture_cfg.seed, "fixture seed");
  fixture_cmd->add_option("--utterances", fixture_cfg.num_utterances,
                          "utterances per speaker");
  fixture_cmd->add_option("--duration-s", fixture_cfg.duration_s,
                          "utterance duration, s");
  fixture_cmd->add_option("--voiced-fraction", fixture_cfg.voiced_fraction,
                          "target voiced share of the timeline");
  fixture_cmd->add_option("--speakers", fixture_cfg.speakers,
                          "speaker ids to synthesize");

  auto* extract_cmd = app.add_subcommand(
      "extract", "extract per-utterance feature files from a corpus");
  ConfigFlags extract_flags;
  extract_flags.attach(extract_cmd);
  std::string extract_format = "csv";
  extract_cmd->add_option("--format", extract_format,
                          "feature file format: csv|jsonl|both")
      ->check(CLI::IsMember({"csv", "jsonl", "both"}));

  auto* train_cmd = app.add_subcommand(
      "train-quantizer", "fit the per-speaker GMM vector quantizers");
  ConfigFlags train_flags;
  train_flags.attach(train_cmd);

  auto* test_cmd = app.add_subcommand(
      "test", "run the permutation independence tests and write reports");
  ConfigFlags test_flags;
  test_flags.attach(test_cmd);

  auto* report_cmd =
      app.add_subcommand("report", "pretty-print a test report JSON file");
  std::string report_path;
  report_cmd->add_option("report", report_path, "report JSON path")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (fixture_cmd->parsed()) {
      const CorpusManifest manifest = synth_fixture(fixture_out, fixture_cfg);
      std::size_t total = 0;
      for (const auto& [speaker, utts] : manifest.speakers)
        total += utts.size();
      std::cout << "wrote " << total << " utterances under " << fixture_out
                << "\n";
      return 0;
    }
    if (extract_cmd->parsed()) {
      return cmd_extract(extract_flags.resolve(), extract_format);
    }
    if (train_cmd->parsed()) {
      return cmd_train(train_flags.resolve());
    }
    if (test_cmd->parsed()) {
      return cmd_test(test_flags.resolve());
    }
    if (report_cmd->parsed()) {
      return cmd_report(report_path);
    }
  } catch (const Error& e) {
    std::cerr << "spt: error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "spt: error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
