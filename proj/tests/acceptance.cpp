// tests/acceptance.cpp

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

// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
// the binary exits nonzero if any criterion fails. Criterion 9 runs only
// when SPT_CORPUS_MANIFEST points at the original corpus and is reported
// as SKIP otherwise.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "spt/corpus.hpp"
#include "spt/dsp_features.hpp"
#include "spt/fixture.hpp"
#include "spt/gmm.hpp"
#include "spt/info_theory.hpp"
#include "spt/perm_test.hpp"
#include "spt/rng.hpp"

using namespace spt;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  bool skipped = false;
  std::string detail;
};

double elapsed_s(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

QuantizedSequence make_seq(std::vector<std::int32_t> symbols,
                           std::int32_t alphabet) {
  QuantizedSequence s;
  s.symbols = std::move(symbols);
  s.alphabet_size = alphabet;
  return s;
}

// --- criterion 1: estimator vs brute-force oracle ------------------------

// Term-by-term evaluation of the Good-Turing correction and the
// coverage-adjusted entropy, independent of the library code paths.
double oracle_chao_shen(const std::map<int, long>& counts) {
  long n = 0, singles = 0;
  for (const auto& [s, c] : counts) {
    n += c;
    singles += (c == 1);
  }
  const long m = (singles == n) ? n - 1 : singles;
  double h = 0.0;
  for (const auto& [s, c] : counts) {
    if (c == 0) continue;
    const double p_hat = static_cast<double>(c) / static_cast<double>(n);
    const double p_gt = (1.0 - static_cast<double>(m) / n) * p_hat;
    h -= p_gt * std::log2(p_gt) /
         (1.0 - std::pow(1.0 - p_gt, static_cast<double>(n)));
  }
  return h;
}

Outcome criterion_oracle_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  SplitMix64 rng(0xACCE5501);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int alphabet = 1 + static_cast<int>(rng.next_below(8));
    const int n = 1 + static_cast<int>(rng.next_below(20));
    std::map<int, long> ref;
    std::vector<std::int64_t> counts(static_cast<std::size_t>(alphabet), 0);
    for (int i = 0; i < n; ++i) {
      const int s = static_cast<int>(rng.next_below(alphabet));
      ++ref[s];
      ++counts[static_cast<std::size_t>(s)];
    }
    const double expected = oracle_chao_shen(ref);
    const double actual = chao_shen_entropy(CountTable::from_counts(counts));
    worst = std::max(worst, std::abs(actual - expected));
  }
  const double secs = elapsed_s(start);
  Outcome out;
  out.pass = worst < 1e-10 && secs < 5.0;
  std::ostringstream d;
  d << "max |diff| = " << worst << " over 1000 tables, " << secs << " s";
  out.detail = d.str();
  return out;
}

// --- criterion 2: hand-computed anchors ----------------------------------

Outcome criterion_anchors() {
  const double a = chao_shen_entropy(CountTable::from_counts({2, 2}));
  const double b = chao_shen_entropy(CountTable::from_counts({3}));
  const double c = chao_shen_entropy(CountTable::from_counts({2, 1}));
  Outcome out;
  out.pass = std::abs(a - 16.0 / 15.0) < 1e-6 && std::abs(b) < 1e-6 &&
             std::abs(c - 1.5382695755477678) < 1e-6;
  std::ostringstream d;
  d << "{2,2}=" << a << " {3}=" << b << " {2,1}=" << c;
  out.detail = d.str();
  return out;
}

// --- criterion 3: DCT null space and cosine recovery ----------------------

Outcome criterion_dct() {
  Outcome out;
  out.pass = true;
  const Vector zero_case = dct_mfcc(Vector::Constant(23, 2.5), 13);
  double worst_null = zero_case.cwiseAbs().maxCoeff();

  double worst_probe = 0.0;
  for (int probe = 1; probe <= 2; ++probe) {
    Vector fb(23);
    for (Index h = 1; h <= 23; ++h) {
      fb[h - 1] =
          std::exp(std::cos(std::numbers::pi * probe * (h - 0.5) / 23.0));
    }
    const Vector coeffs = dct_mfcc(fb, 13);
    // Direct-summation oracle for the expected coefficient.
    double expected = 0.0;
    for (Index h = 1; h <= 23; ++h) {
      expected += std::cos(std::numbers::pi * probe * (h - 0.5) / 23.0) *
                  std::cos(std::numbers::pi * probe * (h - 0.5) / 23.0);
    }
    worst_probe = std::max(
        {worst_probe, std::abs(coeffs[probe - 1] - expected),
         std::abs(coeffs[probe - 1] - 11.5)});
    for (int z = 1; z <= 13; ++z) {
      if (z != probe) worst_null = std::max(worst_null, std::abs(coeffs[z - 1]));
    }
  }
  out.pass = worst_null < 1e-9 && worst_probe < 1e-9;
  std::ostringstream d;
  d << "max |null coeff| = " << worst_null
    << ", max recovery error = " << worst_probe;
  out.detail = d.str();
  return out;
}

// --- criterion 4: EM monotonicity -----------------------------------------

Outcome criterion_em_monotonic() {
  double worst_drop = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SplitMix64 rng(9000 + seed);
    // Three overlapping clusters in 13 dims.
    Matrix x(240, 13);
    for (Index i = 0; i < x.rows(); ++i) {
      const double shift = static_cast<double>(i % 3) * 2.5;
      for (Index d = 0; d < 13; ++d) {
        x(i, d) = shift + rng.next_gaussian();
      }
    }
    GmmConfig cfg;
    cfg.num_components = 3;
    cfg.seed = seed;
    const GmmModel model = gmm_fit(x, "synthetic", cfg);
    for (std::size_t i = 1; i < model.iteration_log_likelihoods.size(); ++i) {
      worst_drop = std::max(worst_drop,
                            model.iteration_log_likelihoods[i - 1] -
                                model.iteration_log_likelihoods[i]);
    }
  }
  Outcome out;
  out.pass = worst_drop <= 1e-8;
  std::ostringstream d;
  d << "worst per-iteration decrease = " << worst_drop << " over 20 fits";
  out.detail = d.str();
  return out;
}

// --- criterion 5: test power on deterministic dependence -------------------

Outcome criterion_power() {
  const auto start = std::chrono::steady_clock::now();
  std::vector<std::int32_t> xs, ys;
  for (int i = 0; i < 2000; ++i) {
    xs.push_back(i % 4);
    ys.push_back((i % 4) % 2);
  }
  const auto x = make_seq(xs, 4);
  const auto y = make_seq(ys, 2);
  int rejections = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    PermTestOptions opts;
    opts.num_trials = 1000;
    opts.seed = derive_seed(0xACCE5505, "power", seed);
    opts.threads = 2;
    const TestReport report = run_test(x, y, opts);
    if (report.p_count == 0 && report.c_test == 1.0) ++rejections;
  }
  const double secs = elapsed_s(start);
  Outcome out;
  out.pass = rejections == 100 && secs < 60.0;
  std::ostringstream d;
  d << rejections << "/100 rejections at D=1e3, " << secs << " s";
  out.detail = d.str();
  return out;
}

// --- criterion 6: calibration on independent data --------------------------

Outcome criterion_calibration() {
  int below = 0;
  for (std::uint64_t run = 0; run < 100; ++run) {
    SplitMix64 data_rng(derive_seed(0xACCE5506, "calib-data", run));
    std::vector<std::int32_t> xs, ys;
    for (int i = 0; i < 2000; ++i) {
      xs.push_back(static_cast<std::int32_t>(data_rng.next_below(4)));
      ys.push_back(static_cast<std::int32_t>(data_rng.next_below(2)));
    }
    PermTestOptions opts;
    opts.num_trials = 999;
    opts.seed = derive_seed(0xACCE5506, "calib-test", run);
    opts.threads = 2;
    const TestReport report =
        run_test(make_seq(xs, 4), make_seq(ys, 2), opts);
    if (report.p_value_bound < 0.05) ++below;
  }
  const double fraction = below / 100.0;
  Outcome out;
  out.pass = fraction >= 0.0 && fraction <= 0.10;
  std::ostringstream d;
  d << "fraction of bounds < 0.05: " << fraction;
  out.detail = d.str();
  return out;
}

// --- criterion 7: full-pipeline determinism --------------------------------

#ifndef SPT_CLI_PATH
#define SPT_CLI_PATH "spt"
#endif

int run_cli(const std::string& args) {
  const std::string cmd =
      std::string(SPT_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str());
}

Outcome criterion_determinism() {
  Outcome out;
  const fs::path base = fs::temp_directory_path() / "spt_acceptance_det";
  fs::remove_all(base);
  fs::create_directories(base);
  const fs::path work = base / "work";
  const fs::path saved = base / "saved";

  auto run_pipeline = [&]() -> bool {
    fs::remove_all(work);
    const std::string corpus = (work / "corpus").string();
    const std::string outdir = (work / "out").string();
    if (run_cli("fixture --out " + corpus +
                " --seed 7 --utterances 2 --duration-s 1.0") != 0) {
      return false;
    }
    const std::string common = " --manifest " + corpus + "/manifest.json" +
                               " --out " + outdir +
                               " --seed 99 --components 6 --trials 400"
                               " --threads 2";
    if (run_cli("extract" + common) != 0) return false;
    if (run_cli("train-quantizer" + common) != 0) return false;
    if (run_cli("test" + common) != 0) return false;
    return true;
  };

  if (!run_pipeline()) {
    out.detail = "first pipeline run failed";
    return out;
  }
  fs::copy(work, saved, fs::copy_options::recursive);
  if (!run_pipeline()) {
    out.detail = "second pipeline run failed";
    return out;
  }

  std::size_t compared = 0;
  for (auto it = fs::recursive_directory_iterator(saved);
       it != fs::recursive_directory_iterator(); ++it) {
    if (!it->is_regular_file()) continue;
    const fs::path rel = fs::relative(it->path(), saved);
    ++compared;
    if (slurp(it->path()) != slurp(work / rel)) {
      out.detail = "mismatch in " + rel.string();
      fs::remove_all(base);
      return out;
    }
  }
  fs::remove_all(base);
  out.pass = compared > 0;
  std::ostringstream d;
  d << compared << " files byte-identical across reruns";
  out.detail = d.str();
  return out;
}

// --- criterion 8: voicing cardinality bound under the plug-in oracle -------

Outcome criterion_voicing_bound() {
  const fs::path base = fs::temp_directory_path() / "spt_acceptance_voicing";
  fs::remove_all(base);
  FixtureConfig fixture_cfg;
  fixture_cfg.seed = 7;
  fixture_cfg.num_utterances = 2;
  fixture_cfg.duration_s = 1.0;
  const CorpusManifest manifest =
      synth_fixture(base.string(), fixture_cfg);

  Outcome out;
  out.pass = true;
  double lo = 2.0, hi = 1.0;
  for (const auto& [speaker, utterances] : manifest.speakers) {
    const SpeakerDataset dataset =
        build_speaker_dataset(speaker, utterances, ExtractOptions{});
    GmmConfig gmm_cfg;
    gmm_cfg.num_components = 6;
    gmm_cfg.seed = derive_seed(99, "gmm:" + speaker);
    const GmmModel model = gmm_fit(dataset.mfcc, speaker, gmm_cfg);
    const PreparedSequences seqs =
        prepare_sequences(dataset, "voicing", model);
    PermTestOptions opts;
    opts.num_trials = 500;
    opts.seed = derive_seed(99, "voicing-bound:" + speaker);
    opts.estimator = Estimator::kPlugIn;
    opts.threads = 2;
    NullDistribution null;
    const TestReport report = run_test(seqs.x, seqs.y, opts, &null);
    lo = std::min({lo, report.c_test,
                   *std::min_element(null.samples.begin(),
                                     null.samples.end())});
    hi = std::max({hi, report.c_test,
                   *std::max_element(null.samples.begin(),
                                     null.samples.end())});
  }
  fs::remove_all(base);
  out.pass = lo >= 1.0 && hi <= 2.0 + 1e-9;
  std::ostringstream d;
  d << "effective cardinalities in [" << lo << ", " << hi << "]";
  out.detail = d.str();
  return out;
}

// --- criterion 9: conditional reproduction on the original corpus ----------

Outcome criterion_corpus() {
  const char* manifest_path = std::getenv("SPT_CORPUS_MANIFEST");
  Outcome out;
  if (manifest_path == nullptr) {
    out.skipped = true;
    out.detail = "SPT_CORPUS_MANIFEST not set; original corpus not supplied";
    return out;
  }

  const std::map<std::pair<std::string, std::string>, double> reference_values = {
      {{"female", "f0"}, 103.87},     {{"male", "f0"}, 77.35},
      {{"female", "energy"}, 3.67},   {{"male", "energy"}, 3.35},
      {{"female", "voicing"}, 1.44},  {{"male", "voicing"}, 1.47},
  };

  const CorpusManifest manifest = CorpusManifest::load(manifest_path);
  std::uint64_t seed = 0;
  if (const char* env_seed = std::getenv("SPT_SEED")) {
    seed = std::strtoull(env_seed, nullptr, 10);
  }

  out.pass = true;
  std::ostringstream d;
  for (const std::string speaker : {"female", "male"}) {
    auto it = manifest.speakers.find(speaker);
    if (it == manifest.speakers.end()) {
      out.pass = false;
      d << "speaker '" << speaker << "' missing from manifest; ";
      continue;
    }
    const SpeakerDataset dataset =
        build_speaker_dataset(speaker, it->second, ExtractOptions{});
    GmmConfig gmm_cfg;
    gmm_cfg.num_components = 40;
    gmm_cfg.seed = derive_seed(seed, "gmm:" + speaker);
    const GmmModel model = gmm_fit(dataset.mfcc, speaker, gmm_cfg);
    for (const std::string feature : {"f0", "energy", "voicing"}) {
      const PreparedSequences seqs =
          prepare_sequences(dataset, feature, model);
      PermTestOptions opts;
      opts.num_trials = 100000;
      opts.seed = derive_seed(seed, "test:" + speaker + ":" + feature);
      opts.threads = 8;
      const TestReport report = run_test(seqs.x, seqs.y, opts);
      const double expected = reference_values.at({speaker, feature});
      const bool c_ok = std::abs(report.c_test - expected) <= 0.15 * expected;
      const bool p_ok = report.p_count == 0;
      if (!c_ok || !p_ok) out.pass = false;
      d << speaker << "/" << feature << ": C=" << report.c_test
        << " (reference " << expected << (c_ok ? ", ok" : ", OUT OF RANGE")
        << "), p_count=" << report.p_count << (p_ok ? "" : " NONZERO")
        << "; ";
    }
  }
  out.detail = d.str();
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "estimator oracle equivalence", criterion_oracle_equivalence},
      {2, "hand-computed entropy anchors", criterion_anchors},
      {3, "DCT null space and cosine recovery", criterion_dct},
      {4, "EM log-likelihood monotonicity", criterion_em_monotonic},
      {5, "power on deterministic dependence", criterion_power},
      {6, "p-value calibration on independent data", criterion_calibration},
      {7, "full-pipeline determinism", criterion_determinism},
      {8, "voicing cardinality bound (plug-in oracle)",
       criterion_voicing_bound},
      {9, "reference value reproduction on the original corpus",
       criterion_corpus},
  };

  bool all_pass = true;
  for (const Criterion& c : criteria) {
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    const char* tag =
        outcome.skipped ? "SKIP" : (outcome.pass ? "PASS" : "FAIL");
    std::cout << "[" << tag << "] criterion " << c.id << ": " << c.name
              << " -- " << outcome.detail << "\n";
    if (!outcome.skipped && !outcome.pass) all_pass = false;
  }
  return all_pass ? 0 : 1;
}
