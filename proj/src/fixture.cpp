// spt/fixture.cpp

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

#include "spt/fixture.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "format_util.hpp"
#include "spt/prosody.hpp"
#include "spt/rng.hpp"
#include "spt/wav.hpp"

namespace spt {

namespace fs = std::filesystem;

namespace {

constexpr double kLabelStep = 0.005;    // s between synthetic F0 labels
constexpr double kLabelMargin = 0.0025; // labels start/stop inside a span
constexpr double kFadeTime = 0.02;      // raised-cosine edges of a span

double speaker_base_f0(const std::string& speaker, SplitMix64& rng) {
  if (speaker == "female") return 210.0;
  if (speaker == "male") return 120.0;
  return 100.0 + 120.0 * rng.next_double();
}

struct Segment {
  bool voiced = false;
  double begin_s = 0.0;
  double end_s = 0.0;
  // Voiced-span F0 trajectory: base * (1 + depth * sin(2*pi*rate*t + phase))
  double f0_base = 0.0;
  double f0_rate = 0.0;
  double f0_phase = 0.0;

  double f0_at(double t) const {
    return f0_base *
           (1.0 + 0.12 * std::sin(2.0 * std::numbers::pi * f0_rate *
                                      (t - begin_s) +
                                  f0_phase));
  }
};

std::vector<Segment> plan_segments(double duration_s, double voiced_fraction,
                                   double base_f0, SplitMix64& rng) {
  // Alternating spans; unvoiced mean length scaled so the voiced share of
  // the timeline lands near the requested fraction.
  const double mean_voiced = 0.25;
  const double mean_unvoiced =
      mean_voiced * (1.0 - voiced_fraction) / std::max(voiced_fraction, 0.05);
  std::vector<Segment> segments;
  bool voiced = rng.next_double() < voiced_fraction;
  double t = 0.0;
  while (t < duration_s) {
    Segment seg;
    seg.voiced = voiced;
    seg.begin_s = t;
    const double mean = voiced ? mean_voiced : mean_unvoiced;
    seg.end_s = std::min(duration_s, t + mean * (0.6 + 0.8 * rng.next_double()));
    if (voiced) {
      seg.f0_base = base_f0 * (0.9 + 0.2 * rng.next_double());
      seg.f0_rate = 1.5 + 2.0 * rng.next_double();
      seg.f0_phase = 2.0 * std::numbers::pi * rng.next_double();
    }
    segments.push_back(seg);
    t = seg.end_s;
    voiced = !voiced;
  }
  return segments;
}

void synth_utterance(const std::string& wav_path,
                     const std::string& label_path, double duration_s,
                     double voiced_fraction, double sample_rate_hz,
                     const std::string& speaker, SplitMix64& rng) {
  const double base_f0 = speaker_base_f0(speaker, rng);
  const std::vector<Segment> segments =
      plan_segments(duration_s, voiced_fraction, base_f0, rng);

  const Index n = static_cast<Index>(std::llround(duration_s * sample_rate_hz));
  SignalBuffer signal;
  signal.sample_rate_hz = sample_rate_hz;
  signal.samples = Vector::Zero(n);

  std::vector<F0Label> labels;
  for (const Segment& seg : segments) {
    const Index i0 = static_cast<Index>(std::llround(seg.begin_s * sample_rate_hz));
    const Index i1 =
        std::min(n, static_cast<Index>(std::llround(seg.end_s * sample_rate_hz)));
    if (seg.voiced) {
      double phase = 2.0 * std::numbers::pi * rng.next_double();
      for (Index i = i0; i < i1; ++i) {
        const double t = static_cast<double>(i) / sample_rate_hz;
        phase += 2.0 * std::numbers::pi * seg.f0_at(t) / sample_rate_hz;
        // Five harmonics with geometrically decaying amplitudes.
        double s = 0.0;
        double h_amp = 1.0;
        for (int k = 1; k <= 5; ++k) {
          s += h_amp * std::sin(k * phase);
          h_amp *= 0.6;
        }
        const double edge = std::min(t - seg.begin_s, seg.end_s - t);
        const double fade =
            edge >= kFadeTime
                ? 1.0
                : 0.5 - 0.5 * std::cos(std::numbers::pi * edge / kFadeTime);
        signal.samples[i] += 0.22 * fade * s;
      }
      const double label_span = seg.end_s - seg.begin_s - 2.0 * kLabelMargin;
      const int label_count =
          label_span >= 0.0
              ? 1 + static_cast<int>(std::floor(label_span / kLabelStep))
              : 0;
      for (int li = 0; li < label_count; ++li) {
        const double t = seg.begin_s + kLabelMargin + li * kLabelStep;
        labels.push_back({t, seg.f0_at(t)});
      }
    } else {
      for (Index i = i0; i < i1; ++i) {
        signal.samples[i] += 0.03 * rng.next_gaussian();
      }
    }
  }
  // Low noise floor everywhere so no frame is exactly silent.
  for (Index i = 0; i < n; ++i) {
    signal.samples[i] += 1e-4 * rng.next_gaussian();
  }

  write_wav(wav_path, signal);

  std::ofstream out(label_path);
  require(out.good(), ErrorCode::kIo, "cannot write label file: " + label_path);
  out << "# time_seconds f0_hz\n";
  for (const F0Label& label : labels) {
    out << detail::format_double(label.time_s) << ' '
        << detail::format_double(label.f0_hz) << '\n';
  }
  require(out.good(), ErrorCode::kIo,
          "failed writing label file: " + label_path);
}

}  // namespace

CorpusManifest synth_fixture(const std::string& out_dir,
                             const FixtureConfig& config) {
  require(config.num_utterances >= 1, ErrorCode::kConfig,
          "fixture: need at least one utterance");
  require(config.duration_s > 0.1, ErrorCode::kConfig,
          "fixture: duration too short");
  require(config.voiced_fraction > 0.0 && config.voiced_fraction < 1.0,
          ErrorCode::kConfig, "fixture: voiced fraction must be in (0, 1)");

  fs::create_directories(fs::path(out_dir) / "wav");
  fs::create_directories(fs::path(out_dir) / "labels");

  CorpusManifest manifest;
  for (const std::string& speaker : config.speakers) {
    for (int u = 0; u < config.num_utterances; ++u) {
      char suffix[16];
      std::snprintf(suffix, sizeof(suffix), "%03d", u + 1);
      UtteranceSpec spec;
      spec.id = speaker + "_" + suffix;
      spec.audio_path = (fs::path(out_dir) / "wav" / (spec.id + ".wav")).string();
      spec.label_path =
          (fs::path(out_dir) / "labels" / (spec.id + ".f0")).string();
      SplitMix64 rng(derive_seed(config.seed, "fixture:" + speaker,
                                 static_cast<std::uint64_t>(u)));
      synth_utterance(spec.audio_path, spec.label_path, config.duration_s,
                      config.voiced_fraction, config.sample_rate_hz, speaker,
                      rng);
      manifest.speakers[speaker].push_back(std::move(spec));
    }
  }
  manifest.save((fs::path(out_dir) / "manifest.json").string());
  return manifest;
}

}  // namespace spt
