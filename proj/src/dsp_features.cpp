// spt/dsp_features.cpp

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

#include "spt/dsp_features.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <numbers>

namespace spt {

namespace {

// One plan cache per thread; Eigen::FFT memoizes twiddle tables per size.
Eigen::FFT<double>& thread_fft() {
  thread_local Eigen::FFT<double> fft;
  return fft;
}

}  // namespace

int DspConfig::frame_length() const {
  return static_cast<int>(std::lround(sample_rate_hz * frame_ms / 1000.0));
}

int DspConfig::hop() const {
  return static_cast<int>(std::lround(frame_length() * (1.0 - overlap)));
}

double DspConfig::high_cutoff_hz() const {
  return f_high_hz > 0.0 ? f_high_hz : sample_rate_hz / 2.0;
}

std::vector<Frame> frame_signal(const SignalBuffer& signal, int frame_len,
                                int hop) {
  require(signal.sample_rate_hz > 0.0, ErrorCode::kInvalidInput,
          "frame_signal: sample rate must be positive");
  require(frame_len >= 1, ErrorCode::kInvalidInput,
          "frame_signal: frame length must be >= 1");
  require(hop >= 1 && hop <= frame_len, ErrorCode::kInvalidInput,
          "frame_signal: hop must be in [1, frame_len]");
  const Index n = signal.samples.size();
  require(n >= frame_len, ErrorCode::kInvalidInput,
          "frame_signal: signal shorter than one frame");

  const Index count = (n - frame_len) / hop + 1;
  std::vector<Frame> frames;
  frames.reserve(static_cast<std::size_t>(count));
  for (Index i = 0; i < count; ++i) {
    Frame frame;
    frame.start_index = i * hop;
    frame.samples = signal.samples.segment(frame.start_index, frame_len);
    frame.center_time_s =
        (static_cast<double>(frame.start_index) + frame_len / 2.0) /
        signal.sample_rate_hz;
    frames.push_back(std::move(frame));
  }
  return frames;
}

double log_energy(const Frame& frame, double floor) {
  const double energy = frame.samples.squaredNorm();
  return std::log(std::max(energy, floor));
}

Frame pre_emphasis(const Frame& frame, double alpha) {
  require(alpha >= 0.0 && alpha < 1.0, ErrorCode::kInvalidInput,
          "pre_emphasis: alpha must be in [0, 1)");
  const Index m = frame.samples.size();
  Frame out = frame;
  if (m > 1) {
    out.samples.tail(m - 1) -= alpha * frame.samples.head(m - 1);
  }
  return out;
}

Frame apply_window(const Frame& frame) {
  const Index m = frame.samples.size();
  require(m >= 2, ErrorCode::kInvalidInput,
          "apply_window: frame must have at least 2 samples");
  Frame out = frame;
  const double denom = static_cast<double>(m - 1);
  for (Index n = 0; n < m; ++n) {
    const double w = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi *
                                            static_cast<double>(n) / denom);
    out.samples[n] *= w;
  }
  return out;
}

Vector magnitude_spectrum(const Frame& frame, int nfft) {
  require(nfft >= frame.samples.size(), ErrorCode::kConfig,
          "magnitude_spectrum: nfft smaller than frame length");
  Vector padded = Vector::Zero(nfft);
  padded.head(frame.samples.size()) = frame.samples;
  Eigen::VectorXcd spectrum(nfft);
  thread_fft().fwd(spectrum, padded);
  return spectrum.cwiseAbs();
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

MelFilterbank build_mel_filterbank(double sample_rate_hz, int nfft,
                                   int num_filters, double f_low_hz,
                                   double f_high_hz) {
  require(num_filters >= 1, ErrorCode::kConfig,
          "build_mel_filterbank: need at least one filter");
  require(f_low_hz >= 0.0 && f_low_hz < f_high_hz &&
              f_high_hz <= sample_rate_hz / 2.0,
          ErrorCode::kConfig,
          "build_mel_filterbank: need 0 <= f_low < f_high <= fs/2");

  // Boundary grid equidistant on the mel scale: g_0..g_{H+1}; filter h
  // rises over [g_{h-1}, g_h] and falls over [g_h, g_{h+1}], peak 1.
  const double mel_low = hz_to_mel(f_low_hz);
  const double mel_high = hz_to_mel(f_high_hz);
  Vector boundaries_hz(num_filters + 2);
  for (int i = 0; i < num_filters + 2; ++i) {
    const double mel =
        mel_low + (mel_high - mel_low) * i / (num_filters + 1.0);
    boundaries_hz[i] = mel_to_hz(mel);
  }

  const Index num_bins = nfft / 2 + 1;  // non-redundant half
  MelFilterbank fb;
  fb.weights = Matrix::Zero(num_filters, num_bins);
  fb.center_freqs_hz = boundaries_hz.segment(1, num_filters);

  const double bin_hz = sample_rate_hz / nfft;
  for (int h = 0; h < num_filters; ++h) {
    const double left = boundaries_hz[h];
    const double center = boundaries_hz[h + 1];
    const double right = boundaries_hz[h + 2];
    bool nonempty = false;
    for (Index l = 0; l < num_bins; ++l) {
      const double f = l * bin_hz;
      double w = 0.0;
      if (f >= left && f <= center) {
        w = (f - left) / (center - left);
      } else if (f > center && f < right) {
        w = (right - f) / (right - center);
      }
      if (w > 0.0) {
        fb.weights(h, l) = w;
        nonempty = true;
      }
    }
    require(nonempty, ErrorCode::kConfig,
            "build_mel_filterbank: filter " + std::to_string(h + 1) +
                " covers no DFT bin; nfft too small for this layout");
  }
  return fb;
}

Vector mel_energies(const Vector& spectrum_half, const MelFilterbank& fb,
                    double floor) {
  require(spectrum_half.size() == fb.num_bins(), ErrorCode::kInvalidInput,
          "mel_energies: spectrum length does not match filterbank bins");
  return (fb.weights * spectrum_half).cwiseMax(floor);
}

Vector dct_mfcc(const Vector& filterbank_energies, int num_coeffs) {
  const Index h_count = filterbank_energies.size();
  require(h_count >= 1, ErrorCode::kInvalidInput, "dct_mfcc: empty input");
  require((filterbank_energies.array() > 0.0).all(), ErrorCode::kInvalidInput,
          "dct_mfcc: inputs must be positive (floored upstream)");
  const Vector log_fb = filterbank_energies.array().log();
  Vector mfcc(num_coeffs);
  for (int z = 1; z <= num_coeffs; ++z) {
    double acc = 0.0;
    for (Index h = 1; h <= h_count; ++h) {
      acc += log_fb[h - 1] * std::cos(std::numbers::pi * z * (h - 0.5) /
                                      static_cast<double>(h_count));
    }
    mfcc[z - 1] = acc;
  }
  return mfcc;
}

MfccExtractor::MfccExtractor(const DspConfig& config)
    : config_(config),
      fb_(build_mel_filterbank(config.sample_rate_hz, config.nfft,
                               config.num_mel_filters, config.f_low_hz,
                               config.high_cutoff_hz())) {
  require(config.nfft >= config.frame_length(), ErrorCode::kConfig,
          "MfccExtractor: nfft smaller than frame length");
  const int h_count = config.num_mel_filters;
  dct_ = Matrix(config.num_mfcc, h_count);
  for (int z = 1; z <= config.num_mfcc; ++z) {
    for (int h = 1; h <= h_count; ++h) {
      dct_(z - 1, h - 1) = std::cos(std::numbers::pi * z * (h - 0.5) /
                                    static_cast<double>(h_count));
    }
  }
}

Vector MfccExtractor::extract(const Frame& frame) const {
  const Frame emphasized = pre_emphasis(frame, config_.preemphasis);
  const Frame windowed = apply_window(emphasized);
  const Vector spectrum = magnitude_spectrum(windowed, config_.nfft);
  const Vector fb_out = mel_energies(spectrum.head(fb_.num_bins()), fb_,
                                     config_.filterbank_floor);
  return dct_ * fb_out.array().log().matrix();
}

}  // namespace spt
