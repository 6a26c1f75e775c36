// spt/dsp_features.hpp

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

#ifndef SPT_DSP_FEATURES_HPP_
#define SPT_DSP_FEATURES_HPP_

#include <cstdint>
#include <vector>

#include "spt/types.hpp"

namespace spt {

struct DspConfig {
  double sample_rate_hz = 20000.0;
  double frame_ms = 20.0;
  double overlap = 0.5;  // fraction of the frame shared with its successor
  int nfft = 512;
  int num_mel_filters = 23;
  int num_mfcc = 13;
  double preemphasis = 0.97;
  double f_low_hz = 0.0;
  double f_high_hz = 0.0;  // 0 means sample_rate / 2
  double energy_floor = 1e-12;
  double filterbank_floor = 1e-12;

  int frame_length() const;  // samples, e.g. 400 at 20 kHz / 20 ms
  int hop() const;           // samples, frame_length * (1 - overlap)
  double high_cutoff_hz() const;
};

struct SignalBuffer {
  Vector samples;  // normalized PCM in [-1, 1)
  double sample_rate_hz = 0.0;
};

struct Frame {
  Vector samples;
  std::int64_t start_index = 0;
  double center_time_s = 0.0;
};

/// Triangular mel filterbank over the non-redundant DFT bins 0..nfft/2.
/// Unit-peak triangles; centers equidistant on the mel scale.
struct MelFilterbank {
  Matrix weights;          // num_filters x num_bins
  Vector center_freqs_hz;  // num_filters

  int num_filters() const { return static_cast<int>(weights.rows()); }
  Index num_bins() const { return weights.cols(); }
};

/// Slices the signal into fixed-length windows offset by hop; trailing
/// partial windows are discarded. Count = floor((N - frame_len)/hop) + 1.
std::vector<Frame> frame_signal(const SignalBuffer& signal, int frame_len,
                                int hop);

/// ln of the frame's raw sample energy, floored so silence stays finite.
double log_energy(const Frame& frame, double floor = 1e-12);

/// First-order high-pass, out[n] = s[n] - alpha*s[n-1]; the sample before
/// the frame is treated as zero.
Frame pre_emphasis(const Frame& frame, double alpha);

/// Hamming window, 0.54 - 0.46*cos(2*pi*n/(M-1)) with 0-based n.
Frame apply_window(const Frame& frame);

/// Magnitude of the unnormalized DFT of the zero-padded frame; full nfft
/// bins, conjugate-symmetric for real input.
Vector magnitude_spectrum(const Frame& frame, int nfft);

double hz_to_mel(double hz);
double mel_to_hz(double mel);

MelFilterbank build_mel_filterbank(double sample_rate_hz, int nfft,
                                   int num_filters, double f_low_hz,
                                   double f_high_hz);

/// fb_h = sum_l W_h[l] * F_l over the non-redundant bins, floored before
/// any downstream logarithm.
Vector mel_energies(const Vector& spectrum_half, const MelFilterbank& fb,
                    double floor = 1e-12);

/// mfc_z = sum_h ln(fb_h) * cos(pi*z*(h-0.5)/H), z = 1..num_coeffs.
/// There is no z = 0 term.
Vector dct_mfcc(const Vector& filterbank_energies, int num_coeffs = 13);

/// Runs the five-step pipeline with a prebuilt filterbank and DCT basis.
/// Immutable after construction; cheap to copy, one per thread if framing
/// work is parallelized.
class MfccExtractor {
 public:
  explicit MfccExtractor(const DspConfig& config);

  Vector extract(const Frame& frame) const;
  const MelFilterbank& filterbank() const { return fb_; }
  const DspConfig& config() const { return config_; }

 private:
  DspConfig config_;
  MelFilterbank fb_;
  Matrix dct_;  // num_mfcc x num_filters
};

}  // namespace spt

#endif  // SPT_DSP_FEATURES_HPP_
