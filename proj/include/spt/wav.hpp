// spt/wav.hpp

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

#ifndef SPT_WAV_HPP_
#define SPT_WAV_HPP_

#include <string>

#include "spt/dsp_features.hpp"

namespace spt {

/// Reads a mono 16-bit PCM WAV file into amplitudes in [-1, 1).
/// Distinct error codes: kWavFormat for anything that is not 16-bit PCM,
/// kWavChannels for multi-channel audio, kWavSampleRate when the file rate
/// differs from expected_rate_hz (pass 0 to accept any rate).
SignalBuffer read_wav(const std::string& path, double expected_rate_hz);

/// Writes a mono 16-bit PCM WAV file; samples are clamped to [-1, 1).
void write_wav(const std::string& path, const SignalBuffer& signal);

}  // namespace spt

#endif  // SPT_WAV_HPP_
