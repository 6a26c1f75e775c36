// spt/wav.cpp

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

#include "spt/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace spt {

namespace {

constexpr double kInt16Scale = 32768.0;

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] |
                                    (static_cast<std::uint16_t>(p[1]) << 8));
}

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  out.push_back(v & 0xff);
  out.push_back((v >> 8) & 0xff);
  out.push_back((v >> 16) & 0xff);
  out.push_back((v >> 24) & 0xff);
}

void put_u16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(v & 0xff);
  out.push_back((v >> 8) & 0xff);
}

}  // namespace

SignalBuffer read_wav(const std::string& path, double expected_rate_hz) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::kIo, "cannot open WAV file: " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  require(bytes.size() >= 44 && std::memcmp(bytes.data(), "RIFF", 4) == 0 &&
              std::memcmp(bytes.data() + 8, "WAVE", 4) == 0,
          ErrorCode::kWavFormat, "not a RIFF/WAVE file: " + path);

  // Walk the chunk list; we need fmt before data.
  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  std::size_t pos = 12;
  const unsigned char* data = nullptr;
  std::uint32_t data_size = 0;
  while (pos + 8 <= bytes.size()) {
    const std::uint32_t chunk_size = read_u32(&bytes[pos + 4]);
    const std::size_t body = pos + 8;
    if (std::memcmp(&bytes[pos], "fmt ", 4) == 0) {
      require(chunk_size >= 16 && body + 16 <= bytes.size(),
              ErrorCode::kWavFormat, "truncated fmt chunk: " + path);
      format = read_u16(&bytes[body]);
      channels = read_u16(&bytes[body + 2]);
      rate = read_u32(&bytes[body + 4]);
      bits = read_u16(&bytes[body + 14]);
      have_fmt = true;
    } else if (std::memcmp(&bytes[pos], "data", 4) == 0) {
      require(body + chunk_size <= bytes.size(), ErrorCode::kWavFormat,
              "truncated data chunk: " + path);
      data = &bytes[body];
      data_size = chunk_size;
      break;
    }
    pos = body + chunk_size + (chunk_size & 1);  // chunks are word-aligned
  }
  require(have_fmt && data != nullptr, ErrorCode::kWavFormat,
          "missing fmt or data chunk: " + path);
  require(format == 1 && bits == 16, ErrorCode::kWavFormat,
          "only 16-bit PCM supported: " + path);
  require(channels == 1, ErrorCode::kWavChannels,
          "only mono audio supported: " + path);
  if (expected_rate_hz > 0.0) {
    require(static_cast<double>(rate) == expected_rate_hz,
            ErrorCode::kWavSampleRate,
            path + ": sample rate " + std::to_string(rate) +
                " does not match expected " +
                std::to_string(static_cast<long long>(expected_rate_hz)));
  }

  const std::size_t num_samples = data_size / 2;
  SignalBuffer signal;
  signal.sample_rate_hz = static_cast<double>(rate);
  signal.samples.resize(static_cast<Index>(num_samples));
  for (std::size_t i = 0; i < num_samples; ++i) {
    const std::int16_t s = static_cast<std::int16_t>(
        static_cast<std::uint16_t>(data[2 * i]) |
        (static_cast<std::uint16_t>(data[2 * i + 1]) << 8));
    signal.samples[static_cast<Index>(i)] = s / kInt16Scale;
  }
  return signal;
}

void write_wav(const std::string& path, const SignalBuffer& signal) {
  require(signal.sample_rate_hz > 0.0, ErrorCode::kInvalidInput,
          "write_wav: sample rate must be positive");
  const std::uint32_t rate =
      static_cast<std::uint32_t>(std::lround(signal.sample_rate_hz));
  const std::uint32_t num_samples =
      static_cast<std::uint32_t>(signal.samples.size());
  const std::uint32_t data_size = num_samples * 2;

  std::vector<unsigned char> out;
  out.reserve(44 + data_size);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  put_u32(out, 36 + data_size);
  out.insert(out.end(), {'W', 'A', 'V', 'E'});
  out.insert(out.end(), {'f', 'm', 't', ' '});
  put_u32(out, 16);
  put_u16(out, 1);  // PCM
  put_u16(out, 1);  // mono
  put_u32(out, rate);
  put_u32(out, rate * 2);  // byte rate
  put_u16(out, 2);         // block align
  put_u16(out, 16);        // bits per sample
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  put_u32(out, data_size);
  for (Index i = 0; i < signal.samples.size(); ++i) {
    const double scaled = signal.samples[i] * kInt16Scale;
    const long v = std::lround(std::clamp(scaled, -32768.0, 32767.0));
    put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(v)));
  }

  std::ofstream file(path, std::ios::binary);
  require(file.good(), ErrorCode::kIo, "cannot write WAV file: " + path);
  file.write(reinterpret_cast<const char*>(out.data()),
             static_cast<std::streamsize>(out.size()));
  require(file.good(), ErrorCode::kIo, "failed writing WAV file: " + path);
}

}  // namespace spt
