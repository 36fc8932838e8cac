// Copyright 2026  The lsfvc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// Waveform I/O (16-bit PCM mono WAV), pre-/de-emphasis, Gaussian windowing
// and fixed-hop framing.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <vector>

#include "lsfvc/error.hpp"

namespace lsfvc {

struct Waveform {
  std::vector<double> samples;
  int sample_rate = 0;
};

struct FrameSequence {
  std::vector<std::vector<double>> frames;
  std::size_t frame_length = 0;
  std::size_t hop = 0;
  std::vector<double> window;
  std::size_t source_length = 0;
};

inline constexpr double kPcmScale = 32768.0;

namespace detail {

inline std::uint32_t ReadLe32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

inline std::uint16_t ReadLe16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

inline void PutLe32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

inline void PutLe16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xff));
  out.push_back(static_cast<unsigned char>(v >> 8));
}

inline void PutTag(std::vector<unsigned char>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

inline void CheckAlpha(double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0))
    throw Error(ErrorCode::kInvalidArgument,
                "emphasis coefficient must lie in [0, 1), got " + std::to_string(alpha));
}

}  // namespace detail

/// Parses a RIFF/WAVE file holding 16-bit signed PCM mono audio.
inline Waveform ReadWav(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::kFileNotFound, path.string());
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(is)),
                                         std::istreambuf_iterator<char>());
  if (bytes.size() < 12)
    throw Error(ErrorCode::kTruncatedData, path.string() + ": no RIFF header");
  if (std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw Error(ErrorCode::kUnsupportedFormat, path.string() + ": not RIFF/WAVE");

  bool have_fmt = false;
  int sample_rate = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::uint32_t size = detail::ReadLe32(chunk + 4);
    const std::size_t body = pos + 8;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || body + 16 > bytes.size())
        throw Error(ErrorCode::kTruncatedData, path.string() + ": short fmt chunk");
      const std::uint16_t format = detail::ReadLe16(bytes.data() + body);
      const std::uint16_t channels = detail::ReadLe16(bytes.data() + body + 2);
      sample_rate = static_cast<int>(detail::ReadLe32(bytes.data() + body + 4));
      const std::uint16_t bits = detail::ReadLe16(bytes.data() + body + 14);
      if (format != 1)
        throw Error(ErrorCode::kUnsupportedFormat,
                    path.string() + ": format tag " + std::to_string(format) + " is not PCM");
      if (channels != 1)
        throw Error(ErrorCode::kUnsupportedFormat,
                    path.string() + ": " + std::to_string(channels) + " channels, expected mono");
      if (bits != 16)
        throw Error(ErrorCode::kUnsupportedFormat,
                    path.string() + ": " + std::to_string(bits) + "-bit samples, expected 16");
      if (sample_rate <= 0)
        throw Error(ErrorCode::kUnsupportedFormat, path.string() + ": zero sample rate");
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (!have_fmt)
        throw Error(ErrorCode::kUnsupportedFormat, path.string() + ": data before fmt");
      if (body + size > bytes.size() || size % 2 != 0)
        throw Error(ErrorCode::kTruncatedData, path.string() + ": data chunk truncated");
      Waveform w;
      w.sample_rate = sample_rate;
      w.samples.resize(size / 2);
      for (std::size_t i = 0; i < w.samples.size(); ++i) {
        const auto raw = static_cast<std::int16_t>(detail::ReadLe16(bytes.data() + body + 2 * i));
        w.samples[i] = raw / kPcmScale;
      }
      return w;
    }
    pos = body + size + (size & 1u);
  }
  if (!have_fmt) throw Error(ErrorCode::kUnsupportedFormat, path.string() + ": no fmt chunk");
  throw Error(ErrorCode::kTruncatedData, path.string() + ": no data chunk");
}

/// Clips to [-1, 32767/32768], then rounds half away from zero.
inline std::int16_t QuantizeSample(double x) {
  const double scaled = std::round(std::clamp(x, -1.0, 32767.0 / kPcmScale) * kPcmScale);
  return static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
}

inline void WriteWav(const Waveform& w, const std::filesystem::path& path) {
  if (w.sample_rate <= 0)
    throw Error(ErrorCode::kInvalidArgument, "sample rate must be positive");
  const auto data_bytes = static_cast<std::uint32_t>(2 * w.samples.size());
  std::vector<unsigned char> out;
  out.reserve(44 + data_bytes);
  detail::PutTag(out, "RIFF");
  detail::PutLe32(out, 36 + data_bytes);
  detail::PutTag(out, "WAVE");
  detail::PutTag(out, "fmt ");
  detail::PutLe32(out, 16);
  detail::PutLe16(out, 1);
  detail::PutLe16(out, 1);
  detail::PutLe32(out, static_cast<std::uint32_t>(w.sample_rate));
  detail::PutLe32(out, static_cast<std::uint32_t>(w.sample_rate) * 2);
  detail::PutLe16(out, 2);
  detail::PutLe16(out, 16);
  detail::PutTag(out, "data");
  detail::PutLe32(out, data_bytes);
  for (double x : w.samples) {
    if (!std::isfinite(x))
      throw Error(ErrorCode::kInvalidArgument, "non-finite amplitude in waveform");
    detail::PutLe16(out, static_cast<std::uint16_t>(QuantizeSample(x)));
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(ErrorCode::kUnwritablePath, path.string());
  os.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!os) throw Error(ErrorCode::kUnwritablePath, path.string());
}

/// y[0] = x[0]; y[n] = x[n] - alpha * x[n-1].
inline Waveform Preemphasize(const Waveform& w, double alpha) {
  detail::CheckAlpha(alpha);
  Waveform out{std::vector<double>(w.samples.size()), w.sample_rate};
  for (std::size_t n = 0; n < w.samples.size(); ++n)
    out.samples[n] = n == 0 ? w.samples[0] : w.samples[n] - alpha * w.samples[n - 1];
  return out;
}

/// Inverse of Preemphasize: x[n] = y[n] + alpha * x[n-1].
inline Waveform Deemphasize(const Waveform& w, double alpha) {
  detail::CheckAlpha(alpha);
  Waveform out{std::vector<double>(w.samples.size()), w.sample_rate};
  double prev = 0.0;
  for (std::size_t n = 0; n < w.samples.size(); ++n) {
    prev = w.samples[n] + alpha * prev;
    out.samples[n] = prev;
  }
  return out;
}

/// Gaussian window with standard deviation sigma * (L-1)/2 around the centre.
inline std::vector<double> GaussianWindow(std::size_t length, double sigma) {
  if (length == 0) throw Error(ErrorCode::kInvalidArgument, "window length must be >= 1");
  if (!(sigma > 0.0)) throw Error(ErrorCode::kInvalidArgument, "window sigma must be positive");
  if (length == 1) return {1.0};
  const double half = static_cast<double>(length - 1) / 2.0;
  std::vector<double> w(length);
  for (std::size_t n = 0; n < length; ++n) {
    const double x = (static_cast<double>(n) - half) / (sigma * half);
    w[n] = std::exp(-0.5 * x * x);
  }
  return w;
}

/// Sample count of a millisecond span, floored.
inline std::size_t MillisecondsToSamples(double ms, int sample_rate) {
  return static_cast<std::size_t>(std::floor(ms * sample_rate / 1000.0 + 1e-9));
}

inline std::size_t FrameCount(std::size_t n, std::size_t frame_length, std::size_t hop) {
  return n < frame_length ? 0 : (n - frame_length) / hop + 1;
}

/// Cuts the signal into windowed frames; a partial tail frame is dropped.
inline FrameSequence FrameSignal(const Waveform& w, double frame_ms, double hop_ms, double sigma) {
  FrameSequence seq;
  seq.frame_length = MillisecondsToSamples(frame_ms, w.sample_rate);
  seq.hop = MillisecondsToSamples(hop_ms, w.sample_rate);
  seq.source_length = w.samples.size();
  if (seq.frame_length == 0 || seq.hop == 0)
    throw Error(ErrorCode::kInvalidArgument, "frame and hop must span at least one sample");
  if (w.samples.size() < seq.frame_length)
    throw Error(ErrorCode::kSignalTooShort,
                std::to_string(w.samples.size()) + " samples, frame needs " +
                    std::to_string(seq.frame_length));
  seq.window = GaussianWindow(seq.frame_length, sigma);
  const std::size_t count = FrameCount(w.samples.size(), seq.frame_length, seq.hop);
  seq.frames.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<double> frame(seq.frame_length);
    const double* src = w.samples.data() + i * seq.hop;
    for (std::size_t n = 0; n < seq.frame_length; ++n) frame[n] = src[n] * seq.window[n];
    seq.frames.push_back(std::move(frame));
  }
  return seq;
}

}  // namespace lsfvc
