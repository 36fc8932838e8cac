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

// Analysis, conversion and resynthesis of whole utterances, plus the
// feature-track and residual-track file formats.
//
// Analysis pre-emphasizes the whole signal, then frames and windows it. Frame
// i starts at sample i*hop and owns the hop segment [i*hop, (i+1)*hop) of the
// pre-emphasized signal. The residual of each segment is computed with the
// filter the feature track actually stores (the LPC rebuilt from the frame's
// LSFs), streaming filter state across segment boundaries, so resynthesis
// from an unmodified track inverts analysis exactly.

#pragma once

#include <cmath>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "lsfvc/align.hpp"
#include "lsfvc/error.hpp"
#include "lsfvc/lpc.hpp"
#include "lsfvc/lsf.hpp"
#include "lsfvc/mlp.hpp"
#include "lsfvc/signal_io.hpp"
#include "lsfvc/text_io.hpp"

namespace lsfvc {

struct AnalysisConfig {
  std::size_t order = 24;
  double frame_ms = 25.0;
  double hop_ms = 5.0;
  double alpha = 0.97;
  double sigma = 0.4;
};

struct FeatureFrame {
  double gain = 0.0;
  std::vector<double> lsf;
};

struct FeatureTrack {
  int sample_rate = 0;
  AnalysisConfig config;
  std::vector<FeatureFrame> frames;
  /// Frames whose LSF conversion failed and were replaced by their predecessor.
  std::size_t fallback_frames = 0;
};

struct ResidualTrack {
  std::size_t order = 0;
  std::size_t hop = 0;
  std::vector<double> initial_state;
  std::vector<std::vector<double>> segments;
};

struct Analysis {
  FeatureTrack features;
  ResidualTrack residual;
  std::vector<std::size_t> fallback_indices;
};

/// Uniform LSFs k*pi/(p+1): the LSFs of the trivial predictor A(z) = 1.
inline std::vector<double> TrivialLsf(std::size_t order) {
  std::vector<double> w(order);
  for (std::size_t k = 0; k < order; ++k)
    w[k] = static_cast<double>(k + 1) * std::numbers::pi / static_cast<double>(order + 1);
  return w;
}

inline LpcFrame FrameFilter(const FeatureFrame& frame) {
  return LsfToLpc(LsfVector{frame.lsf}, frame.gain);
}

inline std::vector<LpcFrame> TrackFilters(const FeatureTrack& track) {
  std::vector<LpcFrame> filters;
  filters.reserve(track.frames.size());
  for (const FeatureFrame& f : track.frames) filters.push_back(FrameFilter(f));
  return filters;
}

/// LSF vectors divided by pi, the domain used for alignment, mapping and MCD.
inline FeatureSequence NormalizedLsf(const FeatureTrack& track) {
  FeatureSequence out;
  out.reserve(track.frames.size());
  for (const FeatureFrame& f : track.frames) {
    std::vector<double> v(f.lsf);
    for (double& x : v) x /= std::numbers::pi;
    out.push_back(std::move(v));
  }
  return out;
}

inline FeatureSequence LpcCoefficientSequence(const FeatureTrack& track) {
  FeatureSequence out;
  for (const LpcFrame& lpc : TrackFilters(track)) out.push_back(lpc.coefficients);
  return out;
}

inline Analysis AnalyzeWaveform(const Waveform& input, const AnalysisConfig& config) {
  if (config.order == 0 || config.order % 2 != 0)
    throw Error(ErrorCode::kOddOrder, "analysis order must be even, got " + std::to_string(config.order));
  if (input.samples.empty()) throw Error(ErrorCode::kSignalTooShort, "empty waveform");

  const Waveform emphasized = Preemphasize(input, config.alpha);
  const FrameSequence frames = FrameSignal(emphasized, config.frame_ms, config.hop_ms, config.sigma);
  if (frames.frame_length <= config.order)
    throw Error(ErrorCode::kInvalidArgument, "frame shorter than the analysis order");

  Analysis out;
  out.features.sample_rate = input.sample_rate;
  out.features.config = config;
  out.residual.order = config.order;
  out.residual.hop = frames.hop;
  out.residual.initial_state.assign(config.order, 0.0);

  FilterState state = FilterState::Zero(config.order);
  for (std::size_t i = 0; i < frames.frames.size(); ++i) {
    const LpcFrame lpc = AnalyzeFrame(frames.frames[i], config.order);
    FeatureFrame frame{lpc.gain, {}};
    try {
      frame.lsf = LpcToLsf(lpc).omegas;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kUnstableFilter) throw;
      frame.lsf = i == 0 ? TrivialLsf(config.order) : out.features.frames.back().lsf;
      ++out.features.fallback_frames;
      out.fallback_indices.push_back(i);
    }
    const std::span<const double> segment(emphasized.samples.data() + i * frames.hop, frames.hop);
    FilterOutput residual = InverseFilter(segment, FrameFilter(frame), std::move(state));
    state = std::move(residual.state);
    out.residual.segments.push_back(std::move(residual.samples));
    out.features.frames.push_back(std::move(frame));
  }
  return out;
}

struct SynthesisResult {
  std::vector<double> samples;
  /// Segments whose filter produced non-finite or runaway output.
  std::size_t unstable_segments = 0;
  /// Non-finite output samples, written as zeros.
  std::size_t nonfinite_samples = 0;
};

/// Streams each residual segment through its frame's synthesis filter.
inline SynthesisResult Synthesize(const std::vector<LpcFrame>& filters, const ResidualTrack& residual) {
  if (filters.size() != residual.segments.size())
    throw Error(ErrorCode::kDimensionMismatch,
                std::to_string(filters.size()) + " filters for " +
                    std::to_string(residual.segments.size()) + " residual segments");
  SynthesisResult out;
  FilterState state{residual.initial_state};
  for (std::size_t i = 0; i < filters.size(); ++i) {
    FilterOutput seg = SynthesisFilter(residual.segments[i], filters[i], std::move(state));
    state = std::move(seg.state);
    if (seg.unstable) ++out.unstable_segments;
    for (double& x : seg.samples) {
      if (!std::isfinite(x)) {
        x = 0.0;
        ++out.nonfinite_samples;
      }
    }
    out.samples.insert(out.samples.end(), seg.samples.begin(), seg.samples.end());
  }
  return out;
}

/// Resynthesis of the pre-emphasized signal from an unmodified track.
inline SynthesisResult Resynthesize(const Analysis& analysis) {
  return Synthesize(TrackFilters(analysis.features), analysis.residual);
}

enum class MappingDomain { kLsf, kRawLpc };

struct ConversionOutput {
  Waveform waveform;                 // de-emphasized output
  std::vector<LpcFrame> filters;     // mapped synthesis filters
  std::size_t unstable_frames = 0;   // mapped filters with a pole on/outside the unit circle
  std::size_t unstable_segments = 0;
  std::size_t nonfinite_samples = 0;
};

/// Maps every analysis frame through the network and resynthesizes with the
/// source residual. In the LSF domain inputs are LSF/pi and outputs are
/// rectified into valid LSFs; in the raw-LPC domain the network output is used
/// directly as predictor coefficients.
inline ConversionOutput ConvertAnalysis(const MlpModel& model, const Analysis& analysis,
                                        MappingDomain domain) {
  const std::size_t order = analysis.features.config.order;
  if (model.input_size() != order || model.output_size() != order)
    throw Error(ErrorCode::kDimensionMismatch,
                "model maps " + std::to_string(model.input_size()) + " -> " +
                    std::to_string(model.output_size()) + ", features have order " +
                    std::to_string(order));
  ConversionOutput out;
  for (const FeatureFrame& frame : analysis.features.frames) {
    LpcFrame mapped;
    if (domain == MappingDomain::kLsf) {
      std::vector<double> x(frame.lsf);
      for (double& v : x) v /= std::numbers::pi;
      std::vector<double> y = Forward(model, x);
      for (double& v : y) v *= std::numbers::pi;
      mapped = LsfToLpc(RectifyLsf(y), frame.gain);
    } else {
      mapped.coefficients = Forward(model, FrameFilter(frame).coefficients);
      mapped.gain = frame.gain;
    }
    if (!(MaxPoleMagnitude(mapped) < 1.0)) ++out.unstable_frames;
    out.filters.push_back(std::move(mapped));
  }
  SynthesisResult synth = Synthesize(out.filters, analysis.residual);
  out.unstable_segments = synth.unstable_segments;
  out.nonfinite_samples = synth.nonfinite_samples;
  out.waveform = Deemphasize(Waveform{std::move(synth.samples), analysis.features.sample_rate},
                             analysis.features.config.alpha);
  return out;
}

// --- Feature track file -----------------------------------------------------
//   # version=1
//   # sample_rate=11025
//   # frame_ms=25 ... (hop_ms, order, alpha, sigma, fallback_frames)
//   <gain>,<lsf_1>,...,<lsf_p>      one row per frame

inline std::string FormatFeatureTrack(const FeatureTrack& track) {
  std::string out = "# version=1\n";
  out += "# sample_rate=" + std::to_string(track.sample_rate) + "\n";
  out += "# frame_ms=" + text::FormatDouble(track.config.frame_ms) + "\n";
  out += "# hop_ms=" + text::FormatDouble(track.config.hop_ms) + "\n";
  out += "# order=" + std::to_string(track.config.order) + "\n";
  out += "# alpha=" + text::FormatDouble(track.config.alpha) + "\n";
  out += "# sigma=" + text::FormatDouble(track.config.sigma) + "\n";
  out += "# fallback_frames=" + std::to_string(track.fallback_frames) + "\n";
  for (const FeatureFrame& f : track.frames) {
    out += text::FormatDouble(f.gain);
    for (double w : f.lsf) out += ',' + text::FormatDouble(w);
    out += '\n';
  }
  return out;
}

inline FeatureTrack ParseFeatureTrack(const std::vector<std::string>& lines) {
  FeatureTrack track;
  bool have_version = false, have_rate = false, have_order = false;
  std::size_t row = 0;
  for (; row < lines.size() && !lines[row].empty() && lines[row][0] == '#'; ++row) {
    std::string_view line(lines[row]);
    line.remove_prefix(1);
    while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) continue;
    const std::string_view key = line.substr(0, eq);
    const std::string_view value = line.substr(eq + 1);
    if (key == "version") {
      if (value != "1") throw Error(ErrorCode::kVersionMismatch, "feature file version " + std::string(value));
      have_version = true;
    } else if (key == "sample_rate") {
      track.sample_rate = text::ParseInt<int>(value);
      have_rate = true;
    } else if (key == "frame_ms") {
      track.config.frame_ms = text::ParseDouble(value);
    } else if (key == "hop_ms") {
      track.config.hop_ms = text::ParseDouble(value);
    } else if (key == "order") {
      track.config.order = text::ParseInt<std::size_t>(value);
      have_order = true;
    } else if (key == "alpha") {
      track.config.alpha = text::ParseDouble(value);
    } else if (key == "sigma") {
      track.config.sigma = text::ParseDouble(value);
    } else if (key == "fallback_frames") {
      track.fallback_frames = text::ParseInt<std::size_t>(value);
    }
  }
  if (!have_version || !have_rate || !have_order)
    throw Error(ErrorCode::kParseError, "feature file lacks version, sample_rate or order");
  for (; row < lines.size(); ++row) {
    if (lines[row].empty()) continue;
    const auto cells = text::Split(lines[row], ',');
    if (cells.size() != track.config.order + 1)
      throw Error(ErrorCode::kDimensionMismatch,
                  "feature row has " + std::to_string(cells.size()) + " values, expected " +
                      std::to_string(track.config.order + 1));
    FeatureFrame f;
    f.gain = text::ParseDouble(cells[0]);
    for (std::size_t k = 1; k < cells.size(); ++k) f.lsf.push_back(text::ParseDouble(cells[k]));
    if (!ValidateLsf(f.lsf))
      throw Error(ErrorCode::kInvalidLsf, "feature row " + std::to_string(track.frames.size()) +
                                              " is not a valid LSF vector");
    track.frames.push_back(std::move(f));
  }
  return track;
}

// --- Residual track file ----------------------------------------------------
//   # version=1
//   # order=24
//   # hop=55
//   # segments=120
//   state,<p initial filter-history values>
//   <hop residual samples>         one row per segment

inline std::string FormatResidualTrack(const ResidualTrack& track) {
  std::string out = "# version=1\n";
  out += "# order=" + std::to_string(track.order) + "\n";
  out += "# hop=" + std::to_string(track.hop) + "\n";
  out += "# segments=" + std::to_string(track.segments.size()) + "\n";
  out += "state";
  for (double x : track.initial_state) out += ',' + text::FormatDouble(x);
  out += '\n';
  for (const auto& seg : track.segments) {
    for (std::size_t i = 0; i < seg.size(); ++i) {
      if (i) out += ',';
      out += text::FormatDouble(seg[i]);
    }
    out += '\n';
  }
  return out;
}

inline ResidualTrack ParseResidualTrack(const std::vector<std::string>& lines) {
  ResidualTrack track;
  std::size_t declared = 0;
  bool have_version = false;
  std::size_t row = 0;
  for (; row < lines.size() && !lines[row].empty() && lines[row][0] == '#'; ++row) {
    std::string_view line(lines[row]);
    line.remove_prefix(1);
    while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) continue;
    const std::string_view key = line.substr(0, eq);
    const std::string_view value = line.substr(eq + 1);
    if (key == "version") {
      if (value != "1") throw Error(ErrorCode::kVersionMismatch, "residual file version " + std::string(value));
      have_version = true;
    } else if (key == "order") {
      track.order = text::ParseInt<std::size_t>(value);
    } else if (key == "hop") {
      track.hop = text::ParseInt<std::size_t>(value);
    } else if (key == "segments") {
      declared = text::ParseInt<std::size_t>(value);
    }
  }
  if (!have_version || track.hop == 0)
    throw Error(ErrorCode::kParseError, "residual file lacks version or hop");
  if (row >= lines.size() || lines[row].rfind("state", 0) != 0)
    throw Error(ErrorCode::kParseError, "residual file lacks the state row");
  const auto state_cells = text::Split(lines[row], ',');
  for (std::size_t k = 1; k < state_cells.size(); ++k)
    track.initial_state.push_back(text::ParseDouble(state_cells[k]));
  if (track.initial_state.size() != track.order)
    throw Error(ErrorCode::kDimensionMismatch, "state row length differs from order");
  for (++row; row < lines.size(); ++row) {
    if (lines[row].empty()) continue;
    const auto cells = text::Split(lines[row], ',');
    if (cells.size() != track.hop)
      throw Error(ErrorCode::kDimensionMismatch, "residual segment length differs from hop");
    std::vector<double> seg;
    seg.reserve(cells.size());
    for (std::string_view c : cells) seg.push_back(text::ParseDouble(c));
    track.segments.push_back(std::move(seg));
  }
  if (track.segments.size() != declared)
    throw Error(ErrorCode::kDimensionMismatch, "segment count differs from header");
  return track;
}

inline void SaveFeatureTrack(const FeatureTrack& track, const std::filesystem::path& path) {
  text::WriteFile(path, FormatFeatureTrack(track));
}

inline FeatureTrack LoadFeatureTrack(const std::filesystem::path& path) {
  return ParseFeatureTrack(text::ReadLines(path));
}

inline void SaveResidualTrack(const ResidualTrack& track, const std::filesystem::path& path) {
  text::WriteFile(path, FormatResidualTrack(track));
}

inline ResidualTrack LoadResidualTrack(const std::filesystem::path& path) {
  return ParseResidualTrack(text::ReadLines(path));
}

}  // namespace lsfvc
