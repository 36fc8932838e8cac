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

// Synthetic speaker-pair corpus.
//
// A "word" is a random trajectory of formant targets. Each speaker renders the
// word through its own fixed warp (formant scale, bandwidth scale, timing
// curve, spectral tilt) and excites the resulting time-varying cascade of
// second-order resonators with an impulse train at its own pitch. Two speakers
// saying the same word therefore differ by a known, learnable spectral map.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lsfvc/error.hpp"
#include "lsfvc/random.hpp"
#include "lsfvc/signal_io.hpp"
#include "lsfvc/text_io.hpp"

namespace lsfvc::testkit {

inline constexpr double kMaxPoleRadius = 0.98;

struct Formant {
  double center_rad = 0.0;
  double bandwidth_rad = 0.0;  // pole radius is exp(-bandwidth_rad / 2)

  double radius() const { return std::min(std::exp(-0.5 * bandwidth_rad), kMaxPoleRadius); }
};

struct FormantKeyframe {
  double time_s = 0.0;
  std::vector<Formant> formants;
};

struct SyntheticSpeakerSpec {
  double pitch_hz = 120.0;
  std::vector<FormantKeyframe> formant_track;
  std::uint64_t seed = 0;
  double noise_mix = 0.05;  // white-noise share of the excitation
  double tilt_pole = 0.9;   // real pole shaping the glottal roll-off
};

inline void Validate(const SyntheticSpeakerSpec& spec) {
  if (!(spec.pitch_hz >= 50.0 && spec.pitch_hz <= 400.0))
    throw Error(ErrorCode::kInvalidArgument,
                "speaker pitch " + std::to_string(spec.pitch_hz) + " Hz outside [50, 400]");
  if (spec.formant_track.empty())
    throw Error(ErrorCode::kInvalidArgument, "empty formant track");
  if (!(spec.tilt_pole >= 0.0 && spec.tilt_pole <= kMaxPoleRadius))
    throw Error(ErrorCode::kUnstableFilter, "tilt pole outside [0, 0.98]");
  const std::size_t count = spec.formant_track.front().formants.size();
  double last_time = -1.0;
  for (const FormantKeyframe& key : spec.formant_track) {
    if (key.formants.size() != count)
      throw Error(ErrorCode::kInvalidArgument, "keyframes disagree on formant count");
    if (key.time_s < last_time)
      throw Error(ErrorCode::kInvalidArgument, "keyframe times must not decrease");
    last_time = key.time_s;
    for (const Formant& f : key.formants) {
      if (!(f.center_rad > 0.0 && f.center_rad < std::numbers::pi))
        throw Error(ErrorCode::kUnstableFilter, "formant centre outside (0, pi)");
      if (!(f.bandwidth_rad > 0.0))
        throw Error(ErrorCode::kUnstableFilter, "formant bandwidth must be positive");
    }
  }
}

/// Unit impulses every round(sample_rate / pitch) samples plus noise_mix
/// times seeded white Gaussian noise.
inline Waveform GenerateExcitation(double pitch_hz, double duration_s, int sample_rate,
                                   double noise_mix, std::uint64_t seed) {
  if (sample_rate <= 0) throw Error(ErrorCode::kInvalidArgument, "sample rate must be positive");
  if (!(pitch_hz > 0.0 && pitch_hz < sample_rate / 2.0))
    throw Error(ErrorCode::kInvalidArgument,
                "pitch " + std::to_string(pitch_hz) + " Hz outside (0, Nyquist)");
  if (!(noise_mix >= 0.0 && noise_mix <= 1.0))
    throw Error(ErrorCode::kInvalidArgument, "noise mix outside [0, 1]");
  if (!(duration_s > 0.0)) throw Error(ErrorCode::kInvalidArgument, "duration must be positive");
  const auto n = static_cast<std::size_t>(std::floor(duration_s * sample_rate));
  const auto period = static_cast<std::size_t>(std::lround(sample_rate / pitch_hz));
  Waveform w{std::vector<double>(n, 0.0), sample_rate};
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const double pulse = i % period == 0 ? 1.0 : 0.0;
    const double noise = rng.Gaussian();
    w.samples[i] = pulse + noise_mix * noise;
  }
  return w;
}

/// Formants at time t, linearly interpolated between keyframes and held
/// constant outside the keyed span.
inline std::vector<Formant> FormantsAt(const std::vector<FormantKeyframe>& track, double t) {
  if (t <= track.front().time_s) return track.front().formants;
  if (t >= track.back().time_s) return track.back().formants;
  std::size_t k = 1;
  while (track[k].time_s < t) ++k;
  const FormantKeyframe& a = track[k - 1];
  const FormantKeyframe& b = track[k];
  const double span = b.time_s - a.time_s;
  const double u = span > 0.0 ? (t - a.time_s) / span : 1.0;
  std::vector<Formant> out(a.formants.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].center_rad = a.formants[i].center_rad + u * (b.formants[i].center_rad - a.formants[i].center_rad);
    out[i].bandwidth_rad =
        a.formants[i].bandwidth_rad + u * (b.formants[i].bandwidth_rad - a.formants[i].bandwidth_rad);
  }
  return out;
}

/// Renders one utterance, peak-normalized to 0.5.
inline Waveform GenerateUtterance(const SyntheticSpeakerSpec& spec, double duration_s,
                                  int sample_rate) {
  Validate(spec);
  Waveform w = GenerateExcitation(spec.pitch_hz, duration_s, sample_rate, spec.noise_mix, spec.seed);
  const std::size_t sections = spec.formant_track.front().formants.size();
  std::vector<double> y1(sections, 0.0), y2(sections, 0.0);
  double tilt_state = 0.0;
  double peak = 0.0;
  for (std::size_t n = 0; n < w.samples.size(); ++n) {
    const std::vector<Formant> formants =
        FormantsAt(spec.formant_track, static_cast<double>(n) / sample_rate);
    double x = w.samples[n] + spec.tilt_pole * tilt_state;
    tilt_state = x;
    for (std::size_t s = 0; s < sections; ++s) {
      const double r = formants[s].radius();
      const double y = x + 2.0 * r * std::cos(formants[s].center_rad) * y1[s] - r * r * y2[s];
      y2[s] = y1[s];
      y1[s] = y;
      x = y;
    }
    w.samples[n] = x;
    peak = std::max(peak, std::abs(x));
  }
  if (peak > 0.0)
    for (double& x : w.samples) x *= 0.5 / peak;
  return w;
}

inline std::pair<Waveform, Waveform> GenerateUtterancePair(const SyntheticSpeakerSpec& source,
                                                           const SyntheticSpeakerSpec& target,
                                                           double duration_s, int sample_rate) {
  if (!(duration_s > 0.0)) throw Error(ErrorCode::kInvalidArgument, "duration must be positive");
  return {GenerateUtterance(source, duration_s, sample_rate),
          GenerateUtterance(target, duration_s, sample_rate)};
}

/// Adds white Gaussian noise at the requested signal-to-noise ratio.
inline Waveform AddNoise(const Waveform& w, double snr_db, std::uint64_t seed) {
  double power = 0.0;
  for (double x : w.samples) power += x * x;
  power /= std::max<std::size_t>(w.samples.size(), 1);
  const double sd = std::sqrt(power / std::pow(10.0, snr_db / 10.0));
  Rng rng(seed);
  Waveform out = w;
  for (double& x : out.samples) x += sd * rng.Gaussian();
  return out;
}

// --- Word trajectories and speaker profiles --------------------------------

/// Speaker-independent formant targets in Hz at normalized times in [0, 1].
struct WordKeyframe {
  double time = 0.0;
  std::vector<std::pair<double, double>> formants_hz;  // (centre, bandwidth)
};

using Word = std::vector<WordKeyframe>;

inline Word MakeWord(std::uint64_t word_seed) {
  static constexpr double kLow[5] = {280.0, 850.0, 2200.0, 3250.0, 3900.0};
  static constexpr double kHigh[5] = {800.0, 2250.0, 2950.0, 3650.0, 4200.0};
  static constexpr double kBandwidth[5] = {70.0, 90.0, 120.0, 160.0, 200.0};
  Rng rng(word_seed);
  const int keys = 4 + static_cast<int>(rng.Uniform() * 3.0);
  Word word;
  for (int k = 0; k < keys; ++k) {
    WordKeyframe key;
    const double slot = 1.0 / (keys - 1);
    key.time = k == 0 || k == keys - 1 ? k * slot : (k + rng.Uniform(-0.25, 0.25)) * slot;
    for (int f = 0; f < 5; ++f)
      key.formants_hz.emplace_back(rng.Uniform(kLow[f], kHigh[f]),
                                   kBandwidth[f] * rng.Uniform(0.8, 1.2));
    word.push_back(std::move(key));
  }
  return word;
}

struct SpeakerProfile {
  std::string name;
  double pitch_hz = 120.0;
  double formant_scale = 1.0;
  double bandwidth_scale = 1.0;
  double timing_exponent = 1.0;  // warps normalized time t -> t^exponent
  double tilt_pole = 0.9;
  double noise_mix = 0.05;
};

/// Four fixture speakers; pitches are average speaker pitches (Hz) of two
/// male and two female voices.
inline const std::vector<SpeakerProfile>& FixtureSpeakers() {
  static const std::vector<SpeakerProfile> speakers = {
      {"M1", 120.86, 1.00, 1.00, 1.00, 0.90, 0.05},
      {"M2", 102.89, 0.90, 1.15, 1.08, 0.94, 0.05},
      {"F1", 245.68, 1.16, 0.90, 0.94, 0.82, 0.05},
      {"F2", 226.32, 1.22, 1.05, 1.04, 0.86, 0.05},
  };
  return speakers;
}

inline const SpeakerProfile& FindSpeaker(const std::string& name) {
  for (const SpeakerProfile& s : FixtureSpeakers())
    if (s.name == name) return s;
  throw Error(ErrorCode::kInvalidArgument, "unknown fixture speaker '" + name + "'");
}

inline SyntheticSpeakerSpec MakeSpeakerSpec(const SpeakerProfile& speaker, const Word& word,
                                            double duration_s, int sample_rate,
                                            std::uint64_t seed) {
  SyntheticSpeakerSpec spec;
  spec.pitch_hz = speaker.pitch_hz;
  spec.seed = seed;
  spec.noise_mix = speaker.noise_mix;
  spec.tilt_pole = speaker.tilt_pole;
  const double to_rad = 2.0 * std::numbers::pi / sample_rate;
  for (const WordKeyframe& key : word) {
    FormantKeyframe frame;
    frame.time_s = std::pow(key.time, speaker.timing_exponent) * duration_s;
    for (const auto& [centre, bandwidth] : key.formants_hz) {
      const double rad = std::min(centre * speaker.formant_scale * to_rad, 0.95 * std::numbers::pi);
      frame.formants.push_back({rad, bandwidth * speaker.bandwidth_scale * to_rad});
    }
    spec.formant_track.push_back(std::move(frame));
  }
  return spec;
}

// --- Corpus manifest --------------------------------------------------------

struct CorpusEntry {
  std::string pair;
  std::string direction;  // M2M, M2F, F2M, F2F
  std::string source;
  std::string target;
  std::uint64_t word_seed = 0;
  std::uint64_t source_seed = 0;
  std::uint64_t target_seed = 0;
};

inline constexpr const char* kManifestHeader =
    "pair,direction,source,target,word_seed,source_seed,target_seed";

/// 20 pairs, five per conversion direction.
inline std::vector<CorpusEntry> DefaultCorpus() {
  struct Direction {
    const char* name;
    const char* source;
    const char* target;
  };
  static constexpr Direction kDirections[4] = {
      {"M2M", "M1", "M2"}, {"M2F", "M2", "F2"}, {"F2M", "F1", "M1"}, {"F2F", "F1", "F2"}};
  std::vector<CorpusEntry> corpus;
  for (int d = 0; d < 4; ++d) {
    for (int i = 0; i < 5; ++i) {
      const auto index = static_cast<std::uint64_t>(5 * d + i);
      char name[32];
      std::snprintf(name, sizeof(name), "%s_%02d", kDirections[d].name, i);
      corpus.push_back({name, kDirections[d].name, kDirections[d].source, kDirections[d].target,
                        1000 + index, 2000 + 2 * index, 2001 + 2 * index});
    }
  }
  return corpus;
}

inline std::string FormatManifest(const std::vector<CorpusEntry>& corpus) {
  std::string out = std::string(kManifestHeader) + "\n";
  for (const CorpusEntry& e : corpus)
    out += e.pair + ',' + e.direction + ',' + e.source + ',' + e.target + ',' +
           std::to_string(e.word_seed) + ',' + std::to_string(e.source_seed) + ',' +
           std::to_string(e.target_seed) + '\n';
  return out;
}

inline std::vector<CorpusEntry> ParseManifest(const std::vector<std::string>& lines) {
  if (lines.empty() || lines.front() != kManifestHeader)
    throw Error(ErrorCode::kParseError, "manifest must start with '" + std::string(kManifestHeader) + "'");
  std::vector<CorpusEntry> corpus;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto cells = text::Split(lines[i], ',');
    if (cells.size() != 7)
      throw Error(ErrorCode::kParseError, "manifest line " + std::to_string(i + 1) + " needs 7 fields");
    corpus.push_back({std::string(cells[0]), std::string(cells[1]), std::string(cells[2]),
                      std::string(cells[3]), text::ParseInt<std::uint64_t>(cells[4]),
                      text::ParseInt<std::uint64_t>(cells[5]),
                      text::ParseInt<std::uint64_t>(cells[6])});
  }
  return corpus;
}

/// Renders a manifest entry; with an SNR, independent white noise is added to
/// both utterances (seeded from the speaker seeds).
inline std::pair<Waveform, Waveform> RenderEntry(const CorpusEntry& entry, double duration_s,
                                                 int sample_rate,
                                                 std::optional<double> snr_db = std::nullopt) {
  const Word word = MakeWord(entry.word_seed);
  auto pair = GenerateUtterancePair(
      MakeSpeakerSpec(FindSpeaker(entry.source), word, duration_s, sample_rate, entry.source_seed),
      MakeSpeakerSpec(FindSpeaker(entry.target), word, duration_s, sample_rate, entry.target_seed),
      duration_s, sample_rate);
  if (snr_db) {
    pair.first = AddNoise(pair.first, *snr_db, entry.source_seed ^ 0x9e3779b97f4a7c15ULL);
    pair.second = AddNoise(pair.second, *snr_db, entry.target_seed ^ 0x9e3779b97f4a7c15ULL);
  }
  return pair;
}

}  // namespace lsfvc::testkit
