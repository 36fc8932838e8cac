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

// File-level implementations of the command-line verbs. Each returns what it
// computed so callers (the CLI, tests) can inspect results without reparsing.

#pragma once

#include <cctype>
#include <filesystem>
#include <iterator>
#include <optional>
#include <string>
#include <vector>

#include "lsfvc/align.hpp"
#include "lsfvc/error.hpp"
#include "lsfvc/eval.hpp"
#include "lsfvc/lpc.hpp"
#include "lsfvc/mlp.hpp"
#include "lsfvc/pipeline.hpp"
#include "lsfvc/signal_io.hpp"
#include "lsfvc/testkit.hpp"
#include "lsfvc/text_io.hpp"

namespace lsfvc::cmd {

namespace fs = std::filesystem;

inline bool IsWavPath(const fs::path& path) {
  std::string ext = path.extension().string();
  for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext == ".wav";
}

/// A WAV is analyzed with `config`; anything else is read as a feature file.
inline FeatureTrack LoadTrack(const fs::path& path, const AnalysisConfig& config) {
  if (IsWavPath(path)) return AnalyzeWaveform(ReadWav(path), config).features;
  return LoadFeatureTrack(path);
}

inline Analysis Analyze(const fs::path& wav, const AnalysisConfig& config,
                        const fs::path& features_out, const fs::path& residual_out) {
  Analysis analysis = AnalyzeWaveform(ReadWav(wav), config);
  SaveFeatureTrack(analysis.features, features_out);
  SaveResidualTrack(analysis.residual, residual_out);
  return analysis;
}

/// Aligned training pairs for one utterance pair: DTW runs on the
/// pi-normalized LSF tracks; the pairs carry either those LSFs or the
/// predictor coefficients of the aligned frames.
inline std::vector<TrainingPair> AlignedPairs(const FeatureTrack& source, const FeatureTrack& target,
                                              MappingDomain domain) {
  const FeatureSequence src = NormalizedLsf(source);
  const FeatureSequence tgt = NormalizedLsf(target);
  const DtwAlignment alignment = DtwAlign(src, tgt);
  if (domain == MappingDomain::kLsf) return PairFrames(alignment, src, tgt);
  return PairFrames(alignment, LpcCoefficientSequence(source), LpcCoefficientSequence(target));
}

struct TrainOptions {
  std::vector<std::size_t> architecture{24, 50, 24};
  TrainConfig train;
  AnalysisConfig analysis;
  MappingDomain domain = MappingDomain::kLsf;
};

inline std::string FormatTrainReportCsv(const TrainReport& report) {
  std::string out = "epoch,mse\n";
  for (std::size_t i = 0; i < report.mse_history.size(); ++i)
    out += std::to_string(i + 1) + ',' + text::FormatDouble(report.mse_history[i]) + '\n';
  out += "final," + text::FormatDouble(report.final_mse) + '\n';
  return out;
}

inline TrainResult Train(const std::vector<fs::path>& sources, const std::vector<fs::path>& targets,
                         const TrainOptions& options, const fs::path& model_out,
                         const std::optional<fs::path>& report_out) {
  if (sources.empty() || sources.size() != targets.size())
    throw Error(ErrorCode::kPairingMismatch,
                std::to_string(sources.size()) + " source and " + std::to_string(targets.size()) +
                    " target utterances");
  const std::size_t order = options.analysis.order;
  if (options.architecture.front() != order || options.architecture.back() != order)
    throw Error(ErrorCode::kDimensionMismatch,
                "architecture " + FormatArchitecture(options.architecture) +
                    " does not map order-" + std::to_string(order) + " vectors");
  std::vector<TrainingPair> pairs;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const FeatureTrack src = LoadTrack(sources[i], options.analysis);
    const FeatureTrack tgt = LoadTrack(targets[i], options.analysis);
    if (src.config.order != order || tgt.config.order != order)
      throw Error(ErrorCode::kDimensionMismatch, "feature order differs from --order");
    auto aligned = AlignedPairs(src, tgt, options.domain);
    pairs.insert(pairs.end(), std::make_move_iterator(aligned.begin()),
                 std::make_move_iterator(aligned.end()));
  }
  TrainResult result = lsfvc::Train(InitMlp(options.architecture, options.train.seed), pairs,
                                    options.train);
  SaveModel(result.model, model_out);
  if (report_out) text::WriteFile(*report_out, FormatTrainReportCsv(result.report));
  return result;
}

inline std::string FormatPolesCsv(const std::vector<LpcFrame>& filters) {
  std::string out = "frame,re,im,magnitude\n";
  for (std::size_t i = 0; i < filters.size(); ++i) {
    std::vector<Complex> poles;
    try {
      poles = LpcPoles(filters[i]);
    } catch (const RootFindingError& e) {
      poles = e.best().roots;
    }
    for (const Complex& z : poles)
      out += std::to_string(i) + ',' + text::FormatDouble(z.real()) + ',' +
             text::FormatDouble(z.imag()) + ',' + text::FormatDouble(std::abs(z)) + '\n';
  }
  return out;
}

struct ConvertSummary {
  std::size_t frames = 0;
  std::size_t unstable_frames = 0;
  std::size_t unstable_segments = 0;
  std::size_t nonfinite_samples = 0;
  std::size_t clipped_samples = 0;
};

inline ConvertSummary Convert(const fs::path& model_path, const fs::path& wav_in,
                              const fs::path& wav_out, const AnalysisConfig& config,
                              MappingDomain domain, const std::optional<fs::path>& poles_out) {
  const MlpModel model = LoadModel(model_path);
  const Analysis analysis = AnalyzeWaveform(ReadWav(wav_in), config);
  const ConversionOutput converted = ConvertAnalysis(model, analysis, domain);
  WriteWav(converted.waveform, wav_out);
  if (poles_out) text::WriteFile(*poles_out, FormatPolesCsv(converted.filters));
  ConvertSummary summary;
  summary.frames = converted.filters.size();
  summary.unstable_frames = converted.unstable_frames;
  summary.unstable_segments = converted.unstable_segments;
  summary.nonfinite_samples = converted.nonfinite_samples;
  for (double x : converted.waveform.samples)
    if (x < -1.0 || x >= 1.0) ++summary.clipped_samples;
  return summary;
}

struct EvaluationTriple {
  std::string name;
  fs::path source, target, converted;
};

inline std::vector<NamedReport> Evaluate(const std::vector<EvaluationTriple>& triples,
                                         const AnalysisConfig& config, const fs::path& csv_out) {
  std::vector<NamedReport> rows;
  for (const EvaluationTriple& t : triples) {
    const FeatureSequence src = NormalizedLsf(LoadTrack(t.source, config));
    const FeatureSequence tgt = NormalizedLsf(LoadTrack(t.target, config));
    const FeatureSequence conv = NormalizedLsf(LoadTrack(t.converted, config));
    rows.push_back({t.name, MakeConversionReport(src, tgt, conv)});
  }
  text::WriteFile(csv_out, FormatReportCsv(rows));
  return rows;
}

inline std::size_t Poles(const fs::path& input, const AnalysisConfig& config, const fs::path& csv_out) {
  const std::vector<LpcFrame> filters = TrackFilters(LoadTrack(input, config));
  text::WriteFile(csv_out, FormatPolesCsv(filters));
  return filters.size();
}

struct CorpusOptions {
  double duration_s = 0.62;
  int sample_rate = 11025;
  std::optional<double> snr_db;
};

struct CorpusFiles {
  testkit::CorpusEntry entry;
  fs::path source, target;
};

/// Writes <pair>_src.wav / <pair>_tgt.wav for every manifest entry plus a copy
/// of the manifest as manifest.csv.
inline std::vector<CorpusFiles> GenCorpus(const std::vector<testkit::CorpusEntry>& corpus,
                                          const CorpusOptions& options, const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::kUnwritablePath, out_dir.string() + ": " + ec.message());
  std::vector<CorpusFiles> files;
  for (const testkit::CorpusEntry& entry : corpus) {
    const auto [src, tgt] =
        testkit::RenderEntry(entry, options.duration_s, options.sample_rate, options.snr_db);
    CorpusFiles f{entry, out_dir / (entry.pair + "_src.wav"), out_dir / (entry.pair + "_tgt.wav")};
    WriteWav(src, f.source);
    WriteWav(tgt, f.target);
    files.push_back(std::move(f));
  }
  text::WriteFile(out_dir / "manifest.csv", testkit::FormatManifest(corpus));
  return files;
}

}  // namespace lsfvc::cmd
