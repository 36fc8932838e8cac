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

// lsfvc: LPC/LSF voice conversion from the command line.
//
//   lsfvc analyze in.wav --features f.csv --residual r.csv
//   lsfvc train --source a.wav ... --target b.wav ... --model m.txt [--report mse.csv]
//   lsfvc convert m.txt in.wav out.wav [--raw-lpc] [--poles poles.csv]
//   lsfvc evaluate --source ... --target ... --converted ... --out report.csv
//   lsfvc poles in.wav|features.csv poles.csv
//   lsfvc gen-corpus --out dir [--manifest m.csv] [--snr-db 20]

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lsfvc/lsfvc.hpp"

namespace {

namespace fs = std::filesystem;
using namespace lsfvc;

struct GlobalFlags {
  AnalysisConfig analysis;
  std::uint64_t seed = 42;
  std::string arch = "24-50-24";
  double lr = 0.01;
  double momentum = 0.9;
  int epochs = 5000;
  double convergence_delta = 1e-8;
};

void AddGlobalFlags(CLI::App& app, GlobalFlags& g) {
  app.add_option("--order", g.analysis.order, "LPC order (even)")->capture_default_str();
  app.add_option("--frame-ms", g.analysis.frame_ms, "frame length in ms")->capture_default_str();
  app.add_option("--hop-ms", g.analysis.hop_ms, "frame step in ms")->capture_default_str();
  app.add_option("--alpha", g.analysis.alpha, "pre-emphasis coefficient")->capture_default_str();
  app.add_option("--sigma", g.analysis.sigma, "Gaussian window width relative to half-length")
      ->capture_default_str();
  app.add_option("--seed", g.seed, "weight-initialization seed")->capture_default_str();
  app.add_option("--arch", g.arch, "network layer sizes, e.g. 24-50-24")->capture_default_str();
  app.add_option("--lr", g.lr, "learning rate")->capture_default_str();
  app.add_option("--momentum", g.momentum, "momentum")->capture_default_str();
  app.add_option("--epochs", g.epochs, "maximum training epochs")->capture_default_str();
  app.add_option("--convergence-delta", g.convergence_delta,
                 "stop when successive epoch losses differ by less than this")
      ->capture_default_str();
}

MappingDomain Domain(bool raw_lpc) { return raw_lpc ? MappingDomain::kRawLpc : MappingDomain::kLsf; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LPC/LSF voice conversion toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalFlags g;
  AddGlobalFlags(app, g);

  std::string analyze_in, analyze_features, analyze_residual;
  auto* analyze = app.add_subcommand("analyze", "LPC/LSF analysis of a WAV file");
  analyze->add_option("input", analyze_in, "input WAV")->required();
  analyze->add_option("--features", analyze_features, "feature track output")->required();
  analyze->add_option("--residual", analyze_residual, "residual track output")->required();

  std::vector<std::string> train_sources, train_targets;
  std::string train_model, train_report;
  bool train_raw = false;
  auto* train = app.add_subcommand("train", "train a source-to-target mapping network");
  train->add_option("--source", train_sources, "source WAVs or feature files")->required();
  train->add_option("--target", train_targets, "target WAVs or feature files")->required();
  train->add_option("--model", train_model, "model output")->required();
  train->add_option("--report", train_report, "per-epoch MSE CSV output");
  train->add_flag("--raw-lpc", train_raw, "map predictor coefficients instead of LSFs");

  std::string convert_model, convert_in, convert_out, convert_poles;
  bool convert_raw = false;
  auto* convert = app.add_subcommand("convert", "convert an utterance with a trained model");
  convert->add_option("model", convert_model, "model file")->required();
  convert->add_option("input", convert_in, "source WAV")->required();
  convert->add_option("output", convert_out, "converted WAV")->required();
  convert->add_flag("--raw-lpc", convert_raw, "the model maps predictor coefficients");
  convert->add_option("--poles", convert_poles, "write poles of the mapped filters as CSV");

  std::vector<std::string> eval_sources, eval_targets, eval_converted, eval_names;
  std::string eval_out;
  auto* evaluate = app.add_subcommand("evaluate", "Mel-cepstral distortion report");
  evaluate->add_option("--source", eval_sources, "source WAVs or feature files")->required();
  evaluate->add_option("--target", eval_targets, "target WAVs or feature files")->required();
  evaluate->add_option("--converted", eval_converted, "converted WAVs or feature files")->required();
  evaluate->add_option("--name", eval_names, "row names (default: source file stem)");
  evaluate->add_option("--out", eval_out, "report CSV output")->required();

  std::string poles_in, poles_out;
  auto* poles = app.add_subcommand("poles", "dump filter poles per frame");
  poles->add_option("input", poles_in, "WAV or feature file")->required();
  poles->add_option("output", poles_out, "CSV output")->required();

  std::string corpus_out, corpus_manifest;
  std::optional<double> corpus_snr;
  double corpus_duration = 0.62;
  int corpus_rate = 11025;
  auto* gen = app.add_subcommand("gen-corpus", "render the synthetic speaker-pair corpus");
  gen->add_option("--out", corpus_out, "output directory")->required();
  gen->add_option("--manifest", corpus_manifest, "seed manifest (default: built-in 20 pairs)");
  gen->add_option("--snr-db", corpus_snr, "add white noise at this SNR");
  gen->add_option("--duration", corpus_duration, "utterance length in seconds")->capture_default_str();
  gen->add_option("--sample-rate", corpus_rate, "sample rate in Hz")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) {
      const Analysis a = cmd::Analyze(analyze_in, g.analysis, analyze_features, analyze_residual);
      std::cout << "frames=" << a.features.frames.size()
                << " fallback_frames=" << a.features.fallback_frames << "\n";
      for (std::size_t i : a.fallback_indices)
        std::cerr << "warning: frame " << i << " failed LSF conversion; repeated previous frame\n";
    } else if (*train) {
      cmd::TrainOptions options;
      options.architecture = ParseArchitecture(g.arch);
      options.analysis = g.analysis;
      options.domain = Domain(train_raw);
      options.train.learning_rate = g.lr;
      options.train.momentum = g.momentum;
      options.train.max_epochs = g.epochs;
      options.train.convergence_delta = g.convergence_delta;
      options.train.seed = g.seed;
      std::optional<fs::path> report;
      if (!train_report.empty()) report = train_report;
      const TrainResult r = cmd::Train({train_sources.begin(), train_sources.end()},
                                       {train_targets.begin(), train_targets.end()}, options,
                                       train_model, report);
      std::cout << "epochs=" << r.report.epochs_run
                << " final_mse=" << text::FormatDouble(r.report.final_mse) << "\n";
    } else if (*convert) {
      std::optional<fs::path> poles_csv;
      if (!convert_poles.empty()) poles_csv = convert_poles;
      const cmd::ConvertSummary s = cmd::Convert(convert_model, convert_in, convert_out, g.analysis,
                                                 Domain(convert_raw), poles_csv);
      std::cout << "frames=" << s.frames << " unstable_frames=" << s.unstable_frames
                << " unstable_segments=" << s.unstable_segments
                << " nonfinite_samples=" << s.nonfinite_samples
                << " clipped_samples=" << s.clipped_samples << "\n";
    } else if (*evaluate) {
      if (eval_sources.size() != eval_targets.size() || eval_sources.size() != eval_converted.size())
        throw Error(ErrorCode::kPairingMismatch, "--source, --target and --converted counts differ");
      if (!eval_names.empty() && eval_names.size() != eval_sources.size())
        throw Error(ErrorCode::kPairingMismatch, "--name count differs from --source count");
      std::vector<cmd::EvaluationTriple> triples;
      for (std::size_t i = 0; i < eval_sources.size(); ++i)
        triples.push_back({eval_names.empty() ? fs::path(eval_sources[i]).stem().string() : eval_names[i],
                           eval_sources[i], eval_targets[i], eval_converted[i]});
      for (const NamedReport& r : cmd::Evaluate(triples, g.analysis, eval_out))
        std::cout << r.pair << " percent_decrease=" << text::FormatDouble(r.report.percent_decrease)
                  << "\n";
    } else if (*poles) {
      std::cout << "frames=" << cmd::Poles(poles_in, g.analysis, poles_out) << "\n";
    } else if (*gen) {
      const auto corpus = corpus_manifest.empty()
                              ? testkit::DefaultCorpus()
                              : testkit::ParseManifest(text::ReadLines(corpus_manifest));
      cmd::CorpusOptions options;
      options.duration_s = corpus_duration;
      options.sample_rate = corpus_rate;
      options.snr_db = corpus_snr;
      std::cout << "pairs=" << cmd::GenCorpus(corpus, options, corpus_out).size() << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "lsfvc: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
