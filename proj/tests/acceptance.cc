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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.
//
//   acceptance [work_dir]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lsfvc/lsfvc.hpp"
#include "oracles.hpp"

namespace {

namespace fs = std::filesystem;
using namespace lsfvc;

// Tolerances and budgets.
constexpr double kLevinsonTolerance = 1e-9;
constexpr double kLevinsonBudgetS = 10.0;
constexpr double kRoundTripTolerance = 1e-6;
constexpr double kTrivialLsfTolerance = 1e-9;
constexpr double kRoundTripBudgetS = 30.0;
constexpr double kGradientStep = 1e-6;
constexpr double kGradientTolerance = 1e-4;
constexpr double kGradientFloor = 1e-3;
constexpr double kMcdUnitExpected = 6.141851;
constexpr double kMcdUnitTolerance = 1e-5;
constexpr double kResynthesisTolerance = 1e-6;
constexpr double kCleanMeanFloor = 50.0;
constexpr double kNoisyMeanFloor = 20.0;
constexpr double kNoiseSnrDb = 20.0;
constexpr double kEndToEndBudgetS = 600.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Stopwatch {
 public:
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string Fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), format, args...);
  return buf;
}

// --- 1 ---------------------------------------------------------------------

Outcome LevinsonOracle() {
  Stopwatch clock;
  Rng rng(1);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t order = 1 + static_cast<std::size_t>(trial % 24);
    const auto r = testing::RandomAutocorrelation(rng, order);
    const LpcFrame lpc = LevinsonDurbin(r, order);
    const auto oracle = testing::ToeplitzOracle(r, order);
    if (lpc.coefficients.size() != order) return {false, Fmt("trial %d returned order %zu", trial, lpc.coefficients.size())};
    for (std::size_t k = 0; k < order; ++k)
      worst = std::max(worst, std::abs(lpc.coefficients[k] - oracle[k]));
  }
  const double s = clock.Seconds();
  return {worst <= kLevinsonTolerance && s < kLevinsonBudgetS,
          Fmt("1000 solves, max |diff| %.3g (<= %.0e), %.2f s (< %.0f s)", worst, kLevinsonTolerance, s,
              kLevinsonBudgetS)};
}

// --- 2 ---------------------------------------------------------------------

Outcome LsfRoundTrip() {
  Stopwatch clock;
  Rng rng(2);
  double worst = 0.0, worst_trivial = 0.0;
  for (std::size_t order : {2u, 8u, 16u, 24u}) {
    for (int trial = 0; trial < 1000; ++trial) {
      const auto w = testing::RandomLsf(rng, order);
      const LsfVector back = LpcToLsf(LsfToLpc({w}, 1.0));
      for (std::size_t k = 0; k < order; ++k) worst = std::max(worst, std::abs(back.omegas[k] - w[k]));
    }
    const LsfVector trivial = LpcToLsf(LpcFrame{std::vector<double>(order, 0.0), 1.0, false});
    for (std::size_t k = 0; k < order; ++k) {
      const double expected = static_cast<double>(k + 1) * std::numbers::pi / static_cast<double>(order + 1);
      worst_trivial = std::max(worst_trivial, std::abs(trivial.omegas[k] - expected));
    }
  }
  const double s = clock.Seconds();
  return {worst <= kRoundTripTolerance && worst_trivial <= kTrivialLsfTolerance && s < kRoundTripBudgetS,
          Fmt("4x1000 round trips, max |err| %.3g (<= %.0e); trivial predictor max |err| %.3g (<= %.0e); "
              "%.2f s (< %.0f s)",
              worst, kRoundTripTolerance, worst_trivial, kTrivialLsfTolerance, s, kRoundTripBudgetS)};
}

// --- 3 ---------------------------------------------------------------------

// Half the vectors have well-spread gaps; the other half are sorted uniform
// draws, which include near-coincident neighbours.
Outcome LsfStability() {
  Rng rng(3);
  int violations = 0, tested = 0;
  double largest = 0.0;
  while (tested < 1000) {
    std::vector<double> w;
    if (tested % 2 == 0) {
      w = testing::RandomLsf(rng, 24);
    } else {
      w.resize(24);
      for (double& x : w) x = rng.Uniform(0.0, std::numbers::pi);
      std::sort(w.begin(), w.end());
      if (!ValidateLsf(w)) continue;
    }
    const double m = MaxPoleMagnitude(LsfToLpc({w}, 1.0));
    largest = std::max(largest, m);
    if (!(m < 1.0)) ++violations;
    ++tested;
  }
  return {violations == 0, Fmt("1000 order-24 vectors, %d violations, largest pole magnitude %.9f",
                               violations, largest)};
}

// --- 5 ---------------------------------------------------------------------

Outcome DtwOracle() {
  Rng rng(5);
  int mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = 1 + static_cast<std::size_t>(rng.Uniform() * 8);
    const auto m = 1 + static_cast<std::size_t>(rng.Uniform() * 8);
    const auto dim = 1 + static_cast<std::size_t>(rng.Uniform() * 4);
    FeatureSequence a(n, std::vector<double>(dim)), b(m, std::vector<double>(dim));
    for (auto* seq : {&a, &b})
      for (auto& v : *seq)
        for (double& x : v) x = rng.Uniform(-1.0, 1.0);
    if (DtwAlign(a, b).total_cost != testing::BruteForceDtwCost(a, b)) ++mismatches;
  }
  return {mismatches == 0, Fmt("200 instances up to 8x8, %d cost mismatches vs exhaustive enumeration",
                               mismatches)};
}

// --- 6 ---------------------------------------------------------------------

double SampleLoss(const MlpModel& m, const std::vector<double>& x, const std::vector<double>& t) {
  const auto y = Forward(m, x);
  double acc = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) acc += (y[i] - t[i]) * (y[i] - t[i]);
  return acc;
}

Outcome GradientCheck() {
  Rng rng(6);
  double worst = 0.0;
  std::size_t checked = 0;
  for (const char* arch : {"24-30-24", "24-50-24", "24-25-25-24", "24-25-50-25-24"}) {
    MlpModel m = InitMlp(ParseArchitecture(arch), 42);
    for (DenseLayer& layer : m.layers)
      for (double& b : layer.biases) b = rng.Uniform(-0.1, 0.1);
    for (int sample = 0; sample < 20; ++sample) {
      std::vector<double> x(24), t(24);
      for (double& v : x) v = rng.Uniform(0.0, 1.0);
      for (double& v : t) v = rng.Uniform(0.0, 1.0);
      const MlpGradients g = ComputeGradients(m, x, t);
      auto check = [&](double& param, double analytic) {
        const double saved = param;
        param = saved + kGradientStep;
        const double up = SampleLoss(m, x, t);
        param = saved - kGradientStep;
        const double down = SampleLoss(m, x, t);
        param = saved;
        const double numeric = (up - down) / (2.0 * kGradientStep);
        const double scale = std::max({std::abs(numeric), std::abs(analytic), kGradientFloor});
        worst = std::max(worst, std::abs(numeric - analytic) / scale);
        ++checked;
      };
      for (std::size_t l = 0; l < m.layers.size(); ++l) {
        for (std::size_t k = 0; k < m.layers[l].weights.size(); ++k)
          check(m.layers[l].weights[k], g.layers[l].weights[k]);
        for (std::size_t k = 0; k < m.layers[l].biases.size(); ++k)
          check(m.layers[l].biases[k], g.layers[l].biases[k]);
      }
    }
  }
  return {worst <= kGradientTolerance,
          Fmt("4 architectures x 20 samples, %zu partials, max relative error %.3g (<= %.0e)", checked,
              worst, kGradientTolerance)};
}

// --- 7 ---------------------------------------------------------------------

Outcome McdFormula() {
  std::vector<double> unit(24, 0.0), zero(24, 0.0);
  unit[0] = 1.0;
  const double value = McdFrame(unit, zero);
  bool ok = std::abs(value - kMcdUnitExpected) <= kMcdUnitTolerance;
  Rng rng(7);
  int asymmetric = 0, nonzero = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a(24), b(24);
    for (double& v : a) v = rng.Uniform(0.0, 1.0);
    for (double& v : b) v = rng.Uniform(0.0, 1.0);
    if (McdFrame(a, b) != McdFrame(b, a)) ++asymmetric;
    if (McdFrame(a, a) != 0.0) ++nonzero;
  }
  ok = ok && asymmetric == 0 && nonzero == 0;
  return {ok, Fmt("unit difference %.7f dB (%.6f +/- %.0e); %d nonzero self-distances, %d asymmetric pairs "
                  "of 100",
                  value, kMcdUnitExpected, kMcdUnitTolerance, nonzero, asymmetric)};
}

// --- 8 ---------------------------------------------------------------------

Outcome ResynthesisIdentity() {
  const auto corpus = testkit::DefaultCorpus();
  double worst = 0.0;
  std::size_t unstable = 0;
  for (std::size_t i = 0; i < 10; ++i) {
    const auto [src, tgt] = testkit::RenderEntry(corpus[2 * i], 0.62, 11025);
    const Waveform& input = i % 2 == 0 ? src : tgt;
    const Analysis a = AnalyzeWaveform(input, AnalysisConfig{});
    const SynthesisResult s = Resynthesize(a);
    unstable += s.unstable_segments;
    const Waveform emphasized = Preemphasize(input, 0.97);
    for (std::size_t n = 0; n < s.samples.size(); ++n)
      worst = std::max(worst, std::abs(s.samples[n] - emphasized.samples[n]));
  }
  return {worst <= kResynthesisTolerance && unstable == 0,
          Fmt("10 utterances, max |sample error| %.3g (<= %.0e)", worst, kResynthesisTolerance)};
}

// --- 4, 9, 10: file-based corpus runs --------------------------------------

struct CorpusRun {
  fs::path dir;
  std::vector<NamedReport> reports;
  std::map<std::string, double> direction_mean;
  double mean = 0.0;
  std::size_t unstable_frames = 0;
  std::size_t nonfinite_samples = 0;
  std::vector<fs::path> artifacts;  // models, training reports, feature files, MCD report
  double seconds = 0.0;
};

// gen-corpus, one model per direction trained on its five pairs, convert every
// source utterance, analyze all three signals to feature files, evaluate.
CorpusRun RunCorpus(const fs::path& dir, std::optional<double> snr_db, MappingDomain domain) {
  Stopwatch clock;
  fs::remove_all(dir);
  for (const char* sub : {"models", "converted", "features"}) fs::create_directories(dir / sub);
  CorpusRun run;
  run.dir = dir;
  cmd::CorpusOptions corpus_options;
  corpus_options.snr_db = snr_db;
  const auto files = cmd::GenCorpus(testkit::DefaultCorpus(), corpus_options, dir / "corpus");

  const AnalysisConfig analysis;
  cmd::TrainOptions train;
  train.architecture = ParseArchitecture("24-50-24");
  train.train.seed = 42;
  train.domain = domain;

  std::map<std::string, std::vector<const cmd::CorpusFiles*>> by_direction;
  for (const cmd::CorpusFiles& f : files) by_direction[f.entry.direction].push_back(&f);

  std::vector<cmd::EvaluationTriple> triples;
  for (const auto& [direction, members] : by_direction) {
    std::vector<fs::path> sources, targets;
    for (const cmd::CorpusFiles* f : members) {
      sources.push_back(f->source);
      targets.push_back(f->target);
    }
    const fs::path model = dir / "models" / (direction + ".txt");
    const fs::path mse = dir / "models" / (direction + "_mse.csv");
    cmd::Train(sources, targets, train, model, mse);
    run.artifacts.push_back(model);
    run.artifacts.push_back(mse);
    for (const cmd::CorpusFiles* f : members) {
      const std::string& pair = f->entry.pair;
      const fs::path converted = dir / "converted" / (pair + ".wav");
      const cmd::ConvertSummary s = cmd::Convert(model, f->source, converted, analysis, domain, std::nullopt);
      run.unstable_frames += s.unstable_frames;
      run.nonfinite_samples += s.nonfinite_samples;
      cmd::EvaluationTriple triple{pair, {}, {}, {}};
      for (auto [wav, tag, slot] : {std::tuple{f->source, "src", &triple.source},
                                    std::tuple{f->target, "tgt", &triple.target},
                                    std::tuple{converted, "conv", &triple.converted}}) {
        const fs::path features = dir / "features" / (pair + "_" + tag + ".csv");
        cmd::Analyze(wav, analysis, features, dir / "features" / (pair + "_" + tag + "_residual.csv"));
        run.artifacts.push_back(features);
        *slot = features;
      }
      triples.push_back(std::move(triple));
    }
  }
  if (domain == MappingDomain::kLsf) {
    const fs::path report = dir / "report.csv";
    run.reports = cmd::Evaluate(triples, analysis, report);
    run.artifacts.push_back(report);
    std::map<std::string, int> counts;
    for (const NamedReport& r : run.reports) {
      const std::string direction = r.pair.substr(0, r.pair.find('_'));
      run.direction_mean[direction] += r.report.percent_decrease;
      ++counts[direction];
      run.mean += r.report.percent_decrease;
    }
    for (auto& [direction, total] : run.direction_mean) total /= counts[direction];
    run.mean /= static_cast<double>(run.reports.size());
  }
  run.seconds = clock.Seconds();
  return run;
}

std::string DirectionSummary(const CorpusRun& run) {
  std::string out;
  for (const auto& [direction, mean] : run.direction_mean) out += Fmt(" %s %.1f%%", direction.c_str(), mean);
  return out;
}

bool AllDirectionsPositive(const CorpusRun& run) {
  if (run.direction_mean.size() != 4) return false;
  for (const auto& [direction, mean] : run.direction_mean)
    if (!(mean > 0.0)) return false;
  return true;
}

std::string FileBytes(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path work = argc > 1 ? fs::path(argv[1]) : fs::path("acceptance_work");
  int failures = 0;
  auto report = [&failures](int id, const char* name, const std::function<Outcome()>& body) {
    Outcome outcome;
    try {
      outcome = body();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    if (!outcome.pass) ++failures;
    std::printf("%s %2d %s: %s\n", outcome.pass ? "PASS" : "FAIL", id, name, outcome.detail.c_str());
    std::fflush(stdout);
  };

  report(1, "levinson-durbin vs dense toeplitz solve", LevinsonOracle);
  report(2, "lpc/lsf round trip", LsfRoundTrip);
  report(3, "lsf reconstruction stability", LsfStability);

  std::optional<CorpusRun> clean;
  std::string clean_error;
  try {
    clean = RunCorpus(work / "clean", std::nullopt, MappingDomain::kLsf);
  } catch (const std::exception& e) {
    clean_error = e.what();
  }
  auto need_clean = [&]() -> const CorpusRun& {
    if (!clean) throw std::runtime_error("clean corpus run failed: " + clean_error);
    return *clean;
  };

  report(4, "raw-lpc instability vs lsf stability", [&]() -> Outcome {
    const CorpusRun& lsf = need_clean();
    const CorpusRun raw = RunCorpus(work / "raw_lpc", std::nullopt, MappingDomain::kRawLpc);
    return {raw.unstable_frames >= 1 && lsf.unstable_frames == 0,
            Fmt("raw-lpc path %zu unstable of 2400 mapped frames (%zu non-finite samples zeroed); "
                "lsf path %zu unstable",
                raw.unstable_frames, raw.nonfinite_samples, lsf.unstable_frames)};
  });
  report(5, "dtw vs exhaustive enumeration", DtwOracle);
  report(6, "backprop gradient check", GradientCheck);
  report(7, "mel-cepstral distortion formula", McdFormula);
  report(8, "analysis-resynthesis identity", ResynthesisIdentity);
  report(9, "end-to-end percent decrease", [&]() -> Outcome {
    const CorpusRun& c = need_clean();
    const CorpusRun noisy = RunCorpus(work / "noisy", kNoiseSnrDb, MappingDomain::kLsf);
    const double seconds = c.seconds + noisy.seconds;
    const bool ok = c.mean >= kCleanMeanFloor && noisy.mean >= kNoisyMeanFloor && AllDirectionsPositive(c) &&
                    AllDirectionsPositive(noisy) && seconds < kEndToEndBudgetS;
    return {ok, Fmt("clean mean %.2f%% (>= %.0f):%s; noisy %.0f dB mean %.2f%% (>= %.0f):%s; %.0f s (< %.0f s)",
                    c.mean, kCleanMeanFloor, DirectionSummary(c).c_str(), kNoiseSnrDb, noisy.mean,
                    kNoisyMeanFloor, DirectionSummary(noisy).c_str(), seconds, kEndToEndBudgetS)};
  });
  report(10, "determinism of the clean run", [&]() -> Outcome {
    const CorpusRun& first = need_clean();
    const CorpusRun second = RunCorpus(work / "clean_repeat", std::nullopt, MappingDomain::kLsf);
    if (first.artifacts.size() != second.artifacts.size())
      return {false, "artifact lists differ in length"};
    std::size_t differing = 0;
    for (std::size_t i = 0; i < first.artifacts.size(); ++i) {
      const std::string a = FileBytes(first.artifacts[i]);
      if (a.empty() || a != FileBytes(second.artifacts[i])) ++differing;
    }
    return {differing == 0, Fmt("%zu model, training-report, feature and MCD-report files compared, %zu differ",
                                first.artifacts.size(), differing)};
  });

  std::printf("%s: %d of 10 criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
