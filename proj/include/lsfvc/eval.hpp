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

// Mel-cepstral distortion and the percentage spectral decrease of a conversion.
//
// The distance is applied to whatever parameter vectors the caller passes in;
// the pipeline feeds it pi-normalized LSF vectors.

#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "lsfvc/align.hpp"
#include "lsfvc/error.hpp"
#include "lsfvc/text_io.hpp"

namespace lsfvc {

/// 10 / ln(10): converts natural-log units to decibels.
inline constexpr double kMcdScale = 10.0 / std::numbers::ln10;

struct ConversionReport {
  double mcd_source_target = 0.0;
  double mcd_converted_target = 0.0;
  double mcd_source_converted = 0.0;
  double percent_decrease = 0.0;
};

/// (10 / ln 10) * sqrt(2 * sum_i (t_i - p_i)^2), in dB.
inline double McdFrame(std::span<const double> target, std::span<const double> predicted) {
  if (target.size() != predicted.size())
    throw Error(ErrorCode::kDimensionMismatch,
                std::to_string(target.size()) + " vs " + std::to_string(predicted.size()));
  double acc = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    const double d = target[i] - predicted[i];
    acc += d * d;
  }
  return kMcdScale * std::sqrt(2.0 * acc);
}

/// Mean frame MCD over the DTW path between the two sequences.
inline double McdSequences(const FeatureSequence& target, const FeatureSequence& predicted) {
  const DtwAlignment alignment = DtwAlign(target, predicted);
  double total = 0.0;
  for (const auto& [i, j] : alignment.path) total += McdFrame(target[i], predicted[j]);
  return total / static_cast<double>(alignment.path.size());
}

inline double PercentDecrease(double mcd_source_target, double mcd_converted_target) {
  if (!(mcd_source_target > 0.0))
    throw Error(ErrorCode::kDegenerateDistance,
                "source and target are spectrally identical; percentage is undefined");
  return 100.0 * (mcd_source_target - mcd_converted_target) / mcd_source_target;
}

/// Positive percent_decrease: the conversion moved toward the target.
inline ConversionReport MakeConversionReport(const FeatureSequence& source,
                                             const FeatureSequence& target,
                                             const FeatureSequence& converted) {
  ConversionReport r;
  r.mcd_source_target = McdSequences(target, source);
  r.mcd_converted_target = McdSequences(target, converted);
  r.mcd_source_converted = McdSequences(source, converted);
  r.percent_decrease = PercentDecrease(r.mcd_source_target, r.mcd_converted_target);
  return r;
}

struct NamedReport {
  std::string pair;
  ConversionReport report;
};

/// CSV with one row per pair and a trailing MEAN row (column-wise means).
inline std::string FormatReportCsv(const std::vector<NamedReport>& rows) {
  std::string out = "pair,mcd_src_tgt,mcd_conv_tgt,mcd_src_conv,percent_decrease\n";
  ConversionReport mean;
  auto row = [&out](const std::string& name, const ConversionReport& r) {
    out += name + ',' + text::FormatDouble(r.mcd_source_target) + ',' +
           text::FormatDouble(r.mcd_converted_target) + ',' +
           text::FormatDouble(r.mcd_source_converted) + ',' +
           text::FormatDouble(r.percent_decrease) + '\n';
  };
  for (const NamedReport& r : rows) {
    row(r.pair, r.report);
    mean.mcd_source_target += r.report.mcd_source_target;
    mean.mcd_converted_target += r.report.mcd_converted_target;
    mean.mcd_source_converted += r.report.mcd_source_converted;
    mean.percent_decrease += r.report.percent_decrease;
  }
  if (!rows.empty()) {
    const double n = static_cast<double>(rows.size());
    mean.mcd_source_target /= n;
    mean.mcd_converted_target /= n;
    mean.mcd_source_converted /= n;
    mean.percent_decrease /= n;
  }
  row("MEAN", mean);
  return out;
}

}  // namespace lsfvc
