// Copyright 2026 The lexcomp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lexcomp/report.hpp"

#include <cstdio>
#include <sstream>

namespace lexcomp {

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  std::string out = buf;
  // "-0.00" reads as a sign error in a table.
  if (out[0] == '-' && out.find_first_not_of("-0.") == std::string::npos) out.erase(0, 1);
  return out;
}

std::string format_dollars(std::int64_t picodollars) {
  const bool negative = picodollars < 0;
  const std::int64_t magnitude = negative ? -picodollars : picodollars;
  const std::int64_t micro = (magnitude + 500000) / 1000000;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%lld.%06lld", negative ? "-" : "", static_cast<long long>(micro / 1000000),
                static_cast<long long>(micro % 1000000));
  return buf;
}

namespace {

std::string csv_field(const std::string& v) {
  if (v.find_first_of(",\"\r\n") == std::string::npos) return v;
  std::string out = "\"";
  for (char c : v) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string md_cell(const std::string& v) {
  std::string out;
  for (char c : v) {
    if (c == '|') out += "\\|";
    else if (c == '\n') out += ' ';
    else out += c;
  }
  return out;
}

std::string opt(const std::optional<double>& v, int decimals) { return v ? format_fixed(*v, decimals) : "-"; }

std::string audit_cell(const AuditResult& a, bool sentence) {
  if (!a.audited) return "not audited";
  const double mean = sentence ? a.sentence_error : a.word_error;
  const double std = sentence ? a.sentence_error_std : a.word_error_std;
  if (a.runs > 1) return format_fixed(mean, 2) + " ± " + format_fixed(std, 2);
  return format_fixed(mean, 2);
}

std::string bin_label(std::size_t j, std::size_t bins) {
  const double lo = static_cast<double>(j) / static_cast<double>(bins);
  const double hi = static_cast<double>(j + 1) / static_cast<double>(bins);
  return format_fixed(lo, 2) + "-" + format_fixed(hi, 2);
}

}  // namespace

std::string render_markdown(const EvaluationReport& r) {
  std::ostringstream out;
  out << "# Evaluation report\n\n";
  out << "| parameter | value |\n|---|---|\n";
  out << "| fingerprint | " << r.fingerprint << " |\n";
  for (const auto& [key, value] : r.parameters) out << "| " << md_cell(key) << " | " << md_cell(value) << " |\n";

  out << "\n## Metrics\n\n";
  if (r.task == Task::cwi) {
    out << "| F1 | Acc. |\n|---:|---:|\n";
    out << "| " << opt(r.f1, 2) << " | " << opt(r.accuracy, 2) << " |\n";
    if (r.confusion) {
      const ConfusionMatrix& c = *r.confusion;
      out << "\n## Confusion matrix\n\n";
      out << "| actual \\ predicted | complex | simple |\n|---|---:|---:|\n";
      out << "| complex | " << c.tp << " | " << c.fn << " |\n";
      out << "| simple | " << c.fp << " | " << c.tn << " |\n";
    }
  } else {
    out << "| P | MAE | mean std |\n|---:|---:|---:|\n";
    out << "| " << opt(r.pearson, 4) << " | " << opt(r.mae, 4) << " | " << opt(r.mean_spread, 4) << " |\n";
    if (!r.pearson && !r.pearson_undefined.empty()) out << "\nPearson undefined: " << r.pearson_undefined << "\n";
    if (r.histogram) {
      const PredictionHistogram& h = *r.histogram;
      out << "\n## Prediction distribution\n\n";
      out << "Rows are gold bins, columns are predicted-score bins; `*` marks the bins inside the gold range.\n\n";
      out << "| gold \\ predicted |";
      for (std::size_t j = 0; j < h.bins; ++j) out << ' ' << bin_label(j, h.bins) << " |";
      out << " in range |\n|---|";
      for (std::size_t j = 0; j < h.bins; ++j) out << "---:|";
      out << "---:|\n";
      for (LikertLabel label : kLikertLabels) {
        const int row = static_cast<int>(label);
        out << "| " << likert_name(label) << " |";
        for (std::size_t j = 0; j < h.bins; ++j) {
          const bool band = j >= h.correct_band[row].first && j <= h.correct_band[row].second;
          out << ' ' << h.counts[row][j] << (band ? "*" : "") << " |";
        }
        out << ' ' << h.in_band(label) << '/' << h.row_total(label) << " |\n";
      }
    }
  }

  out << "\n## Hallucination\n\n";
  out << "| S | W | audited responses |\n|---:|---:|---:|\n";
  out << "| " << audit_cell(r.hallucination, true) << " | " << audit_cell(r.hallucination, false) << " | "
      << r.hallucination.audited_count << " |\n";

  out << "\n## Sampling\n\n";
  out << "| examples | scored | samples expected | responses | parsed | recovered | parse failures | "
         "request errors | parse failure rate |\n";
  out << "|---:|---:|---:|---:|---:|---:|---:|---:|---:|\n";
  out << "| " << r.examples << " | " << r.scored_examples << " | " << r.samples_expected << " | " << r.responses
      << " | " << r.parsed << " | " << r.recovered << " | " << r.parse_failures << " | " << r.request_errors
      << " | " << format_fixed(r.parse_failure_rate, 2) << " |\n";
  if (!r.coverage_gaps.empty()) {
    out << "\nExamples without a parsed sample (excluded from metrics):";
    for (const std::string& id : r.coverage_gaps) out << ' ' << id;
    out << "\n";
  }

  out << "\n## Cost\n\n";
  out << "| calls | input tokens | output tokens | cost (USD) |\n|---:|---:|---:|---:|\n";
  out << "| " << r.cost.calls << " | " << r.cost.input_tokens << " | " << r.cost.output_tokens << " | "
      << format_dollars(r.cost.picodollars) << " |\n";
  if (!r.cost.unpriced_models.empty()) {
    out << "\nNo price known for:";
    for (const std::string& m : r.cost.unpriced_models) out << ' ' << m;
    out << "\n";
  }
  return out.str();
}

std::string render_csv(const EvaluationReport& r) {
  std::ostringstream out;
  out << "section,metric,value\n";
  out << "run,fingerprint," << r.fingerprint << '\n';
  out << "run,task," << to_string(r.task) << '\n';
  if (r.task == Task::cwi) {
    out << "metrics,f1," << opt(r.f1, 2) << '\n';
    out << "metrics,accuracy," << opt(r.accuracy, 2) << '\n';
    if (r.confusion) {
      out << "confusion,tp," << r.confusion->tp << '\n';
      out << "confusion,fp," << r.confusion->fp << '\n';
      out << "confusion,tn," << r.confusion->tn << '\n';
      out << "confusion,fn," << r.confusion->fn << '\n';
    }
  } else {
    out << "metrics,pearson," << opt(r.pearson, 4) << '\n';
    out << "metrics,mae," << opt(r.mae, 4) << '\n';
    out << "metrics,mean_std," << opt(r.mean_spread, 4) << '\n';
  }
  out << "hallucination,audited," << (r.hallucination.audited ? "true" : "false") << '\n';
  if (r.hallucination.audited) {
    out << "hallucination,sentence_error," << format_fixed(r.hallucination.sentence_error, 2) << '\n';
    out << "hallucination,sentence_error_std," << format_fixed(r.hallucination.sentence_error_std, 2) << '\n';
    out << "hallucination,word_error," << format_fixed(r.hallucination.word_error, 2) << '\n';
    out << "hallucination,word_error_std," << format_fixed(r.hallucination.word_error_std, 2) << '\n';
  }
  out << "sampling,examples," << r.examples << '\n';
  out << "sampling,scored_examples," << r.scored_examples << '\n';
  out << "sampling,samples_expected," << r.samples_expected << '\n';
  out << "sampling,responses," << r.responses << '\n';
  out << "sampling,parsed," << r.parsed << '\n';
  out << "sampling,recovered," << r.recovered << '\n';
  out << "sampling,parse_failures," << r.parse_failures << '\n';
  out << "sampling,request_errors," << r.request_errors << '\n';
  out << "sampling,parse_failure_rate," << format_fixed(r.parse_failure_rate, 2) << '\n';
  out << "cost,calls," << r.cost.calls << '\n';
  out << "cost,input_tokens," << r.cost.input_tokens << '\n';
  out << "cost,output_tokens," << r.cost.output_tokens << '\n';
  out << "cost,usd," << format_dollars(r.cost.picodollars) << '\n';
  return out.str();
}

std::string render_predictions_csv(const EvaluationReport& r) {
  std::ostringstream out;
  out << "id,gold,prediction,spread,k_used\n";
  for (const PredictionRow& p : r.predictions) {
    out << csv_field(p.id) << ',' << format_fixed(p.gold, 6) << ',' << format_fixed(p.prediction, 6) << ','
        << format_fixed(p.spread, 6) << ',' << p.k_used << '\n';
  }
  return out.str();
}

std::string render_summary_table(std::span<const std::pair<std::string, EvaluationReport>> runs) {
  std::ostringstream out;
  out << "| run | task | F1 | Acc. | P | MAE | S | W | parse failures (%) | cost (USD) |\n";
  out << "|---|---|---:|---:|---:|---:|---:|---:|---:|---:|\n";
  for (const auto& [name, r] : runs) {
    out << "| " << md_cell(name) << " | " << to_string(r.task) << " | " << opt(r.f1, 2) << " | " << opt(r.accuracy, 2)
        << " | " << opt(r.pearson, 4) << " | " << opt(r.mae, 4) << " | "
        << (r.hallucination.audited ? audit_cell(r.hallucination, true) : "-") << " | "
        << (r.hallucination.audited ? audit_cell(r.hallucination, false) : "-") << " | "
        << format_fixed(r.parse_failure_rate, 2) << " | " << format_dollars(r.cost.picodollars) << " |\n";
  }
  return out.str();
}

}  // namespace lexcomp
