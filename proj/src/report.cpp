// Copyright 2026 The Keyprompt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "keyprompt/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>
#include <vector>

#include "json.hpp"
#include "keyprompt/error.hpp"
#include "keyprompt/rouge.hpp"

namespace keyprompt::report {
namespace {

using promptgen::Mode;

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string JsonString(const std::string& s) {
  return nlohmann::json(s).dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

std::string EmitCsv(const ResultsTable& table) {
  std::string out = "model_tag,mode,technique,metric,value\n";
  for (const auto& [key, value] : table) {
    out += CsvField(key.model_tag) + ',' + std::string(promptgen::ModeKey(key.mode)) + ',' +
           CsvField(key.technique) + ',' + CsvField(key.metric) + ',' + FormatRounded(value) + '\n';
  }
  return out;
}

std::string CellJson(const CellKey& key, const std::string& value) {
  return "{\"model_tag\": " + JsonString(key.model_tag) + ", \"mode\": \"" +
         std::string(promptgen::ModeKey(key.mode)) + "\", \"technique\": " +
         JsonString(key.technique) + ", \"metric\": " + JsonString(key.metric) +
         ", \"value\": " + value + "}";
}

std::string EmitJson(const ResultsTable& table) {
  std::string out = "[";
  bool first = true;
  for (const auto& [key, value] : table) {
    out += first ? "\n  " : ",\n  ";
    first = false;
    out += CellJson(key, FormatRounded(value));
  }
  return out + (first ? "]\n" : "\n]\n");
}

std::string EmitJsonl(const ResultsTable& table) {
  std::string out;
  for (const auto& [key, value] : table) {
    out += CellJson(key, nlohmann::json(value).dump()) + '\n';
  }
  return out;
}

// One pivot per metric: techniques down, model/mode pairs across.
std::string EmitMarkdown(const ResultsTable& table) {
  std::set<std::string> metrics, techniques;
  std::set<std::pair<std::string, Mode>> columns;
  for (const auto& [key, value] : table) {
    metrics.insert(key.metric);
    techniques.insert(key.technique);
    columns.emplace(key.model_tag, key.mode);
  }
  std::string out;
  for (const auto& metric : metrics) {
    if (!out.empty()) out += '\n';
    out += "### " + metric + "\n\n| Technique |";
    for (const auto& [model, mode] : columns) {
      out += ' ' + model + ' ' + std::string(promptgen::ModeLabel(mode)) + " |";
    }
    out += "\n|---|";
    for (std::size_t i = 0; i < columns.size(); ++i) out += "---:|";
    out += '\n';
    for (const auto& technique : techniques) {
      std::string row = "| " + technique + " |";
      bool any = false;
      for (const auto& [model, mode] : columns) {
        const auto it = table.find(CellKey{model, mode, technique, metric});
        if (it == table.end()) {
          row += "  |";
        } else {
          row += ' ' + FormatRounded(it->second) + " |";
          any = true;
        }
      }
      if (any) out += row + '\n';
    }
  }
  return out;
}

}  // namespace

bool IsReservedLabel(std::string_view technique) {
  return technique == kFineTuningLabel || technique == kOriginalLabel;
}

std::string CellKey::ToString() const {
  return model_tag + "/" + std::string(promptgen::ModeLabel(mode)) + "/" + technique + "/" + metric;
}

double Improvement(double v_technique, double v_baseline) {
  if (v_baseline == 0.0) throw Error(ErrorCode::kZeroBaseline, "baseline value is zero");
  return (v_technique - v_baseline) / v_baseline;
}

ResultsTable ImprovementTable(const ResultsTable& main, std::string_view baseline_label) {
  ResultsTable out;
  for (const auto& [key, value] : main) {
    if (IsReservedLabel(key.technique) || key.technique == baseline_label) continue;
    CellKey base = key;
    base.technique = std::string(baseline_label);
    const auto it = main.find(base);
    if (it == main.end()) throw Error(ErrorCode::kMissingBaseline, base.ToString());
    try {
      out[key] = Improvement(value, it->second);
    } catch (const Error&) {
      throw Error(ErrorCode::kZeroBaseline, base.ToString());
    }
  }
  return out;
}

ResultsTable ConfusionComparison(const ResultsTable& confused, const ResultsTable& main) {
  for (const auto& [key, value] : main) {
    if (!IsReservedLabel(key.technique) && !confused.count(key)) {
      throw Error(ErrorCode::kMissingCell, "confused table lacks " + key.ToString());
    }
  }
  ResultsTable out;
  for (const auto& [key, value] : confused) {
    if (IsReservedLabel(key.technique)) continue;
    const auto it = main.find(key);
    if (it == main.end()) throw Error(ErrorCode::kMissingCell, "main table lacks " + key.ToString());
    try {
      out[key] = Improvement(value, it->second);
    } catch (const Error&) {
      throw Error(ErrorCode::kZeroBaseline, key.ToString());
    }
  }
  return out;
}

std::string FormatRounded(double v) {
  char buf[512];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed);
  std::string s(buf, res.ptr);
  if (!std::isfinite(v)) return s;

  const bool negative = !s.empty() && s.front() == '-';
  if (negative) s.erase(0, 1);
  const auto dot = s.find('.');
  std::string int_part = s.substr(0, dot);
  std::string frac = dot == std::string::npos ? "" : s.substr(dot + 1);
  const bool round_up = frac.size() > 3 && frac[3] >= '5';
  frac.resize(3, '0');

  // Carry through the digits as one decimal string.
  std::string digits = int_part + frac;
  if (round_up) {
    std::size_t i = digits.size();
    while (i > 0) {
      --i;
      if (digits[i] == '9') {
        digits[i] = '0';
      } else {
        ++digits[i];
        break;
      }
      if (i == 0) digits.insert(digits.begin(), '1');
    }
  }
  std::string out = negative ? "-" : "";
  out += digits.substr(0, digits.size() - 3);
  out += '.';
  out += digits.substr(digits.size() - 3);
  return out;
}

std::string Emit(const ResultsTable& table, std::string_view format) {
  if (format == "csv") return EmitCsv(table);
  if (format == "json") return EmitJson(table);
  if (format == "markdown") return EmitMarkdown(table);
  if (format == "jsonl") return EmitJsonl(table);
  throw Error(ErrorCode::kBadFormat,
              "unknown format \"" + std::string(format) + "\" (expected csv, json, markdown or jsonl)");
}

ResultsTable ParseTable(std::istream& in) {
  ResultsTable table;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::kMalformedRecord, "table line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (textproc::TrimWhitespace(line).empty()) continue;
    const auto obj = nlohmann::json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) fail("not a JSON object");
    CellKey key;
    std::string mode;
    for (auto [name, field] : {std::pair<const char*, std::string*>{"model_tag", &key.model_tag},
                               {"mode", &mode},
                               {"technique", &key.technique},
                               {"metric", &key.metric}}) {
      const auto it = obj.find(name);
      if (it == obj.end() || !it->is_string()) fail(std::string("missing string \"") + name + "\"");
      *field = it->get<std::string>();
    }
    const auto parsed_mode = promptgen::ParseMode(mode);
    if (!parsed_mode) fail("unknown mode \"" + mode + "\"");
    key.mode = *parsed_mode;
    if (!rouge::IsMetricName(key.metric)) fail("unknown metric \"" + key.metric + "\"");
    const auto value = obj.find("value");
    if (value == obj.end() || !value->is_number()) fail("missing numeric \"value\"");
    const double v = value->get<double>();
    if (!std::isfinite(v)) fail("value is not finite");
    if (!table.emplace(std::move(key), v).second) fail("duplicate cell");
  }
  return table;
}

ResultsTable LoadTable(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open table file " + path);
  return ParseTable(in);
}

}  // namespace keyprompt::report
