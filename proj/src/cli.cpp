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

#include "keyprompt/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "keyprompt/corpus.hpp"
#include "keyprompt/embedding.hpp"
#include "keyprompt/error.hpp"
#include "keyprompt/keyterms.hpp"
#include "keyprompt/parallel.hpp"
#include "keyprompt/promptgen.hpp"
#include "keyprompt/report.hpp"
#include "keyprompt/rouge.hpp"
#include "keyprompt/textproc.hpp"

#ifndef KEYPROMPT_VERSION
#define KEYPROMPT_VERSION "unknown"
#endif

namespace keyprompt::cli {
namespace {

namespace fs = std::filesystem;
using promptgen::PromptedExample;
using rouge::TextRecord;

// Readers never observe a half-written output: write a sibling temp file,
// then rename it over the target.
void WriteFileAtomically(const std::string& path, const std::string& content) {
  const fs::path target(path);
  std::error_code ec;
  if (target.has_parent_path()) fs::create_directories(target.parent_path(), ec);
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
  }
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw Error(ErrorCode::kIo, "cannot move output into place at " + path + ": " + ec.message());
  }
}

template <typename Fn>
std::string Render(Fn&& fn) {
  std::ostringstream os;
  fn(os);
  return os.str();
}

void Emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
  } else {
    WriteFileAtomically(path, content);
  }
}

std::string OneLine(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '\r', ' ');
  return s;
}

const std::vector<std::string> kModeKeys = {"id", "s-na", "s-wa"};
const std::vector<std::string> kTechniqueKeys = {"keywords", "mesh", "keybert", "tf", "tfidf"};
const std::vector<std::string> kMetricKeys = {"rouge1", "rouge2", "rougeLsum"};

// --- options -----------------------------------------------------------------

struct IngestOptions {
  std::string input, output, rejections, headings;
  double sd = 2.0;
  unsigned threads = 1;
};

struct StatsOptions {
  std::string input, output;
  std::vector<std::size_t> limits = {512, 1024, 2048};
};

struct SplitOptions {
  std::string input, output_dir;
  std::vector<double> ratios = {0.70, 0.15, 0.15};
  std::uint64_t seed = 0;
};

struct BuildOptions {
  std::string input, output, mode = "id", technique = "keywords", embedder = "hash", stopwords;
  std::size_t terms = 10;
  std::size_t input_limit = 0, target_limit = 0;  // 0: mode default
  std::vector<int> ngram_range = {1, 1};
  unsigned threads = 1;
  bool skip_unusable = false;
};

struct ConfuseOptions {
  std::string input, output;
  std::uint64_t seed = 0;
};

struct LeadOptions {
  std::string input, output;
  std::size_t tokens = 64;
  bool with_prompt = false;
};

struct IntegrateOptions {
  std::string input, output;
};

struct ScoreOptions {
  std::string predictions, references, output, cell_output, model_tag, cell_mode, cell_technique;
  std::vector<std::string> metrics = kMetricKeys;
  unsigned threads = 1;
};

struct ReportOptions {
  std::string main, confused, baseline = std::string(report::kFineTuningLabel), format = "csv",
                                  output;
  std::vector<std::string> inputs;
};

// --- subcommands -------------------------------------------------------------

void RunIngest(const IngestOptions& o, std::ostream& out) {
  std::optional<corpus::HeadingTable> custom;
  if (!o.headings.empty()) custom = corpus::HeadingTable::Load(o.headings);
  const auto& headings = custom ? *custom : corpus::HeadingTable::Default();
  const auto articles = corpus::LoadArticles(o.input, headings, o.threads);
  const auto result = corpus::FilterCorpus(articles, o.sd);
  WriteFileAtomically(o.output, Render([&](std::ostream& os) { corpus::WriteArticles(os, result.kept); }));
  WriteFileAtomically(o.rejections,
                      Render([&](std::ostream& os) { corpus::WriteRejections(os, result.rejected); }));
  out << "{\"kept\": " << result.kept.size() << ", \"rejected\": " << result.rejected.size() << "}\n";
}

void RunStats(const StatsOptions& o, std::ostream& out) {
  const auto stats = corpus::ComputeCorpusStats(corpus::LoadArticles(o.input), o.limits);
  nlohmann::ordered_json obj;
  obj["n_articles"] = stats.n_articles;
  obj["mean_length"] = stats.mean_length;
  obj["sd_length"] = stats.sd_length;
  auto& coverage = obj["truncation_coverage"] = nlohmann::ordered_json::object();
  for (const auto& [limit, fraction] : stats.truncation_coverage) coverage[std::to_string(limit)] = fraction;
  Emit(o.output, obj.dump(2) + "\n", out);
}

void RunSplit(const SplitOptions& o, std::ostream& out) {
  if (o.ratios.size() != 3) throw Error(ErrorCode::kBadRatios, "expected three ratios");
  const auto articles = corpus::LoadArticles(o.input);
  const auto split = corpus::SplitCorpus(articles, {o.ratios[0], o.ratios[1], o.ratios[2]}, o.seed);
  std::map<std::string, const corpus::Article*> by_id;
  for (const auto& a : articles) by_id[a.id] = &a;
  auto write = [&](const char* name, std::vector<std::string> ids) {
    std::sort(ids.begin(), ids.end());
    std::vector<corpus::Article> part;
    for (const auto& id : ids) part.push_back(*by_id.at(id));
    WriteFileAtomically((fs::path(o.output_dir) / name).string(),
                        Render([&](std::ostream& os) { corpus::WriteArticles(os, part); }));
  };
  write("train.jsonl", split.train);
  write("validation.jsonl", split.validation);
  write("test.jsonl", split.test);
  out << "{\"train\": " << split.train.size() << ", \"validation\": " << split.validation.size()
      << ", \"test\": " << split.test.size() << "}\n";
}

void RunBuild(const BuildOptions& o, std::ostream& out, std::ostream& err) {
  const auto mode = *promptgen::ParseMode(o.mode);
  const auto technique = *keyterms::ParseTechnique(o.technique);
  auto articles = corpus::LoadArticles(o.input);
  std::sort(articles.begin(), articles.end(),
            [](const corpus::Article& a, const corpus::Article& b) { return a.id < b.id; });

  auto limits = promptgen::TruncationLimits::DefaultsFor(mode);
  if (o.input_limit) limits.input = o.input_limit;
  if (o.target_limit) limits.target = o.target_limit;

  std::optional<textproc::StopwordList> stopwords;
  if (!o.stopwords.empty()) stopwords = textproc::StopwordList::Load(o.stopwords);
  std::unique_ptr<keyterms::EmbeddingProvider> embedder;
  if (technique == keyterms::Technique::kKeyBert) embedder = keyterms::MakeEmbeddingProvider(o.embedder);

  promptgen::ExtractorConfig config;
  config.n_terms = o.terms;
  if (stopwords) config.stopwords = &*stopwords;
  config.embedder = embedder.get();
  config.ngram_range = {o.ngram_range.at(0), o.ngram_range.at(1)};

  std::vector<std::vector<PromptedExample>> built(articles.size());
  std::vector<std::string> skipped(articles.size());
  ParallelFor(articles.size(), o.threads, [&](std::size_t i) {
    try {
      built[i] = promptgen::BuildExamples(articles[i], mode, technique, limits, config);
    } catch (const Error& e) {
      const bool unusable =
          e.code() == ErrorCode::kNoTermsAvailable || e.code() == ErrorCode::kMissingSection;
      if (!o.skip_unusable || !unusable) throw;
      skipped[i] = e.what();
    }
  });

  std::vector<PromptedExample> examples;
  std::size_t n_skipped = 0;
  for (std::size_t i = 0; i < articles.size(); ++i) {
    if (!skipped[i].empty()) {
      ++n_skipped;
      err << "skipped " << articles[i].id << ": " << OneLine(skipped[i]) << "\n";
    }
    for (auto& ex : built[i]) examples.push_back(std::move(ex));
  }
  WriteFileAtomically(o.output, Render([&](std::ostream& os) { promptgen::WriteDataset(os, examples); }));
  out << "{\"examples\": " << examples.size() << ", \"skipped\": " << n_skipped << "}\n";
}

void RunConfuse(const ConfuseOptions& o, std::ostream& out) {
  const auto confused = promptgen::Confuse(promptgen::LoadDataset(o.input), o.seed);
  WriteFileAtomically(o.output, Render([&](std::ostream& os) { promptgen::WriteDataset(os, confused); }));
  out << "{\"examples\": " << confused.size() << "}\n";
}

// Baseline predictions: the first N tokens of the input, optionally led by
// the prompt's terms so that the output depends on the prompt.
void RunLead(const LeadOptions& o, std::ostream& out) {
  std::vector<TextRecord> records;
  for (const auto& ex : promptgen::LoadDataset(o.input)) {
    std::string text;
    if (o.with_prompt) {
      if (const auto parsed = promptgen::ParsePrompt(ex.prompt)) {
        for (const auto& term : parsed->terms) text += term + " ";
      }
    }
    text += textproc::TruncateTokens(ex.input_text, o.tokens);
    records.push_back({ex.ExampleId(), std::move(text)});
  }
  WriteFileAtomically(o.output, Render([&](std::ostream& os) { rouge::WriteTextRecords(os, records); }));
  out << "{\"predictions\": " << records.size() << "}\n";
}

void RunIntegrate(const IntegrateOptions& o, std::ostream& out) {
  std::map<std::string, std::map<corpus::SectionKind, std::string>> parts;
  for (const auto& r : rouge::LoadTextRecords(o.input)) {
    const auto colon = r.id.rfind(':');
    const auto kind = colon == std::string::npos ? std::nullopt
                                                 : corpus::ParseSectionKind(r.id.substr(colon + 1));
    if (!kind || !corpus::IsImrad(*kind)) {
      throw Error(ErrorCode::kMalformedRecord, "prediction id \"" + r.id + "\" has no section suffix");
    }
    if (!parts[r.id.substr(0, colon)].emplace(*kind, r.text).second) {
      throw Error(ErrorCode::kDuplicateId, r.id);
    }
  }
  std::vector<TextRecord> records;
  for (const auto& [id, sections] : parts) {
    records.push_back({id, promptgen::IntegrateSectionSummaries(sections)});
  }
  WriteFileAtomically(o.output, Render([&](std::ostream& os) { rouge::WriteTextRecords(os, records); }));
  out << "{\"predictions\": " << records.size() << "}\n";
}

struct References {
  std::vector<TextRecord> records;
  std::optional<promptgen::Mode> mode;  // uniform over a dataset file
  std::optional<std::string> technique;
};

// Either a dataset file (targets keyed by example id) or an {id, text} file.
References LoadReferences(const std::string& path) {
  if (!fs::exists(path)) throw Error(ErrorCode::kMissingReference, "references file not found: " + path);
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kMissingReference, "cannot open references file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string content = buf.str();

  bool is_dataset = false;
  std::istringstream lines(content);
  for (std::string line; std::getline(lines, line);) {
    if (textproc::TrimWhitespace(line).empty()) continue;
    const auto obj = nlohmann::json::parse(line, nullptr, false);
    is_dataset = obj.is_object() && obj.contains("article_id");
    break;
  }

  References refs;
  std::istringstream stream(content);
  if (!is_dataset) {
    refs.records = rouge::ParseTextRecords(stream);
    return refs;
  }
  std::set<promptgen::Mode> modes;
  std::set<std::string> techniques;
  for (const auto& ex : promptgen::ParseDataset(stream)) {
    refs.records.push_back({ex.ExampleId(), ex.target});
    modes.insert(ex.mode);
    techniques.insert(std::string(keyterms::TechniqueLabel(ex.technique)));
  }
  if (modes.size() == 1) refs.mode = *modes.begin();
  if (techniques.size() == 1) refs.technique = *techniques.begin();
  return refs;
}

void RunScore(const ScoreOptions& o, std::ostream& out) {
  const auto predictions = rouge::LoadTextRecords(o.predictions);
  const auto refs = LoadReferences(o.references);
  const auto scores = rouge::ScoreCorpus(predictions, refs.records, o.metrics, o.threads);
  Emit(o.output, Render([&](std::ostream& os) { rouge::WriteScores(os, scores); }), out);

  if (o.cell_output.empty()) return;
  if (o.model_tag.empty()) throw Error(ErrorCode::kInvalidArgument, "--cell-output needs --model-tag");
  const auto mode = o.cell_mode.empty() ? refs.mode : promptgen::ParseMode(o.cell_mode);
  if (!mode) throw Error(ErrorCode::kInvalidArgument, "cell mode unknown; pass --cell-mode");
  const auto technique = o.cell_technique.empty() ? refs.technique : std::optional(o.cell_technique);
  if (!technique) throw Error(ErrorCode::kInvalidArgument, "cell technique unknown; pass --cell-technique");
  report::ResultsTable cells;
  for (const auto& cs : scores) cells[{o.model_tag, *mode, *technique, cs.metric}] = cs.mean_f;
  WriteFileAtomically(o.cell_output, report::Emit(cells, "jsonl"));
}

void RunReport(const std::string& which, const ReportOptions& o, std::ostream& out) {
  report::ResultsTable table;
  if (which == "improvements") {
    table = report::ImprovementTable(report::LoadTable(o.main), o.baseline);
  } else if (which == "confusion") {
    table = report::ConfusionComparison(report::LoadTable(o.confused), report::LoadTable(o.main));
  } else {
    for (const auto& path : o.inputs) {
      for (auto& [key, value] : report::LoadTable(path)) {
        if (!table.emplace(key, value).second) {
          throw Error(ErrorCode::kMalformedRecord, "cell " + key.ToString() + " appears twice");
        }
      }
    }
  }
  Emit(o.output, report::Emit(table, o.format), out);
}

}  // namespace

int RunCommand(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Key-term prompted summarization datasets and ROUGE reporting", "keyprompt"};
  app.set_version_flag("--version", "keyprompt " KEYPROMPT_VERSION);
  app.set_config("--config", "", "INI/TOML file with option defaults; flags override it");
  app.require_subcommand(1);

  auto threads_opt = [](CLI::App* sub, unsigned& threads) {
    sub->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1u, 1024u));
  };

  IngestOptions ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Classify sections and filter a raw article file");
  ingest_cmd->add_option("--input", ingest.input, "Raw articles (JSONL)")->required()->check(CLI::ExistingFile);
  ingest_cmd->add_option("--output", ingest.output, "Kept articles")->required();
  ingest_cmd->add_option("--rejections", ingest.rejections, "Rejection report")->required();
  ingest_cmd->add_option("--headings", ingest.headings, "Heading table replacing the bundled one")
      ->check(CLI::ExistingFile);
  ingest_cmd->add_option("--sd", ingest.sd, "Length outlier threshold in standard deviations")
      ->check(CLI::PositiveNumber);
  threads_opt(ingest_cmd, ingest.threads);

  StatsOptions stats;
  auto* stats_cmd = app.add_subcommand("stats", "Length statistics and truncation coverage");
  stats_cmd->add_option("--input", stats.input, "Articles (JSONL)")->required()->check(CLI::ExistingFile);
  stats_cmd->add_option("--limits", stats.limits, "Truncation limits in tokens")->delimiter(',');
  stats_cmd->add_option("--output", stats.output, "Output file (default stdout)");

  SplitOptions split;
  auto* split_cmd = app.add_subcommand("split", "Seeded train/validation/test split");
  split_cmd->add_option("--input", split.input, "Articles (JSONL)")->required()->check(CLI::ExistingFile);
  split_cmd->add_option("--output-dir", split.output_dir, "Directory for train/validation/test.jsonl")->required();
  split_cmd->add_option("--ratios", split.ratios, "train,validation,test")->delimiter(',')->expected(3);
  split_cmd->add_option("--seed", split.seed, "Shuffle seed");

  BuildOptions build;
  auto* build_cmd = app.add_subcommand("build", "Build a prompted dataset");
  build_cmd->add_option("--input", build.input, "Articles (JSONL)")->required()->check(CLI::ExistingFile);
  build_cmd->add_option("--output", build.output, "Dataset file")->required();
  build_cmd->add_option("--mode", build.mode, "id | s-na | s-wa")->check(CLI::IsMember(kModeKeys));
  build_cmd->add_option("--technique", build.technique, "keywords | mesh | keybert | tf | tfidf")
      ->check(CLI::IsMember(kTechniqueKeys));
  build_cmd->add_option("--terms", build.terms, "Terms per prompt")->check(CLI::PositiveNumber);
  build_cmd->add_option("--input-limit", build.input_limit, "Input truncation in tokens")
      ->check(CLI::PositiveNumber);
  build_cmd->add_option("--target-limit", build.target_limit, "Target truncation in tokens")
      ->check(CLI::PositiveNumber);
  build_cmd->add_option("--embedder", build.embedder, "hash[:dim[:seed]] or file:<path>");
  build_cmd->add_option("--stopwords", build.stopwords, "Stopword list replacing the bundled one")
      ->check(CLI::ExistingFile);
  build_cmd->add_option("--ngram-range", build.ngram_range, "lo,hi for KeyBERT candidates")
      ->delimiter(',')
      ->expected(2);
  build_cmd->add_flag("--skip-unusable", build.skip_unusable,
                      "Skip articles without terms or required sections instead of failing");
  threads_opt(build_cmd, build.threads);

  ConfuseOptions confuse;
  auto* confuse_cmd = app.add_subcommand("confuse", "Swap prompts across articles");
  confuse_cmd->add_option("--input", confuse.input, "Dataset file")->required()->check(CLI::ExistingFile);
  confuse_cmd->add_option("--output", confuse.output, "Confused dataset file")->required();
  confuse_cmd->add_option("--seed", confuse.seed, "Derangement seed");

  LeadOptions lead;
  auto* lead_cmd = app.add_subcommand("lead", "Lead-N baseline predictions for a dataset");
  lead_cmd->add_option("--input", lead.input, "Dataset file")->required()->check(CLI::ExistingFile);
  lead_cmd->add_option("--output", lead.output, "Predictions file")->required();
  lead_cmd->add_option("--tokens", lead.tokens, "Tokens of input text to keep")->check(CLI::PositiveNumber);
  lead_cmd->add_flag("--with-prompt", lead.with_prompt, "Prefix each prediction with its prompt terms");

  IntegrateOptions integrate;
  auto* integrate_cmd = app.add_subcommand("integrate", "Join per-section predictions per article");
  integrate_cmd->add_option("--input", integrate.input, "Section predictions")->required()->check(CLI::ExistingFile);
  integrate_cmd->add_option("--output", integrate.output, "Article predictions")->required();

  ScoreOptions score;
  auto* score_cmd = app.add_subcommand("score", "ROUGE-score predictions");
  score_cmd->add_option("--predictions", score.predictions, "Predictions {id, text}")->required()->check(CLI::ExistingFile);
  score_cmd->add_option("--references", score.references, "Dataset file or {id, text} file")->required();
  score_cmd->add_option("--metrics", score.metrics, "rouge1,rouge2,rougeLsum")
      ->delimiter(',')
      ->check(CLI::IsMember(kMetricKeys));
  score_cmd->add_option("--output", score.output, "Scores file (default stdout)");
  score_cmd->add_option("--cell-output", score.cell_output, "Also write mean F as table cells");
  score_cmd->add_option("--model-tag", score.model_tag, "Model tag for --cell-output");
  score_cmd->add_option("--cell-mode", score.cell_mode, "Mode for --cell-output (default: from references)");
  score_cmd->add_option("--cell-technique", score.cell_technique,
                        "Technique label for --cell-output (default: from references)");
  threads_opt(score_cmd, score.threads);

  ReportOptions rep;
  auto* report_cmd = app.add_subcommand("report", "Improvement and confusion tables");
  report_cmd->require_subcommand(1);
  auto common = [&](CLI::App* sub) {
    sub->add_option("--format", rep.format, "csv | json | markdown | jsonl");
    sub->add_option("--output", rep.output, "Output file (default stdout)");
  };
  auto* improvements_cmd = report_cmd->add_subcommand("improvements", "Relative gain over a baseline row");
  improvements_cmd->add_option("--main", rep.main, "Results table")->required()->check(CLI::ExistingFile);
  improvements_cmd->add_option("--baseline", rep.baseline, "Baseline technique label");
  common(improvements_cmd);
  auto* confusion_cmd = report_cmd->add_subcommand("confusion", "Confused results relative to main results");
  confusion_cmd->add_option("--confused", rep.confused, "Confused results table")->required()->check(CLI::ExistingFile);
  confusion_cmd->add_option("--main", rep.main, "Results table")->required()->check(CLI::ExistingFile);
  common(confusion_cmd);
  auto* merge_cmd = report_cmd->add_subcommand("merge", "Concatenate result tables");
  merge_cmd->add_option("--inputs", rep.inputs, "Table files")->required()->check(CLI::ExistingFile);
  common(merge_cmd);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "UsageError: " << OneLine(e.what()) << "\n" << app.help();
    return 2;
  }

  try {
    if (ingest_cmd->parsed()) RunIngest(ingest, out);
    else if (stats_cmd->parsed()) RunStats(stats, out);
    else if (split_cmd->parsed()) RunSplit(split, out);
    else if (build_cmd->parsed()) RunBuild(build, out, err);
    else if (confuse_cmd->parsed()) RunConfuse(confuse, out);
    else if (lead_cmd->parsed()) RunLead(lead, out);
    else if (integrate_cmd->parsed()) RunIntegrate(integrate, out);
    else if (score_cmd->parsed()) RunScore(score, out);
    else if (improvements_cmd->parsed()) RunReport("improvements", rep, out);
    else if (confusion_cmd->parsed()) RunReport("confusion", rep, out);
    else if (merge_cmd->parsed()) RunReport("merge", rep, out);
  } catch (const Error& e) {
    err << OneLine(e.what()) << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "InternalError: " << OneLine(e.what()) << "\n";
    return 1;
  }
  return 0;
}

}  // namespace keyprompt::cli
