// Copyright 2026 The bgqa Authors
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

#include "bgqa/cli.h"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <ostream>

#include "CLI11.hpp"
#include "bgqa/chunker.h"
#include "bgqa/dataset.h"
#include "bgqa/error.h"
#include "bgqa/evalharness.h"
#include "bgqa/index.h"
#include "bgqa/parallel.h"
#include "bgqa/pipeline.h"
#include "bgqa/reader.h"
#include "fmt/format.h"
#include "jsonl.h"

namespace bgqa {
namespace {

namespace fs = std::filesystem;

// All flags live on the top-level app and may come from the config file.
// Subcommands only select the action.
struct RunConfig {
  std::string corpus;
  std::string dataset;
  std::string index_dir;
  std::string chunk = "paragraph";
  std::string fields = "title.bg^2,passage.ngram,passage,passage.bg^2";
  std::string scorer = "lexical";
  std::string similarity = "bm25";
  std::string stopwords;
  std::string stemmer_rules;
  size_t top_n = 2;
  std::vector<size_t> sweep = {1, 2, 5, 10, 20};
  uint64_t seed = 42;
  size_t jobs = DefaultJobs();
  size_t trials = 1;
  std::string out;
  std::string question;
  std::vector<std::string> options;
  std::string id;
  std::string format = "text";
  int timeout = 60;
  size_t concurrency = 4;
};

void Require(const std::string& value, const char* flag, const char* command) {
  if (value.empty()) throw UsageError(fmt::format("{} requires {}", command, flag));
}

void RequireReadable(const std::string& path, const char* flag) {
  if (!fs::exists(path)) throw DataError(fmt::format("{} {}: no such file or directory", flag, path));
}

Analyzer MakeAnalyzer(const RunConfig& c) {
  StopWordList stops = c.stopwords.empty() ? StopWordList::Bulgarian()
                                           : StopWordList::FromFile(c.stopwords);
  std::shared_ptr<const Stemmer> stemmer =
      std::make_shared<SuffixStemmer>(c.stemmer_rules.empty()
                                          ? SuffixStemmer::Bulgarian()
                                          : SuffixStemmer::FromFile(c.stemmer_rules));
  return Analyzer(std::move(stops), std::move(stemmer));
}

RetrievalConfig MakeRetrieval(const RunConfig& c) {
  RetrievalConfig r;
  r.fields = ParseFieldBoosts(c.fields);
  r.per_option_top_n = c.top_n;
  r.similarity = ParseSimilarity(c.similarity);
  r.Validate();
  return r;
}

ScorerHandle MakeHandle(const RunConfig& c) {
  ScorerHandle h = ScorerHandle::Parse(c.scorer);
  h.timeout_seconds = c.timeout;
  h.max_concurrency = std::max<size_t>(1, c.concurrency);
  return h;
}

Index LoadIndexFor(const RunConfig& c, const char* command) {
  Require(c.index_dir, "--index-dir", command);
  return Index::Load(c.index_dir);
}

std::vector<Passage> ChunkCorpus(const RunConfig& c, const ChunkPolicy& policy,
                                 size_t* articles) {
  std::vector<Passage> passages;
  *articles = 0;
  ForEachArticle(c.corpus, [&](Article a) {
    ++*articles;
    auto chunks = Chunk(a, policy);
    std::move(chunks.begin(), chunks.end(), std::back_inserter(passages));
  });
  return passages;
}

int CmdIngest(const RunConfig& c, std::ostream& out) {
  Require(c.corpus, "--corpus", "ingest");
  Require(c.out, "--out", "ingest");
  RequireReadable(c.corpus, "--corpus");
  ChunkPolicy policy = ChunkPolicy::Parse(c.chunk);
  size_t articles = 0;
  auto passages = ChunkCorpus(c, policy, &articles);
  std::string body;
  for (const auto& p : passages) {
    body += io::Dump(nlohmann::json{{"passage_id", p.passage_id}, {"doc_id", p.doc_id},
                                    {"title", p.title}, {"text", p.text},
                                    {"start_char", p.start_char}, {"end_char", p.end_char}});
    body += '\n';
  }
  io::WriteFile(c.out, body);
  out << fmt::format("articles: {}\npassages: {}\nchunk: {}\n", articles, passages.size(),
                     policy.ToString());
  return kExitOk;
}

int CmdIndex(const RunConfig& c, std::ostream& out) {
  Require(c.corpus, "--corpus", "index");
  Require(c.index_dir, "--index-dir", "index");
  ChunkPolicy policy = ChunkPolicy::Parse(c.chunk);
  RequireReadable(c.corpus, "--corpus");
  const auto start = std::chrono::steady_clock::now();
  size_t articles = 0;
  auto passages = ChunkCorpus(c, policy, &articles);
  Index index = Index::Build(std::move(passages), FieldSpec::All(), MakeAnalyzer(c), c.jobs);
  index.Save(c.index_dir);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out << fmt::format("index: {}\nchunk: {}\narticles: {}\npassages: {}\n", c.index_dir,
                     policy.ToString(), articles, index.size());
  for (const auto& f : index.fields()) {
    out << fmt::format("field {}: {} terms, avgdl {:.2f}\n", f.spec().name, f.num_terms(),
                       f.avgdl());
  }
  out << fmt::format("seconds: {:.2f}\n", secs);
  return kExitOk;
}

void PrintTrace(const RunConfig& c, const TraceReport& r, std::ostream& out) {
  if (c.format == "jsonl") {
    out << r.jsonl;
  } else {
    out << r.text;
  }
}

int CmdAsk(const RunConfig& c, std::ostream& out) {
  Require(c.question, "--question", "ask");
  if (c.options.size() < 2) throw UsageError("ask requires at least two --option values");
  Index index = LoadIndexFor(c, "ask");
  Question q;
  q.id = "ask";
  q.text = c.question;
  q.options = c.options;
  auto scorer = MakeScorer(MakeHandle(c), &index);
  EvidenceSet evidence = RetrieveEvidence(index, q, MakeRetrieval(c));
  Prediction p = Answer(q, evidence, *scorer, {MakeHandle(c).max_concurrency});
  PrintTrace(c, Explain(q, evidence, p, std::nullopt), out);
  return kExitOk;
}

int CmdExplain(const RunConfig& c, std::ostream& out) {
  Require(c.dataset, "--dataset", "explain");
  Require(c.id, "--id", "explain");
  RequireReadable(c.dataset, "--dataset");
  Dataset d = LoadDataset(c.dataset);
  auto it = std::find_if(d.questions.begin(), d.questions.end(),
                         [&](const Question& q) { return q.id == c.id; });
  if (it == d.questions.end()) throw DataError("no question with id " + c.id);
  Index index = LoadIndexFor(c, "explain");
  auto scorer = MakeScorer(MakeHandle(c), &index);
  EvidenceSet evidence = RetrieveEvidence(index, *it, MakeRetrieval(c));
  Prediction p = Answer(*it, evidence, *scorer, {MakeHandle(c).max_concurrency});
  PrintTrace(c, Explain(*it, evidence, p, it->gold), out);
  return kExitOk;
}

void WriteReports(const RunConfig& c, const EvalReport& r, const RandomBaseline& b,
                  std::ostream& out) {
  out << ReportMarkdown(r);
  out << fmt::format("random baseline: empirical {:.2f} (seed {}, {} trial{}), analytic {:.2f}\n",
                     b.empirical, b.seed, b.trials, b.trials == 1 ? "" : "s", b.analytic);
  for (const auto& row : r.rows) {
    out << fmt::format("S={}: {} questions, {} ties, {} passages scored, {:.2f}s\n", row.top_n,
                       row.overall.total, row.overall.ties, row.passages_scored,
                       row.wall_seconds);
  }
  if (c.out.empty()) return;
  io::WriteFile(c.out, ReportJsonl(r));
  io::WriteFile(c.out + ".md", ReportMarkdown(r));
  io::WriteFile(c.out + ".csv", ReportCsv(r));
  io::WriteFile(c.out + ".runtime.json", RuntimeJson(r));
  nlohmann::json bj{{"analytic", b.analytic},     {"analytic_sd", b.analytic_sd},
                    {"empirical", b.empirical},   {"seed", b.seed},
                    {"trials", b.trials},         {"categories", nlohmann::json::object()}};
  for (const auto& [cat, acc] : b.categories) bj["categories"][std::string(ToString(cat))] = acc;
  io::WriteFile(c.out + ".random.json", io::Dump(bj) + "\n");
  out << fmt::format("wrote {}\n", c.out);
}

EvalConfig MakeEvalConfig(const RunConfig& c) {
  EvalConfig cfg;
  cfg.retrieval = MakeRetrieval(c);
  cfg.scorer = MakeHandle(c);
  cfg.sweep = NormalizeSweep(c.sweep);
  cfg.seed = c.seed;
  cfg.jobs = c.jobs;
  cfg.label = c.fields;
  cfg.Validate();
  return cfg;
}

int CmdEvaluate(const RunConfig& c, std::ostream& out, bool sweep) {
  const char* name = sweep ? "sweep" : "evaluate";
  Require(c.dataset, "--dataset", name);
  RequireReadable(c.dataset, "--dataset");
  EvalConfig cfg = MakeEvalConfig(c);
  Dataset d = LoadDataset(c.dataset);
  Index index = LoadIndexFor(c, name);
  EvalReport r = sweep ? Sweep(d, index, cfg, cfg.sweep) : Evaluate(d, index, cfg);
  WriteReports(c, r, RunRandomBaseline(d, c.seed, c.trials), out);
  return kExitOk;
}

int CmdStats(const RunConfig& c, std::ostream& out) {
  Require(c.dataset, "--dataset", "stats");
  RequireReadable(c.dataset, "--dataset");
  StatsReport s = ComputeStats(LoadDataset(c.dataset));
  auto line = [](const StatsRow& r) {
    return fmt::format("| {} | {} | {:.2f} | {:.1f} | {:.1f} | {} |\n", r.label, r.count,
                       r.choices, r.len_question, r.len_options, r.vocab_qa);
  };
  std::string table =
      "| Domain | #QA-pairs | #Choices | Len Question | Len Options | Vocabulary Size |\n"
      "|---|---:|---:|---:|---:|---:|\n";
  for (const auto& r : s.groups) table += line(r);
  table += line(s.overall);
  out << table;
  if (!c.out.empty()) {
    auto row_json = [](const StatsRow& r) {
      return nlohmann::json{{"label", r.label},          {"count", r.count},
                            {"choices", r.choices},      {"len_question", r.len_question},
                            {"len_options", r.len_options}, {"vocab_qa", r.vocab_qa},
                            {"total_words", r.total_words}};
    };
    std::string body;
    for (const auto& r : s.categories) body += io::Dump(row_json(r)) + "\n";
    for (const auto& r : s.groups) {
      auto j = row_json(r);
      j["group"] = true;
      body += io::Dump(j) + "\n";
    }
    body += io::Dump(row_json(s.overall)) + "\n";
    io::WriteFile(c.out, body);
    io::WriteFile(c.out + ".md", table);
  }
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Retrieve evidence passages, score answer options and vote."};
  app.name("bgqa");
  app.set_config("--config", "", "Flat key=value file; command-line flags take precedence");
  app.allow_config_extras(false);
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--corpus", c.corpus, "Corpus file: one {doc_id, title, text} per line");
  app.add_option("--dataset", c.dataset, "Question file: one record per line");
  app.add_option("--index-dir", c.index_dir, "Index directory");
  app.add_option("--chunk", c.chunk, "Chunking: paragraph or window:K")->capture_default_str();
  app.add_option("--fields", c.fields, "Query fields, name^boost comma separated")
      ->capture_default_str();
  app.add_option("--scorer", c.scorer, "lexical or remote=URL")->capture_default_str();
  app.add_option("--similarity", c.similarity, "bm25 or cosine")
      ->check(CLI::IsMember({"bm25", "cosine"}))
      ->capture_default_str();
  app.add_option("--top-n", c.top_n, "Hits kept per option query")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--sweep", c.sweep, "Hits-per-option values for sweep")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--seed", c.seed, "Seed for the random baseline")->capture_default_str();
  app.add_option("--trials", c.trials, "Random-baseline passes over the dataset")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--out", c.out, "Output file (reports also get .md/.csv siblings)");
  app.add_option("--stopwords", c.stopwords, "Stop-word file (default: bundled Bulgarian list)");
  app.add_option("--stemmer-rules", c.stemmer_rules, "Stemmer rule file (default: bundled)");
  app.add_option("--question", c.question, "Question text (ask)");
  app.add_option("--option", c.options, "Answer option (ask); repeat per option");
  app.add_option("--id", c.id, "Question id (explain)");
  app.add_option("--format", c.format, "Trace output: text or jsonl")
      ->check(CLI::IsMember({"text", "jsonl"}))
      ->capture_default_str();
  app.add_option("--timeout", c.timeout, "Remote scorer timeout, seconds")->capture_default_str();
  app.add_option("--concurrency", c.concurrency, "Concurrent remote scorer requests")
      ->capture_default_str();

  auto* ingest = app.add_subcommand("ingest", "Chunk a corpus into passages (--corpus, --chunk, --out)");
  auto* index = app.add_subcommand("index", "Chunk and index a corpus (--corpus, --chunk, --index-dir)");
  auto* ask = app.add_subcommand("ask", "Answer one question (--question, --option ...)");
  auto* explain = app.add_subcommand("explain", "Trace one dataset question (--dataset, --id)");
  auto* evaluate = app.add_subcommand("evaluate", "Accuracy over a dataset");
  auto* sweep = app.add_subcommand("sweep", "Accuracy per hits-per-option value (--sweep)");
  auto* stats = app.add_subcommand("stats", "Dataset statistics (--dataset)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "bgqa: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*ingest) return CmdIngest(c, out);
    if (*index) return CmdIndex(c, out);
    if (*ask) return CmdAsk(c, out);
    if (*explain) return CmdExplain(c, out);
    if (*evaluate) return CmdEvaluate(c, out, false);
    if (*sweep) return CmdEvaluate(c, out, true);
    if (*stats) return CmdStats(c, out);
  } catch (const UsageError& e) {
    err << "bgqa: " << e.what() << "\n";
    return kExitUsage;
  } catch (const TransportError& e) {
    err << "bgqa: " << e.what() << "\n";
    return kExitTransport;
  } catch (const std::exception& e) {
    err << "bgqa: " << e.what() << "\n";
    return kExitDataError;
  }
  return kExitUsage;
}

}  // namespace bgqa
