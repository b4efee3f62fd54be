// Copyright 2026 The docstruct Authors.
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

// Command-line front end.
//
//   docstruct structure --input segs.jsonl --predictor heuristic --wi 3 --wo 3 --out trees.jsonl
//   docstruct dataset --synthetic --docs 100 --seed 42 --out trees.jsonl
//   docstruct dataset --trees trees.jsonl --wi 3 --out train.jsonl
//   docstruct eval --pred pred.jsonl --gold gold.jsonl --out report.json
//   docstruct selfcheck --trials 1000 --seed 42 --baseline
//
// Exit codes: 0 success, 1 validation, 2 runtime, 3 property failure.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "docstruct/docstruct.hpp"
#include "docstruct/remote_predictor.hpp"
#include "docstruct/selfcheck.hpp"

namespace {

using docstruct::Json;

constexpr const char* kVersion = "0.3.0";

enum ExitCode { kOk = 0, kValidation = 1, kRuntime = 2, kPropertyFailure = 3 };

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

void write_json_file(const std::string& path, const Json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since)
      .count();
}

docstruct::TokenizerProfile resolve_profile(const std::string& name_or_path) {
  if (auto p = docstruct::builtin_profile(name_or_path)) return *p;
  auto in = open_in(name_or_path);
  try {
    return docstruct::profile_from_json(Json::parse(in));
  } catch (const std::exception& e) {
    throw ValidationError("bad tokenizer profile " + name_or_path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// structure

struct StructureArgs {
  std::string input;
  std::string predictor = "heuristic";
  int wi = 1;
  int wo = 1;
  std::string out;
  std::string gold_actions;
  std::string endpoint;
  std::string endpoint_path = "/generate";
  int timeout_ms = 30000;
  int retries = 3;
  int tokens_per_action = 8;
  std::string constraint_mode = "repair";
  std::string profile = "baichuan-7b";
  std::string join_separator = " ";
  std::size_t stack_truncation = 0;
  unsigned workers = 0;
  std::string manifest;
  bool print_tree = false;
};

struct DocOutcome {
  std::optional<docstruct::StructureResult> result;
  std::string error;
};

int run_structure(const StructureArgs& a) {
  // Flag validation precedes any I/O.
  docstruct::StructuringConfig config;
  config.input_window = a.wi;
  config.output_window = a.wo;
  config.join_separator = a.join_separator;
  if (a.stack_truncation > 0) config.stack_entry_truncation = a.stack_truncation;
  try {
    config.validate();
  } catch (const docstruct::Error& e) {
    throw ValidationError(e.what());
  }
  const auto mode = docstruct::parse_constraint_mode(a.constraint_mode);
  if (!mode) throw ValidationError("unknown constraint mode " + a.constraint_mode);
  if (a.predictor == "oracle" && a.gold_actions.empty()) {
    throw ValidationError("--predictor oracle requires --gold-actions");
  }
  if (a.predictor == "remote" && a.endpoint.empty()) {
    throw ValidationError("--predictor remote requires --endpoint");
  }

  docstruct::ConstraintPolicy policy{*mode, resolve_profile(a.profile)};
  auto in = open_in(a.input);
  const auto docs = docstruct::read_segments(in);

  std::map<std::string, std::vector<docstruct::Action>> gold;
  if (a.predictor == "oracle") {
    auto gin = open_in(a.gold_actions);
    for (auto& d : docstruct::read_actions(gin)) {
      gold[d.doc_id] = docstruct::parse_actions(d.actions);
    }
  }
  docstruct::RemoteConfig remote;
  remote.base_url = a.endpoint;
  remote.path = a.endpoint_path;
  remote.timeout_ms = a.timeout_ms;
  remote.max_attempts = a.retries;
  remote.tokens_per_action = a.tokens_per_action;
  remote.load_environment();

  const auto started = std::chrono::steady_clock::now();
  std::vector<DocOutcome> outcomes(docs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < docs.size(); i = next++) {
      const auto& doc = docs[i];
      try {
        std::unique_ptr<docstruct::ActionPredictor> predictor;
        if (a.predictor == "oracle") {
          auto it = gold.find(doc.doc_id);
          if (it == gold.end()) throw docstruct::Error("no gold actions for " + doc.doc_id);
          predictor = std::make_unique<docstruct::OraclePredictor>(it->second, a.wo);
        } else if (a.predictor == "heuristic") {
          predictor = std::make_unique<docstruct::HeuristicPredictor>();
        } else {
          predictor = std::make_unique<docstruct::RemotePredictor>(remote);
        }
        const auto segments = doc.text_segments();
        auto result = docstruct::structure_document(segments, *predictor, config, policy);
        result.report.doc_id = doc.doc_id;
        outcomes[i].result = std::move(result);
      } catch (const std::exception& e) {
        outcomes[i].error = e.what();
      }
    }
  };
  const unsigned pool =
      std::max(1u, a.workers ? a.workers : std::thread::hardware_concurrency());
  {
    std::vector<std::jthread> threads;
    for (unsigned t = 0; t < pool; ++t) threads.emplace_back(worker);
  }
  const double wall_ms = elapsed_ms(started);

  std::vector<docstruct::TreeDocument> trees;
  Json reports = Json::array();
  Json errors = Json::array();
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (outcomes[i].result) {
      trees.push_back({docs[i].doc_id, outcomes[i].result->tree});
      reports.push_back(docstruct::to_json(outcomes[i].result->report));
      if (a.print_tree) {
        std::cout << "# " << docs[i].doc_id << '\n'
                  << docstruct::pretty_print(outcomes[i].result->tree, a.join_separator);
      }
    } else {
      errors.push_back({{"doc_id", docs[i].doc_id}, {"error", outcomes[i].error}});
      std::cerr << "error: " << docs[i].doc_id << ": " << outcomes[i].error << '\n';
    }
  }
  {
    auto out = open_out(a.out);
    docstruct::write_trees(out, trees);
  }

  Json manifest{
      {"command", "structure"},
      {"version", kVersion},
      {"inputs", {{"segments", a.input}, {"gold_actions", a.gold_actions}}},
      {"output", a.out},
      {"config",
       {{"predictor", a.predictor},
        {"wi", a.wi},
        {"wo", a.wo},
        {"constraint_mode", docstruct::to_string(policy.mode)},
        {"tokenizer_profile", docstruct::profile_to_json(policy.profile)},
        {"join_separator", a.join_separator},
        {"stack_entry_truncation", a.stack_truncation},
        {"endpoint", a.endpoint}}},
      {"documents", reports},
      {"errors", errors},
      {"wall_ms", wall_ms}};
  write_json_file(a.manifest.empty() ? a.out + ".manifest.json" : a.manifest, manifest);
  std::cerr << "structured " << trees.size() << "/" << docs.size() << " documents in "
            << static_cast<long>(wall_ms) << " ms\n";
  return errors.empty() ? kOk : kRuntime;
}

// ---------------------------------------------------------------------------
// dataset

struct DatasetArgs {
  std::string trees;
  bool synthetic = false;
  std::size_t docs = 100;
  std::uint64_t seed = 42;
  int max_depth = 6;
  int max_children = 5;
  int max_lines = 4;
  std::size_t max_segments = 300;
  int wi = 1;
  std::string out;
  std::string segments_out;
  std::string actions_out;
  std::string tracer_actions_out;
  std::string join_separator = " ";
  std::string manifest;
};

int run_dataset(const DatasetArgs& a) {
  if (a.synthetic == !a.trees.empty()) {
    throw ValidationError("give exactly one of --synthetic or --trees");
  }
  const auto started = std::chrono::steady_clock::now();
  const std::string manifest_path = a.manifest.empty() ? a.out + ".manifest.json" : a.manifest;
  if (a.synthetic) {
    docstruct::SyntheticSpec spec{a.docs, a.max_depth, a.max_children,
                                  a.max_lines, a.seed, a.max_segments};
    std::vector<docstruct::TreeDocument> corpus;
    try {
      corpus = docstruct::generate_synthetic_corpus(spec);
    } catch (const docstruct::Error& e) {
      throw ValidationError(e.what());
    }
    {
      auto out = open_out(a.out);
      docstruct::write_trees(out, corpus);
    }
    if (!a.segments_out.empty()) {
      auto out = open_out(a.segments_out);
      docstruct::write_segments(out, docstruct::corpus_segments(corpus));
    }
    if (!a.actions_out.empty()) {
      auto out = open_out(a.actions_out);
      docstruct::write_actions(out, docstruct::corpus_actions(corpus));
    }
    if (!a.tracer_actions_out.empty()) {
      std::vector<docstruct::ActionDocument> docs;
      for (const auto& d : corpus) {
        std::vector<std::string> names;
        for (auto t : docstruct::tracer::tracer_gold_actions(d.tree)) {
          names.emplace_back(docstruct::tracer::to_string(t));
        }
        docs.push_back({d.doc_id, std::move(names)});
      }
      auto out = open_out(a.tracer_actions_out);
      docstruct::write_actions(out, docs);
    }
    write_json_file(manifest_path,
                    {{"command", "dataset"},
                     {"version", kVersion},
                     {"mode", "synthetic"},
                     {"seed", a.seed},
                     {"config",
                      {{"docs", a.docs},
                       {"max_depth", a.max_depth},
                       {"max_children", a.max_children},
                       {"max_lines", a.max_lines},
                       {"max_segments", a.max_segments}}},
                     {"outputs",
                      {{"trees", a.out},
                       {"segments", a.segments_out},
                       {"actions", a.actions_out},
                       {"tracer_actions", a.tracer_actions_out}}},
                     {"documents", corpus.size()},
                     {"wall_ms", elapsed_ms(started)}});
    std::cerr << "wrote " << corpus.size() << " synthetic documents\n";
    return kOk;
  }

  docstruct::StructuringConfig config;
  config.input_window = config.output_window = a.wi;
  config.join_separator = a.join_separator;
  if (a.wi < 1) throw ValidationError("--wi must be >= 1");
  auto in = open_in(a.trees);
  const auto corpus = docstruct::read_trees(in);
  auto out = open_out(a.out);
  std::size_t count = 0;
  const auto w = static_cast<std::size_t>(a.wi);
  for (const auto& d : corpus) {
    const std::size_t n = docstruct::tree_to_actions(d.tree).actions.size();
    for (const auto& ex : docstruct::emit_training_examples(d.tree, config, d.doc_id)) {
      // Every target must re-parse to the count of the window it was cut from.
      const std::size_t declared = std::min(w, n - ex.step * w);
      docstruct::parse_action_block(ex.target, declared);
      out << docstruct::to_json(ex).dump() << '\n';
      ++count;
    }
  }
  out.close();
  write_json_file(manifest_path, {{"command", "dataset"},
                                  {"version", kVersion},
                                  {"mode", "training"},
                                  {"inputs", {{"trees", a.trees}}},
                                  {"output", a.out},
                                  {"config", {{"wi", a.wi}, {"join_separator", a.join_separator}}},
                                  {"documents", corpus.size()},
                                  {"examples", count},
                                  {"wall_ms", elapsed_ms(started)}});
  std::cerr << "wrote " << count << " training examples\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
  std::string pred;
  std::string gold;
  bool toc_only = false;
  std::string match = "strict";
  std::string out;
  std::string join_separator = " ";
  std::string manifest;
};

int run_eval(const EvalArgs& a) {
  const auto started = std::chrono::steady_clock::now();
  if (a.match != "strict" && a.match != "loose") {
    throw ValidationError("--match must be strict or loose");
  }
  docstruct::EvalOptions opt;
  opt.toc_only = a.toc_only;
  opt.match = a.match == "strict" ? docstruct::MatchMode::kStrict
                                  : docstruct::MatchMode::kLoose;
  opt.join_separator = a.join_separator;
  auto pin = open_in(a.pred);
  auto gin = open_in(a.gold);
  const auto pred = docstruct::read_trees(pin);
  const auto gold = docstruct::read_trees(gin);
  docstruct::EvalReport report;
  try {
    report = docstruct::evaluate_corpus(pred, gold, opt);
  } catch (const docstruct::JoinError& e) {
    throw ValidationError(e.what());
  }
  std::cout << docstruct::summary_table(report);
  if (!a.out.empty()) write_json_file(a.out, docstruct::to_json(report));
  const std::string manifest_path =
      !a.manifest.empty() ? a.manifest : a.out.empty() ? "" : a.out + ".manifest.json";
  if (!manifest_path.empty()) {
    write_json_file(manifest_path,
                    {{"command", "eval"},
                     {"version", kVersion},
                     {"inputs", {{"pred", a.pred}, {"gold", a.gold}}},
                     {"output", a.out},
                     {"config",
                      {{"toc_only", a.toc_only},
                       {"match", a.match},
                       {"join_separator", a.join_separator}}},
                     {"documents", report.documents},
                     {"wall_ms", elapsed_ms(started)}});
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// selfcheck

int run_selfcheck(std::size_t trials, std::uint64_t seed, bool baseline,
                  const std::string& fault, const std::string& manifest) {
  const auto started = std::chrono::steady_clock::now();
  if (trials < 1) throw ValidationError("--trials must be >= 1");
  if (fault == "clamp") {
    docstruct::testing_hooks::clamp_disabled() = true;
  } else if (!fault.empty()) {
    throw ValidationError("unknown fault " + fault);
  }
  Json results = Json::array();
  const bool ok = docstruct::selfcheck::run_all(
      {trials, seed, baseline}, [&](const docstruct::selfcheck::PropertyResult& r) {
        std::cout << (r.passed ? "PASS  " : "FAIL  ") << r.name << '\n';
        if (!r.passed) std::cout << "      witness: " << r.witness << '\n';
        results.push_back({{"name", r.name}, {"passed", r.passed}, {"witness", r.witness}});
      });
  if (!manifest.empty()) {
    write_json_file(manifest, {{"command", "selfcheck"},
                               {"version", kVersion},
                               {"seed", seed},
                               {"config", {{"trials", trials}, {"baseline", baseline}}},
                               {"properties", results},
                               {"wall_ms", elapsed_ms(started)}});
  }
  return ok ? kOk : kPropertyFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Document logical structuring by action generation"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  StructureArgs sa;
  auto* structure = app.add_subcommand("structure", "Build trees from segment documents");
  structure->add_option("--input", sa.input, "Segments JSONL")->required();
  structure->add_option("--predictor", sa.predictor)
      ->check(CLI::IsMember({"oracle", "heuristic", "remote"}));
  structure->add_option("--wi", sa.wi, "Input segment window");
  structure->add_option("--wo", sa.wo, "Output action window");
  structure->add_option("--out", sa.out, "Trees JSONL")->required();
  structure->add_option("--gold-actions", sa.gold_actions, "Actions JSONL (oracle)");
  structure->add_option("--endpoint", sa.endpoint, "Generation service base URL");
  structure->add_option("--endpoint-path", sa.endpoint_path);
  structure->add_option("--timeout-ms", sa.timeout_ms);
  structure->add_option("--retries", sa.retries, "Total attempts per request");
  structure->add_option("--tokens-per-action", sa.tokens_per_action);
  structure->add_option("--constraint-mode", sa.constraint_mode)
      ->check(CLI::IsMember({"mask", "repair", "strict"}));
  structure->add_option("--profile", sa.profile, "Built-in profile name or JSON file");
  structure->add_option("--join-separator", sa.join_separator);
  structure->add_option("--stack-truncation", sa.stack_truncation,
                        "Max characters per rendered stack entry (0 = off)");
  structure->add_option("--workers", sa.workers, "Worker threads (0 = all cores)");
  structure->add_option("--manifest", sa.manifest);
  structure->add_flag("--print-tree", sa.print_tree);

  DatasetArgs da;
  auto* dataset = app.add_subcommand("dataset", "Training examples or synthetic corpora");
  dataset->add_option("--trees", da.trees, "Trees JSONL to convert");
  dataset->add_flag("--synthetic", da.synthetic);
  dataset->add_option("--docs", da.docs);
  dataset->add_option("--seed", da.seed);
  dataset->add_option("--max-depth", da.max_depth);
  dataset->add_option("--max-children", da.max_children);
  dataset->add_option("--max-lines", da.max_lines);
  dataset->add_option("--max-segments", da.max_segments);
  dataset->add_option("--wi", da.wi);
  dataset->add_option("--out", da.out)->required();
  dataset->add_option("--segments-out", da.segments_out);
  dataset->add_option("--actions-out", da.actions_out);
  dataset->add_option("--tracer-actions-out", da.tracer_actions_out);
  dataset->add_option("--join-separator", da.join_separator);
  dataset->add_option("--manifest", da.manifest, "Run manifest path (default: <out>.manifest.json)");

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "Score predicted trees against gold");
  eval->add_option("--pred", ea.pred)->required();
  eval->add_option("--gold", ea.gold)->required();
  eval->add_flag("--toc-only", ea.toc_only);
  eval->add_option("--match", ea.match);
  eval->add_option("--out", ea.out);
  eval->add_option("--join-separator", ea.join_separator);
  eval->add_option("--manifest", ea.manifest, "Run manifest path (default: <out>.manifest.json)");

  std::size_t trials = 1000;
  std::uint64_t seed = 42;
  bool baseline = false;
  std::string fault;
  std::string selfcheck_manifest;
  auto* selfcheck = app.add_subcommand("selfcheck", "Run the property suite");
  selfcheck->add_option("--trials", trials);
  selfcheck->add_option("--seed", seed);
  selfcheck->add_flag("--baseline", baseline);
  selfcheck->add_option("--manifest", selfcheck_manifest, "Run manifest path");
  selfcheck->add_option("--inject-fault", fault)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*structure) return run_structure(sa);
    if (*dataset) return run_dataset(da);
    if (*eval) return run_eval(ea);
    if (*selfcheck) return run_selfcheck(trials, seed, baseline, fault, selfcheck_manifest);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const docstruct::FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kOk;
}
