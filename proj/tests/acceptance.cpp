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

// Acceptance gate. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "docstruct/docstruct.hpp"
#include "docstruct/remote_predictor.hpp"
#include "docstruct/selfcheck.hpp"

namespace {

using namespace docstruct;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool passed = false;
  std::string detail;
};

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

Outcome from(const selfcheck::PropertyResult& r, const std::string& detail) {
  return {r.passed, r.passed ? detail : "counterexample: " + r.witness};
}

std::vector<TreeDocument> corpus(std::size_t docs, std::uint64_t seed) {
  SyntheticSpec spec;
  spec.doc_count = docs;
  spec.seed = seed;
  spec.max_depth = 6;
  spec.max_segments = 300;
  return generate_synthetic_corpus(spec);
}

Outcome oracle_round_trip() {
  const auto trees = corpus(1000, 42);
  const auto t = Clock::now();
  const auto r = selfcheck::oracle_round_trip(trees);
  const double s = seconds_since(t);
  if (r.passed && s >= 60.0) return {false, "took " + std::to_string(s) + " s (limit 60 s)"};
  return from(r, "1000 trees x 15 window pairs exact, " + std::to_string(s) + " s");
}

Outcome steps_law() {
  return from(selfcheck::step_count_law(), "N in 1..50, all window pairs up to 5");
}

Outcome token_tables() {
  return from(selfcheck::token_table_conformance(), "gpt2-medium and baichuan-7b rows");
}

Outcome clamp_safety() {
  return from(selfcheck::clamp_safety(10000, 42), "10000 random sequences");
}

Outcome prompt_fidelity() {
  return from(selfcheck::prompt_fidelity(), "rendered bytes and action block");
}

Outcome ted_oracle() {
  const auto t = Clock::now();
  const auto r = selfcheck::ted_oracle(600, 42);
  const double s = seconds_since(t);
  if (r.passed && s >= 30.0) return {false, "took " + std::to_string(s) + " s (limit 30 s)"};
  return from(r, "600 pairs, both modes, tolerance 1e-12, " + std::to_string(s) + " s");
}

Outcome metric_consistency() {
  return from(selfcheck::metric_consistency(corpus(200, 7), 100, 42),
              "identity corpus plus 100 perturbation corpora");
}

Outcome prediction_economy() {
  return from(selfcheck::prediction_economy(corpus(1000, 42)), "1000 documents");
}

// Generation service stub: answers one action short whenever the window
// starts at the marker segment, and a correct flat answer otherwise.
Outcome remote_mismatch() {
  httplib::Server server;
  server.Post("/generate", [](const httplib::Request& req, httplib::Response& res) {
    const auto body = nlohmann::json::parse(req.body);
    const auto prompt = parse_prompt(body.at("prompt").get<std::string>());
    std::size_t lines = prompt.segments.size();
    if (!prompt.segments.empty() && prompt.segments.front() == "p6.") --lines;
    std::string text;
    for (std::size_t i = 0; i < lines; ++i) text += "*\n";
    res.set_content(nlohmann::json{{"text", text}}.dump(), "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread worker([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  Outcome out{true, "stub server, w_O in 1..3"};
  RemoteConfig cfg;
  cfg.base_url = "http://127.0.0.1:" + std::to_string(port);
  RemotePredictor predictor(cfg);
  std::vector<std::string> texts;
  for (int i = 0; i < 12; ++i) texts.push_back("p" + std::to_string(i) + ".");
  const auto segments = Document{"stub", texts}.text_segments();

  for (int wo = 1; wo <= 3 && out.passed; ++wo) {
    for (int wi = 4; wi <= 5; ++wi) {
      const auto r = structure_document(segments, predictor, window_config(wi, wo), {});
      std::vector<std::size_t> expected;
      for (int k = 6; k < 6 + wo; ++k) expected.push_back(static_cast<std::size_t>(k));
      const bool ok = r.report.skipped_segment_indices == expected &&
                      r.report.steps == step_count(segments.size(), wo) &&
                      r.tree[r.tree.root()].children.size() == segments.size() - expected.size();
      if (!ok) {
        out = {false, "w_I=" + std::to_string(wi) + " w_O=" + std::to_string(wo) +
                          " skipped " + std::to_string(r.report.skipped_segment_indices.size())};
        break;
      }
    }
  }
  server.stop();
  worker.join();
  return out;
}

Outcome heuristic_smoke() {
  const auto t = Clock::now();
  const auto gold = corpus(1000, 42);
  std::vector<TreeDocument> pred;
  for (const auto& doc : gold) {
    const auto segments = Document{doc.doc_id, tree_to_actions(doc.tree).segments}.text_segments();
    HeuristicPredictor h;
    pred.push_back({doc.doc_id, structure_document(segments, h, window_config(3, 1), {}).tree});
  }
  const auto report = evaluate_corpus(pred, gold, {});
  const double s = seconds_since(t);
  const double f1 = report.total.f1();
  char buf[128];
  std::snprintf(buf, sizeof buf, "total F1 %.4f (> 0.5), %.1f s (< 300 s)", f1, s);
  return {f1 > 0.5 && s < 300.0, buf};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"oracle round trip", oracle_round_trip},
      {"step-count law", steps_law},
      {"token table conformance", token_tables},
      {"level-clamp safety", clamp_safety},
      {"prompt fidelity", prompt_fidelity},
      {"TEDS brute-force equivalence", ted_oracle},
      {"metric consistency", metric_consistency},
      {"prediction economy", prediction_economy},
      {"mismatch handling", remote_mismatch},
      {"heuristic end-to-end smoke", heuristic_smoke},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.passed;
    std::printf("[%s] %2zu %s: %s\n", o.passed ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failures),
              criteria.size());
  return failures == 0 ? 0 : 1;
}
