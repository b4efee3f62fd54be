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

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "docstruct/constraints.hpp"
#include "docstruct/datagen.hpp"
#include "docstruct/eval.hpp"
#include "docstruct/predictors.hpp"
#include "docstruct/prompt.hpp"
#include "docstruct/structure.hpp"
#include "docstruct/testing/brute_force_ted.hpp"
#include "docstruct/testing/random_trees.hpp"
#include "docstruct/tracer.hpp"

// Property suite behind the `selfcheck` command.

namespace docstruct::selfcheck {

struct PropertyResult {
  std::string name;
  bool passed = true;
  std::string witness;  // first counterexample, empty on success
};

struct Options {
  std::size_t trials = 1000;
  std::uint64_t seed = 42;
  bool baseline = false;
};

inline std::string describe(const std::vector<Action>& actions) {
  std::string out = "[";
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (i) out += ' ';
    out += to_string(actions[i]);
  }
  return out + "]";
}

inline std::vector<TextSegment> segments_of(const std::string& doc_id,
                                            const std::vector<std::string>& texts) {
  return Document{doc_id, texts}.text_segments();
}

inline SyntheticSpec corpus_spec(const Options& o) {
  SyntheticSpec spec;
  spec.doc_count = o.trials;
  spec.seed = o.seed;
  spec.max_depth = 6;
  spec.max_children = 5;
  spec.max_paragraph_lines = 4;
  spec.max_segments = 300;
  return spec;
}

/// structure_document(OraclePredictor(tree_to_actions(T))) == T for every
/// window pair with 1 <= w_O <= w_I <= 5.
inline PropertyResult oracle_round_trip(const std::vector<TreeDocument>& corpus) {
  PropertyResult r{"oracle round trip", true, {}};
  const ConstraintPolicy policy;
  for (const auto& doc : corpus) {
    const GoldSequence gold = tree_to_actions(doc.tree);
    const auto segments = segments_of(doc.doc_id, gold.segments);
    for (int wi = 1; wi <= 5; ++wi) {
      for (int wo = 1; wo <= wi; ++wo) {
        StructuringConfig cfg;
        cfg.input_window = wi;
        cfg.output_window = wo;
        OraclePredictor oracle(gold.actions, wo);
        const auto result = structure_document(segments, oracle, cfg, policy);
        if (!(result.tree == doc.tree) ||
            !result.report.skipped_segment_indices.empty()) {
          r.passed = false;
          r.witness = doc.doc_id + " w_I=" + std::to_string(wi) +
                      " w_O=" + std::to_string(wo);
          return r;
        }
      }
    }
  }
  return r;
}

/// Prediction steps == ceil(N / w_O) for N in 1..50.
inline PropertyResult step_count_law() {
  PropertyResult r{"step-count law", true, {}};
  const ConstraintPolicy policy;
  for (std::size_t n = 1; n <= 50; ++n) {
    std::vector<std::string> texts(n, "line");
    std::vector<Action> gold{Action::paragraph()};
    gold.resize(n, Action::concatenation());
    const auto segments = segments_of("steps", texts);
    for (int wi = 1; wi <= 5; ++wi) {
      for (int wo = 1; wo <= wi; ++wo) {
        StructuringConfig cfg = window_config(wi, wo);
        OraclePredictor oracle(gold, wo);
        const auto result = structure_document(segments, oracle, cfg, policy);
        const std::size_t expected = (n + static_cast<std::size_t>(wo) - 1) /
                                     static_cast<std::size_t>(wo);
        if (result.report.steps != expected) {
          r.passed = false;
          r.witness = "N=" + std::to_string(n) + " w_O=" + std::to_string(wo) +
                      " steps=" + std::to_string(result.report.steps);
          return r;
        }
      }
    }
  }
  return r;
}

/// Last-token table for one profile, written out cell by cell.
inline std::map<std::string, std::set<std::string>> published_token_table(
    const TokenizerProfile& profile) {
  std::map<std::string, std::set<std::string>> rows;
  std::set<std::string> after_break(profile.plus_tokens.begin(),
                                    profile.plus_tokens.end());
  after_break.insert({"*", "=", "</s>"});
  rows["\n"] = after_break;
  for (const auto& plus : profile.plus_tokens) {
    std::set<std::string> row(profile.plus_tokens.begin(), profile.plus_tokens.end());
    row.insert("\n");
    rows[plus] = row;
  }
  rows["*"] = {"\n"};
  rows["="] = {"\n"};
  return rows;
}

inline PropertyResult token_table_conformance() {
  PropertyResult r{"token table conformance", true, {}};
  for (const auto& profile : {gpt2_profile(), baichuan_profile()}) {
    const auto table = published_token_table(profile);
    for (const auto& [last, expected] : table) {
      DecoderState s;
      s.last_token = last;
      s.actions_emitted = 1;
      s.requested_actions = 1;
      s.stack_is_root_only = false;
      if (allowed_next_tokens(s, profile) != expected) {
        r.passed = false;
        r.witness = profile.name + " row '" + (last == "\n" ? "\\n" : last) + "'";
        return r;
      }
    }
    DecoderState start;
    start.requested_actions = 1;
    std::set<std::string> first{"+", "*"};
    for (const auto& p : profile.plus_tokens) first.insert(p);
    if (allowed_next_tokens(start, profile) != first) {
      r.passed = false;
      r.witness = profile.name + " start-of-output, root-only stack";
      return r;
    }
  }
  return r;
}

/// Random action sequences survive repair + execution, and every committed
/// heading is at most one below the previous stack maximum.
inline PropertyResult clamp_safety(std::size_t sequences, std::uint64_t seed) {
  PropertyResult r{"post-clamp safety", true, {}};
  std::mt19937_64 rng(seed);
  const ConstraintPolicy policy;
  std::uniform_int_distribution<std::size_t> len(1, 40);
  for (std::size_t t = 0; t < sequences; ++t) {
    const auto raw = testing::random_actions(rng, len(rng), 8);
    EngineState state;
    try {
      const auto fixed = validate_and_repair(raw, state.stack, policy);
      for (std::size_t i = 0; i < fixed.size(); ++i) {
        const int before = state.stack.max_heading_level();
        if (fixed[i].is_heading() && fixed[i].level > before + 1) {
          throw InvalidTransition("heading skips a level");
        }
        apply_action_in_place(state, fixed[i], {"clamp", i, "x"});
      }
    } catch (const InvalidTransition& e) {
      r.passed = false;
      r.witness = describe(raw) + " (" + e.what() + ")";
      return r;
    }
  }
  return r;
}

/// The worked prompt example: three headings and an open paragraph on the
/// stack, three segments in the window.
struct WorkedExample {
  LogicalTree tree;
  EngineState state;
  std::vector<TextSegment> window;
  std::vector<Action> gold;
};

inline WorkedExample worked_example() {
  WorkedExample ex;
  const std::vector<std::pair<Action, std::string>> history{
      {Action::heading(1), "Government Bonds Credit Rating Report"},
      {Action::heading(2), "Credit Quality Analysis for this Series"},
      {Action::heading(3), "Use of Proceeds"},
      {Action::paragraph(),
       "The funds raised from the Government Bonds are ... and projects "
       "related to agriculture,"}};
  for (std::size_t i = 0; i < history.size(); ++i) {
    apply_action_in_place(ex.state, history[i].first,
                          {"worked", i, history[i].second});
  }
  const std::vector<std::string> window{
      "forestry, water resources and social services.",
      "Payment Security Analysis",
      "The proceeds for the projects funded by this bond issue are derived "
      "from project operational revenues"};
  for (std::size_t i = 0; i < window.size(); ++i) {
    ex.window.push_back({"worked", history.size() + i, window[i]});
  }
  ex.gold = {Action::concatenation(), Action::heading(3), Action::paragraph()};
  ex.tree = ex.state.tree;
  return ex;
}

inline const char* worked_example_prompt() {
  return "### STACK:\n"
         "+ Government Bonds Credit Rating Report\n"
         "++ Credit Quality Analysis for this Series\n"
         "+++ Use of Proceeds\n"
         "* The funds raised from the Government Bonds are ... and projects "
         "related to agriculture,\n"
         "\n"
         "### SEGMENT:\n"
         "forestry, water resources and social services.\n"
         "Payment Security Analysis\n"
         "The proceeds for the projects funded by this bond issue are derived "
         "from project operational revenues\n"
         "\n"
         "### ACTION:\n";
}

inline PropertyResult prompt_fidelity() {
  PropertyResult r{"prompt template fidelity", true, {}};
  const auto ex = worked_example();
  const std::string prompt =
      render_prompt(ex.state.stack, ex.state.tree, ex.window, window_config(3, 3));
  if (prompt != worked_example_prompt()) {
    r.passed = false;
    r.witness = prompt;
    return r;
  }
  if (parse_action_block("=\n+++\n*\n", 3) != ex.gold) {
    r.passed = false;
    r.witness = "action block did not parse to [= +++ *]";
  }
  return r;
}

inline PropertyResult ted_oracle(std::size_t pairs, std::uint64_t seed) {
  PropertyResult r{"TEDS vs brute-force edit distance", true, {}};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> size(1, 6);
  for (std::size_t t = 0; t < pairs; ++t) {
    const auto a = testing::random_small_tree(rng, size(rng));
    const auto b = testing::random_small_tree(rng, size(rng));
    for (bool toc : {false, true}) {
      const long expected = testing::brute_force_ted(a, b, toc);
      const auto na = static_cast<double>(label_tree(a, toc).size());
      const auto nb = static_cast<double>(label_tree(b, toc).size());
      const double want = 1.0 - static_cast<double>(expected) / std::max(na, nb);
      if (std::abs(teds(a, b, toc) - want) > 1e-12) {
        r.passed = false;
        r.witness = tree_to_json(a).dump() + " vs " + tree_to_json(b).dump();
        return r;
      }
    }
  }
  return r;
}

/// Single-edit perturbation of a tree, rebuilt through its action sequence.
template <typename Rng>
LogicalTree perturb(const LogicalTree& tree, Rng& rng) {
  GoldSequence g = tree_to_actions(tree);
  std::uniform_int_distribution<std::size_t> pick(0, g.actions.size() - 1);
  const std::size_t i = pick(rng);
  switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
    case 0:
      g.segments[i] += " (edited)";
      break;
    case 1:
      g.actions[i] = g.actions[i].is_paragraph() ? Action::heading(1)
                                                  : Action::paragraph();
      break;
    default:
      g.actions[i] = i == 0 ? Action::heading(1) : Action::concatenation();
  }
  g.actions = validate_and_repair(g.actions, ContextStack{}, ConstraintPolicy{});
  EngineState s;
  for (std::size_t k = 0; k < g.actions.size(); ++k) {
    apply_action_in_place(s, g.actions[k], {"p", k, g.segments[k]});
  }
  return s.tree;
}

inline bool all_perfect(const EvalReport& rep) {
  return rep.heading.f1() == 1.0 && rep.paragraph.f1() == 1.0 &&
         rep.total.f1() == 1.0 && rep.heading_detection.f1() == 1.0 &&
         rep.teds_mean == 1.0 && rep.doc_acc == 1.0;
}

/// pred == gold gives perfect scores; DocAcc == 1 implies every other metric
/// is 1 on perturbed corpora.
inline PropertyResult metric_consistency(const std::vector<TreeDocument>& corpus,
                                         std::size_t perturbed_corpora,
                                         std::uint64_t seed) {
  PropertyResult r{"metric consistency", true, {}};
  if (!all_perfect(evaluate_corpus(corpus, corpus))) {
    r.passed = false;
    r.witness = "identity corpus";
    return r;
  }
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution touch(0.1);
  const std::size_t docs_per = std::min<std::size_t>(corpus.size(), 20);
  for (std::size_t c = 0; c < perturbed_corpora; ++c) {
    const std::size_t offset = (c * 7) % (corpus.size() - docs_per + 1);
    const auto first = corpus.begin() + static_cast<long>(offset);
    std::vector<TreeDocument> gold(first, first + static_cast<long>(docs_per));
    std::vector<TreeDocument> pred = gold;
    // Some corpora stay untouched so the implication is exercised both ways.
    if (c % 4 != 0) {
      for (auto& d : pred) {
        if (touch(rng)) d.tree = perturb(d.tree, rng);
      }
    }
    const auto rep = evaluate_corpus(pred, gold);
    if (rep.doc_acc == 1.0 && !all_perfect(rep)) {
      r.passed = false;
      r.witness = "perturbed corpus " + std::to_string(c);
      return r;
    }
    for (const auto& s : rep.per_document) {
      if (s.exact && (s.total.f1() != 1.0 || s.teds != 1.0)) {
        r.passed = false;
        r.witness = s.doc_id;
        return r;
      }
    }
  }
  return r;
}

/// The action system commits N actions; the shift-reduce baseline needs
/// N + #Reduce.
inline PropertyResult prediction_economy(const std::vector<TreeDocument>& corpus) {
  PropertyResult r{"prediction economy vs shift-reduce", true, {}};
  const ConstraintPolicy policy;
  for (const auto& doc : corpus) {
    const GoldSequence gold = tree_to_actions(doc.tree);
    const auto segments = segments_of(doc.doc_id, gold.segments);
    OraclePredictor oracle(gold.actions, 1);
    const auto ours = structure_document(segments, oracle, window_config(1, 1), policy);
    tracer::TracerOraclePredictor tracer_oracle(tracer::tracer_gold_actions(doc.tree));
    const auto base = tracer::tracer_structure_document(segments, tracer_oracle, {});
    const std::size_t n = segments.size();

    bool sibling_headings = false;
    for (NodeId id : doc.tree.preorder()) {
      int headings = 0;
      for (NodeId c : doc.tree[id].children) headings += doc.tree[c].is_heading();
      sibling_headings |= headings >= 2;
    }
    const bool strict = doc.tree.max_depth() >= 2 && sibling_headings;
    const bool ok = ours.report.committed_actions == n &&
                    base.report.transitions == n + base.report.reduces &&
                    base.tree == doc.tree && ours.tree == doc.tree &&
                    (!strict || base.report.transitions > n);
    if (!ok) {
      r.passed = false;
      r.witness = doc.doc_id + " N=" + std::to_string(n) + " tracer=" +
                  std::to_string(base.report.transitions);
      return r;
    }
  }
  return r;
}

/// Returns a fixed wrong-count answer at one step and the gold otherwise.
class MiscountingPredictor final : public ActionPredictor {
 public:
  MiscountingPredictor(std::vector<Action> gold, int wo, std::size_t bad_step)
      : oracle_(std::move(gold), wo), bad_step_(bad_step) {}

  PredictionResponse predict(const PredictionRequest& req) override {
    if (req.step == bad_step_) {
      std::string text;
      for (std::size_t i = 0; i + 1 < req.expected_actions; ++i) text += "*\n";
      if (req.expected_actions == 1) text = "*\n*\n";
      return {text, 0.0};
    }
    return oracle_.predict(req);
  }

 private:
  OraclePredictor oracle_;
  std::size_t bad_step_;
};

inline PropertyResult mismatch_skips(const std::vector<TreeDocument>& corpus) {
  PropertyResult r{"mismatch skipping", true, {}};
  const ConstraintPolicy policy;
  for (const auto& doc : corpus) {
    const GoldSequence gold = tree_to_actions(doc.tree);
    const auto segments = segments_of(doc.doc_id, gold.segments);
    for (int wi = 1; wi <= 3; ++wi) {
      for (int wo = 1; wo <= wi; ++wo) {
        const std::size_t steps = step_count(segments.size(), wo);
        const std::size_t bad = steps / 2;
        MiscountingPredictor pred(gold.actions, wo, bad);
        const auto res = structure_document(segments, pred, window_config(wi, wo), policy);
        std::vector<std::size_t> expected;
        const std::size_t begin = bad * static_cast<std::size_t>(wo);
        for (std::size_t k = begin;
             k < std::min(segments.size(), begin + static_cast<std::size_t>(wo)); ++k) {
          expected.push_back(k);
        }
        if (res.report.steps != steps ||
            res.report.skipped_segment_indices != expected ||
            res.report.committed_actions + expected.size() != segments.size()) {
          r.passed = false;
          r.witness = doc.doc_id + " w_I=" + std::to_string(wi) +
                      " w_O=" + std::to_string(wo);
          return r;
        }
      }
    }
  }
  return r;
}

/// Runs every property; `on_result` sees each result as it completes.
inline bool run_all(const Options& o,
                    const std::function<void(const PropertyResult&)>& on_result) {
  const auto corpus = generate_synthetic_corpus(corpus_spec(o));
  const std::size_t small = std::min<std::size_t>(corpus.size(), 100);
  const std::vector<TreeDocument> head(corpus.begin(), corpus.begin() + static_cast<long>(small));

  std::vector<std::pair<const char*, std::function<PropertyResult()>>> checks{
      {"oracle round trip", [&] { return oracle_round_trip(corpus); }},
      {"step-count law", [] { return step_count_law(); }},
      {"token table conformance", [] { return token_table_conformance(); }},
      {"post-clamp safety", [&] { return clamp_safety(o.trials * 10, o.seed); }},
      {"prompt template fidelity", [] { return prompt_fidelity(); }},
      {"TEDS vs brute-force edit distance",
       [&] { return ted_oracle(std::max<std::size_t>(o.trials / 2, 1), o.seed); }},
      {"metric consistency", [&] { return metric_consistency(corpus, 100, o.seed); }},
      {"mismatch skipping", [&] { return mismatch_skips(head); }},
  };
  if (o.baseline) {
    checks.push_back({"prediction economy vs shift-reduce",
                      [&] { return prediction_economy(corpus); }});
  }

  bool ok = true;
  for (const auto& [name, check] : checks) {
    PropertyResult result;
    try {
      result = check();
    } catch (const std::exception& e) {
      result = {name, false, std::string("unexpected error: ") + e.what()};
    }
    ok &= result.passed;
    on_result(result);
  }
  return ok;
}

}  // namespace docstruct::selfcheck
