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

#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "docstruct/action.hpp"
#include "docstruct/config.hpp"
#include "docstruct/errors.hpp"
#include "docstruct/jsonl.hpp"
#include "docstruct/prompt.hpp"
#include "docstruct/transitions.hpp"
#include "docstruct/tree.hpp"

namespace docstruct {

/// Segments of a document paired one-to-one with its gold actions.
struct GoldSequence {
  std::vector<std::string> segments;
  std::vector<Action> actions;
};

/// Preorder walk: each node contributes its content entries as consecutive
/// segments; the first gets `+`*depth or `*`, the rest get `=`.
inline GoldSequence tree_to_actions(const LogicalTree& tree) {
  tree.validate();
  GoldSequence out;
  for (NodeId id : tree.preorder()) {
    if (id == tree.root()) continue;
    const Node& n = tree[id];
    for (std::size_t i = 0; i < n.content.size(); ++i) {
      out.segments.push_back(n.content[i]);
      if (i > 0) {
        out.actions.push_back(Action::concatenation());
      } else if (n.is_heading()) {
        out.actions.push_back(Action::heading(tree.depth(id)));
      } else {
        out.actions.push_back(Action::paragraph());
      }
    }
  }
  return out;
}

struct TrainingExample {
  std::string doc_id;
  std::size_t step = 0;
  std::string prompt;
  std::string target;  // gold action lines; EOS is left to the tokenizer
};

inline nlohmann::json to_json(const TrainingExample& e) {
  return {{"doc_id", e.doc_id},
          {"step", e.step},
          {"prompt", e.prompt},
          {"target", e.target}};
}

/// Replays the gold actions and captures one (prompt, target) pair per step.
/// Training windows are aligned: w_I must equal w_O.
inline std::vector<TrainingExample> emit_training_examples(
    const LogicalTree& tree, const StructuringConfig& config,
    const std::string& doc_id = {}) {
  config.validate();
  if (config.input_window != config.output_window) {
    throw Error("training examples require input window == output window");
  }
  const GoldSequence gold = tree_to_actions(tree);
  const auto w = static_cast<std::size_t>(config.input_window);
  std::vector<TextSegment> segments;
  for (std::size_t i = 0; i < gold.segments.size(); ++i) {
    segments.push_back({doc_id, i, gold.segments[i]});
  }

  std::vector<TrainingExample> examples;
  EngineState state;
  for (std::size_t begin = 0, step = 0; begin < segments.size();
       begin += w, ++step) {
    const std::size_t count = std::min(w, segments.size() - begin);
    const std::span<const TextSegment> window(segments.data() + begin, count);
    const std::span<const Action> target(gold.actions.data() + begin, count);
    examples.push_back({doc_id, step,
                        render_prompt(state.stack, state.tree, window, config),
                        format_action_block(target)});
    for (std::size_t j = 0; j < count; ++j) {
      apply_action_in_place(state, gold.actions[begin + j], segments[begin + j]);
    }
  }
  return examples;
}

struct SyntheticSpec {
  std::size_t doc_count = 100;
  int max_depth = 6;  // node depth, counting paragraph leaves
  int max_children = 5;
  int max_paragraph_lines = 4;
  std::uint64_t seed = 42;
  std::size_t max_segments = 300;
};

namespace detail {

inline const std::vector<std::string>& word_pool() {
  static const std::vector<std::string> words{
      "analysis",  "bond",       "capital",   "credit",     "debt",
      "issuer",    "market",     "payment",   "proceeds",   "project",
      "quality",   "rating",     "report",    "revenue",    "risk",
      "security",  "series",     "agriculture", "forestry", "water",
      "resources", "services",   "employee",  "stock",      "ownership",
      "plan",      "holders",    "scope",     "basis",      "company",
      "shares",    "governance", "board",     "meeting",    "annual",
      "financial", "statement",  "liability", "asset",      "cash",
      "flow",      "operating",  "investment", "interest",  "rate",
      "term",      "maturity",   "guarantee", "collateral", "structure",
      "industry",  "region",     "policy",    "support",    "government",
      "local",     "economic",   "growth",    "outlook",    "summary"};
  return words;
}

class CorpusBuilder {
 public:
  CorpusBuilder(const SyntheticSpec& spec, std::uint64_t doc_seed)
      : spec_(spec), rng_(doc_seed) {
    budget_ = uniform(std::min<std::size_t>(5, spec.max_segments),
                      spec.max_segments);
  }

  LogicalTree build() {
    LogicalTree tree;
    fill(tree, tree.root(), "", /*first=*/true);
    if (tree.size() == 1) tree.add_paragraph(tree.root(), sentence(6, true));
    return tree;
  }

 private:
  std::size_t uniform(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }

  std::string words(std::size_t count, bool capitalize) {
    std::string out;
    const auto& pool = word_pool();
    for (std::size_t i = 0; i < count; ++i) {
      std::string w = pool[uniform(0, pool.size() - 1)];
      if (capitalize && (i == 0 || chance(0.5))) {
        w[0] = static_cast<char>(w[0] - 'a' + 'A');
      }
      if (i) out += ' ';
      out += w;
    }
    return out;
  }

  std::string sentence(std::size_t count, bool final_line) {
    std::string s = words(count, false);
    s[0] = static_cast<char>(s[0] - 'a' + 'A');
    if (final_line) {
      // Most paragraphs end a sentence; some OCR lines lose the period.
      if (chance(0.93)) s += '.';
    } else if (chance(0.3)) {
      s += ',';
    }
    return s;
  }

  void fill(LogicalTree& tree, NodeId parent, const std::string& number,
            bool first) {
    const int level = tree[parent].level;
    std::size_t kids = uniform(1, static_cast<std::size_t>(spec_.max_children));
    if (!first && chance(0.08)) kids = 0;  // childless heading
    int heading_index = 0;
    const bool can_nest = level + 1 <= spec_.max_depth - 1;
    for (std::size_t k = 0; k < kids && budget_ > 0; ++k) {
      const double p_heading = level == 0 ? 0.65 : 0.45;
      // A paragraph after a sibling heading would belong to that heading's
      // subtree once replayed, so headings close out a child list.
      if (heading_index > 0 || (can_nest && chance(p_heading))) {
        ++heading_index;
        const std::string num = number.empty()
                                    ? std::to_string(heading_index)
                                    : number + "." + std::to_string(heading_index);
        const std::string label = level == 0 ? "Chapter " + num : num;
        const NodeId h = tree.add_heading(parent, label + " " + words(uniform(2, 5), true));
        --budget_;
        if (budget_ > 0 && chance(0.05)) {
          tree.append_content(h, words(uniform(2, 4), false));  // wrapped title
          --budget_;
        }
        fill(tree, h, num, false);
      } else {
        const std::size_t lines =
            std::min(budget_, uniform(1, static_cast<std::size_t>(spec_.max_paragraph_lines)));
        NodeId p{};
        for (std::size_t i = 0; i < lines; ++i) {
          std::string line = sentence(uniform(4, 10), i + 1 == lines);
          if (i == 0) {
            p = tree.add_paragraph(parent, std::move(line));
          } else {
            tree.append_content(p, std::move(line));
          }
        }
        budget_ -= lines;
      }
    }
  }

  const SyntheticSpec& spec_;
  std::mt19937_64 rng_;
  std::size_t budget_ = 0;
};

}  // namespace detail

/// Deterministic pseudo-random corpus of valid trees with numbered headings
/// ("Chapter 3 ...", "3.1 ...", "3.1.2 ...") and paragraphs wrapped over
/// several lines. Each document draws from its own seed, so documents can be
/// generated independently.
inline std::vector<TreeDocument> generate_synthetic_corpus(const SyntheticSpec& spec) {
  if (spec.max_depth < 1 || spec.max_children < 1 ||
      spec.max_paragraph_lines < 1 || spec.max_segments < 1) {
    throw Error("synthetic corpus limits must be >= 1");
  }
  std::vector<TreeDocument> docs;
  docs.reserve(spec.doc_count);
  for (std::size_t i = 0; i < spec.doc_count; ++i) {
    std::seed_seq seq{static_cast<std::uint32_t>(spec.seed),
                      static_cast<std::uint32_t>(spec.seed >> 32),
                      static_cast<std::uint32_t>(i)};
    std::uint64_t doc_seed = 0;
    std::uint32_t parts[2];
    seq.generate(parts, parts + 2);
    doc_seed = (static_cast<std::uint64_t>(parts[0]) << 32) | parts[1];
    char id[32];
    std::snprintf(id, sizeof id, "synth-%06zu", i);
    docs.push_back({id, detail::CorpusBuilder(spec, doc_seed).build()});
  }
  return docs;
}

/// Flat segment documents for a tree corpus.
inline std::vector<Document> corpus_segments(const std::vector<TreeDocument>& trees) {
  std::vector<Document> out;
  out.reserve(trees.size());
  for (const auto& t : trees) out.push_back({t.doc_id, tree_to_actions(t.tree).segments});
  return out;
}

inline std::vector<ActionDocument> corpus_actions(const std::vector<TreeDocument>& trees) {
  std::vector<ActionDocument> out;
  out.reserve(trees.size());
  for (const auto& t : trees) {
    out.push_back({t.doc_id, action_strings(tree_to_actions(t.tree).actions)});
  }
  return out;
}

}  // namespace docstruct
