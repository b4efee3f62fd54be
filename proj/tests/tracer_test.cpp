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

#include "docstruct/tracer.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "docstruct/datagen.hpp"

namespace docstruct::tracer {
namespace {

using A = TracerAction;

TracerState with_pending(TracerState s, std::string text) {
  s.pending = TextSegment{"d", 0, std::move(text)};
  return s;
}

std::set<A> allowed_set(const TracerState& s) {
  const auto v = tracer_allowed_actions(s);
  return {v.begin(), v.end()};
}

TEST(TracerActionTest, Names) {
  for (A a : kAllActions) EXPECT_EQ(parse_tracer_action(to_string(a)), a);
  EXPECT_EQ(to_string(A::kSubText), std::string("sub-text"));
  EXPECT_EQ(parse_tracer_action("sub-paragraph"), A::kSubText);
  EXPECT_THROW(parse_tracer_action("shift"), MalformedAction);
}

TEST(TracerStepTest, AttachAtRoot) {
  const auto s = tracer_step(with_pending({}, "Title"), A::kSubHeading);
  ASSERT_EQ(s.stack.size(), 2u);
  EXPECT_EQ(s.tree[s.stack.back()].level, 1);
  EXPECT_FALSE(s.pending);
}

TEST(TracerStepTest, ReducePastParagraph) {
  TracerState s = tracer_step(with_pending({}, "Intro"), A::kSubHeading);
  s = tracer_step(with_pending(s, "body"), A::kSubText);
  s = with_pending(s, "Chapter 3 Basis and Scope");
  s = tracer_step(s, A::kReduce);
  EXPECT_TRUE(s.pending);
  s = tracer_step(s, A::kReduce);
  EXPECT_EQ(s.stack.size(), 1u);
  s = tracer_step(s, A::kSubHeading);
  const NodeId h = s.stack.back();
  EXPECT_EQ(s.tree[h].level, 1);
  EXPECT_EQ(*s.tree[h].parent, s.tree.root());
  EXPECT_EQ(s.tree[s.tree.root()].children.size(), 2u);
}

TEST(TracerStepTest, ConcatExtendsTop) {
  TracerState s = tracer_step(with_pending({}, "Intro"), A::kSubHeading);
  s = tracer_step(with_pending(s, "body"), A::kSubText);
  s = tracer_step(with_pending(s, "continuation text"), A::kConcat);
  EXPECT_EQ(s.tree[s.stack.back()].content,
            (std::vector<std::string>{"body", "continuation text"}));
}

TEST(TracerStepTest, IllegalActionsThrow) {
  EXPECT_THROW(tracer_step(with_pending({}, "x"), A::kReduce), InvalidTransition);
  EXPECT_THROW(tracer_step(with_pending({}, "x"), A::kConcat), InvalidTransition);
  EXPECT_THROW(tracer_step({}, A::kSubText), InvalidTransition);
  TracerState s = tracer_step(with_pending({}, "p"), A::kSubText);
  EXPECT_THROW(tracer_step(with_pending(s, "q"), A::kSubHeading), InvalidTransition);
}

TEST(TracerAllowedTest, Sets) {
  EXPECT_EQ(allowed_set(with_pending({}, "x")), (std::set<A>{A::kSubHeading, A::kSubText}));
  TracerState h = tracer_step(with_pending({}, "h"), A::kSubHeading);
  EXPECT_EQ(allowed_set(h).size(), 4u);
  TracerState p = tracer_step(with_pending(h, "p"), A::kSubText);
  EXPECT_EQ(allowed_set(p), (std::set<A>{A::kReduce, A::kConcat}));
}

TEST(TracerRunTest, GoldReplayRebuildsCorpus) {
  SyntheticSpec spec;
  spec.doc_count = 200;
  spec.seed = 21;
  for (const auto& doc : generate_synthetic_corpus(spec)) {
    const auto segs = Document{doc.doc_id, tree_to_actions(doc.tree).segments}.text_segments();
    const auto gold = tracer_gold_actions(doc.tree);
    TracerOraclePredictor oracle(gold);
    for (bool global : {false, true}) {
      TracerConfig cfg;
      cfg.global_context = global;
      const auto r = tracer_structure_document(segs, oracle, cfg);
      EXPECT_TRUE(r.tree == doc.tree) << doc.doc_id;
      EXPECT_EQ(r.report.transitions, gold.size());
      const auto reduces = static_cast<std::size_t>(std::count(gold.begin(), gold.end(), A::kReduce));
      EXPECT_EQ(r.report.reduces, reduces);
      // Segment conservation and the economy comparison.
      EXPECT_EQ(r.report.transitions - r.report.reduces, segs.size());
      EXPECT_GE(r.report.transitions, segs.size());
    }
  }
}

TEST(TracerRunTest, FlatParagraphs) {
  LogicalTree t;
  for (int i = 0; i < 5; ++i) t.add_paragraph(t.root(), "p" + std::to_string(i) + ".");
  const auto segs = Document{"f", tree_to_actions(t).segments}.text_segments();
  TracerOraclePredictor oracle(tracer_gold_actions(t));
  const auto r = tracer_structure_document(segs, oracle, {});
  // Every paragraph after the first needs one Reduce before attaching.
  EXPECT_EQ(r.report.transitions - r.report.reduces, 5u);
  EXPECT_TRUE(r.tree == t);
}

TEST(TracerRunTest, SingleSegment) {
  const std::vector<TextSegment> segs{{"d", 0, "only"}};
  TracerOraclePredictor oracle({A::kSubText});
  const auto r = tracer_structure_document(segs, oracle, {});
  EXPECT_EQ(r.report.transitions, 1u);
  EXPECT_EQ(r.report.reduces, 0u);
}

TEST(TracerRunTest, ReducesAreBoundedByPushes) {
  // Reduces whenever allowed, so every segment after the first pops to root.
  class Stubborn final : public TracerPredictor {
   public:
    std::string predict(const TracerRequest& r) override {
      const bool can_reduce = std::find(r.allowed.begin(), r.allowed.end(), A::kReduce) !=
                              r.allowed.end();
      return can_reduce ? "reduce" : "sub-heading";
    }
  };
  const std::vector<TextSegment> segs{{"d", 0, "a"}, {"d", 1, "b"}, {"d", 2, "c"}};
  Stubborn s;
  const auto r = tracer_structure_document(segs, s, {});
  EXPECT_EQ(r.report.transitions, 5u);
  EXPECT_EQ(r.report.reduces, 2u);
}

TEST(TracerRunTest, DisallowedPredictionThrows) {
  class Illegal final : public TracerPredictor {
   public:
    std::string predict(const TracerRequest&) override { return "reduce"; }
  };
  const std::vector<TextSegment> segs{{"d", 0, "a"}};
  Illegal i;
  EXPECT_THROW(tracer_structure_document(segs, i, {}), ConstraintViolation);
}

TEST(TracerPromptTest, PairwiseAndGlobal) {
  TracerState s = tracer_step(with_pending({}, "Intro"), A::kSubHeading);
  s = tracer_step(with_pending(s, "body,"), A::kSubText);
  s = with_pending(s, "more.");
  EXPECT_EQ(render_pairwise_prompt(s, {}),
            "### PARENT:\n* body,\n\n### SEGMENT:\nmore.\n\n### ACTION:\n");
  TracerConfig cfg;
  cfg.global_context = true;
  EXPECT_EQ(render_tracer_prompt(s, cfg),
            "### STACK:\n+ Intro\n* body,\n\n### SEGMENT:\nmore.\n\n### ACTION:\n");
}

}  // namespace
}  // namespace docstruct::tracer
