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

#include "docstruct/tree.hpp"

#include <gtest/gtest.h>

namespace docstruct {
namespace {

TEST(TreeTest, FreshTreeIsRootOnly) {
  LogicalTree t;
  EXPECT_EQ(t.size(), 1u);
  EXPECT_TRUE(t[t.root()].is_heading());
  EXPECT_EQ(t[t.root()].level, 0);
  EXPECT_TRUE(t[t.root()].content.empty());
  EXPECT_FALSE(t.find_violation());
}

TEST(TreeTest, HeadingLevelsFollowParents) {
  LogicalTree t;
  const NodeId h1 = t.add_heading(t.root(), "A");
  const NodeId h2 = t.add_heading(h1, "B");
  const NodeId p = t.add_paragraph(h2, "text");
  EXPECT_EQ(t[h2].level, 2);
  EXPECT_EQ(t.depth(p), 3);
  EXPECT_EQ(t.path_to(p), (std::vector<NodeId>{t.root(), h1, h2, p}));
  EXPECT_THROW(t.add_paragraph(p, "nested"), InvalidTree);
  EXPECT_FALSE(t.find_violation());
}

TEST(TreeTest, ValidatorCatchesBrokenInvariants) {
  {
    LogicalTree t;
    t.add_child(t.root(), NodeKind::kHeading, 2, {"skips"});
    EXPECT_TRUE(t.find_violation());
  }
  {
    LogicalTree t;
    t.add_child(t.root(), NodeKind::kParagraph, 0, {});
    EXPECT_EQ(*t.find_violation(), "node 1: empty content");
  }
  {
    LogicalTree t;
    t.add_paragraph(t.root(), "line\nbreak");
    EXPECT_TRUE(t.find_violation());
  }
  {
    LogicalTree t;
    t.set_root_content(1, {});
    EXPECT_EQ(*t.find_violation(), "root must have level 0");
  }
  {
    // Arena order must be a preorder: attaching to an earlier sibling's
    // parent after descending breaks it.
    LogicalTree t;
    const NodeId a = t.add_heading(t.root(), "a");
    t.add_heading(t.root(), "b");
    t.add_paragraph(a, "late child of a");
    EXPECT_EQ(*t.find_violation(), "insertion order is not a preorder");
  }
}

TEST(TreeTest, EqualityComparesContentListsNotJoinedText) {
  LogicalTree a;
  a.append_content(a.add_paragraph(a.root(), "x"), "y");
  LogicalTree b;
  b.add_paragraph(b.root(), "x y");
  EXPECT_FALSE(a == b);
  EXPECT_EQ(a.joined_text(NodeId{1}, " "), b.joined_text(NodeId{1}, " "));
  LogicalTree c;
  c.append_content(c.add_paragraph(c.root(), "x"), "y");
  EXPECT_TRUE(a == c);
}

TEST(TreeTest, ActionReachability) {
  LogicalTree t;
  const NodeId h = t.add_heading(t.root(), "A");
  t.add_paragraph(h, "p");
  t.add_heading(h, "B");
  EXPECT_TRUE(t.action_reachable());
  t.add_paragraph(h, "late");
  EXPECT_NO_THROW(t.validate());
  EXPECT_FALSE(t.action_reachable());
}

TEST(StackTest, InvariantsAndMaxLevel) {
  ContextStack s;
  EXPECT_TRUE(s.root_only());
  EXPECT_EQ(s.max_heading_level(), 0);
  s.push({NodeId{1}, NodeKind::kHeading, 1});
  s.push({NodeId{2}, NodeKind::kParagraph, 0});
  EXPECT_EQ(s.max_heading_level(), 1);
  EXPECT_FALSE(s.find_violation());

  ContextStack gap({{NodeId{0}, NodeKind::kHeading, 0}, {NodeId{1}, NodeKind::kHeading, 2}});
  EXPECT_TRUE(gap.find_violation());
  ContextStack buried({{NodeId{0}, NodeKind::kHeading, 0},
                       {NodeId{1}, NodeKind::kParagraph, 0},
                       {NodeId{2}, NodeKind::kHeading, 1}});
  EXPECT_TRUE(buried.find_violation());
}

TEST(TreeTest, PrettyPrintIndentsByDepth) {
  LogicalTree t;
  const NodeId h = t.add_heading(t.root(), "Title");
  t.add_paragraph(h, "Body");
  EXPECT_EQ(pretty_print(t), "+ Title\n  * Body\n");
}

}  // namespace
}  // namespace docstruct
