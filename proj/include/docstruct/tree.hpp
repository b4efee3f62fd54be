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

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "docstruct/action.hpp"
#include "docstruct/errors.hpp"

namespace docstruct {

/// One extracted text line of a document.
struct TextSegment {
  std::string doc_id;
  std::size_t index = 0;
  std::string text;

  friend bool operator==(const TextSegment&, const TextSegment&) = default;
};

/// A document as a flat list of segment texts.
struct Document {
  std::string doc_id;
  std::vector<std::string> segments;

  std::vector<TextSegment> text_segments() const {
    std::vector<TextSegment> out;
    out.reserve(segments.size());
    for (std::size_t i = 0; i < segments.size(); ++i) {
      out.push_back({doc_id, i, segments[i]});
    }
    return out;
  }

  friend bool operator==(const Document&, const Document&) = default;
};

inline bool has_line_break(std::string_view text) {
  return text.find_first_of("\r\n") != std::string_view::npos;
}

struct NodeId {
  std::uint32_t value = 0;

  friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

enum class NodeKind : std::uint8_t { kHeading, kParagraph };

inline const char* to_string(NodeKind kind) {
  return kind == NodeKind::kHeading ? "heading" : "paragraph";
}

struct Node {
  NodeKind kind = NodeKind::kHeading;
  int level = 0;  // headings only; paragraphs derive depth from the parent
  std::vector<std::string> content;
  std::vector<NodeId> children;
  std::optional<NodeId> parent;

  bool is_heading() const { return kind == NodeKind::kHeading; }
  bool is_paragraph() const { return kind == NodeKind::kParagraph; }
};

inline std::string join(const std::vector<std::string>& parts,
                        std::string_view separator) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i != 0) out += separator;
    out += parts[i];
  }
  return out;
}

/// Arena-backed logical tree. Node 0 is the contentless level-0 root heading.
/// Nodes are only ever appended, so arena order is creation order.
class LogicalTree {
 public:
  LogicalTree() {
    nodes_.push_back(Node{NodeKind::kHeading, 0, {}, {}, std::nullopt});
    order_.push_back(NodeId{0});
  }

  NodeId root() const { return NodeId{0}; }
  std::size_t size() const { return nodes_.size(); }
  bool contains(NodeId id) const { return id.value < nodes_.size(); }

  const Node& node(NodeId id) const {
    check(id);
    return nodes_[id.value];
  }
  const Node& operator[](NodeId id) const { return node(id); }

  const std::vector<NodeId>& insertion_order() const { return order_; }

  /// Appends a child without checking structural invariants; callers that
  /// accept untrusted input run validate() afterwards.
  NodeId add_child(NodeId parent, NodeKind kind, int level,
                   std::vector<std::string> content) {
    check(parent);
    const NodeId id{static_cast<std::uint32_t>(nodes_.size())};
    nodes_.push_back(Node{kind, kind == NodeKind::kHeading ? level : 0,
                          std::move(content), {}, parent});
    nodes_[parent.value].children.push_back(id);
    order_.push_back(id);
    return id;
  }

  NodeId add_heading(NodeId parent, std::string text) {
    const Node& p = node(parent);
    if (!p.is_heading()) throw InvalidTree("heading attached under a paragraph");
    return add_child(parent, NodeKind::kHeading, p.level + 1, {std::move(text)});
  }

  NodeId add_paragraph(NodeId parent, std::string text) {
    if (!node(parent).is_heading()) {
      throw InvalidTree("paragraph attached under a paragraph");
    }
    return add_child(parent, NodeKind::kParagraph, 0, {std::move(text)});
  }

  void append_content(NodeId id, std::string text) {
    check(id);
    nodes_[id.value].content.push_back(std::move(text));
  }

  void set_root_content(int level, std::vector<std::string> content) {
    nodes_[0].level = level;
    nodes_[0].content = std::move(content);
  }

  /// Root is depth 0.
  int depth(NodeId id) const {
    int d = 0;
    for (auto p = node(id).parent; p; p = node(*p).parent) ++d;
    return d;
  }

  /// Node ids from the root down to `id`, inclusive.
  std::vector<NodeId> path_to(NodeId id) const {
    std::vector<NodeId> path;
    for (std::optional<NodeId> cur = id; cur; cur = node(*cur).parent) {
      path.push_back(*cur);
    }
    return {path.rbegin(), path.rend()};
  }

  std::vector<NodeId> preorder() const {
    std::vector<NodeId> out;
    out.reserve(nodes_.size());
    std::vector<NodeId> pending{root()};
    while (!pending.empty()) {
      const NodeId id = pending.back();
      pending.pop_back();
      out.push_back(id);
      const auto& kids = nodes_[id.value].children;
      for (auto it = kids.rbegin(); it != kids.rend(); ++it) pending.push_back(*it);
    }
    return out;
  }

  std::string joined_text(NodeId id, std::string_view separator) const {
    return join(node(id).content, separator);
  }

  int max_depth() const {
    int best = 0;
    for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
      best = std::max(best, depth(NodeId{i}));
    }
    return best;
  }

  /// Number of segments the tree was built from.
  std::size_t content_entry_count() const {
    std::size_t n = 0;
    for (const auto& nd : nodes_) n += nd.content.size();
    return n;
  }

  /// True when every heading lists its paragraph children before its
  /// heading children. Only such trees can be rebuilt from actions: a
  /// paragraph always attaches under the deepest open heading.
  bool action_reachable() const {
    for (const auto& nd : nodes_) {
      bool seen_heading = false;
      for (NodeId c : nd.children) {
        if (nodes_[c.value].is_heading()) {
          seen_heading = true;
        } else if (seen_heading) {
          return false;
        }
      }
    }
    return true;
  }

  /// Returns a description of the first violated invariant, if any.
  std::optional<std::string> find_violation() const;

  void validate() const {
    if (auto why = find_violation()) throw InvalidTree(*why);
  }

 private:
  void check(NodeId id) const {
    if (id.value >= nodes_.size()) {
      throw InvalidTree("unknown node id " + std::to_string(id.value));
    }
  }

  std::vector<Node> nodes_;
  std::vector<NodeId> order_;
};

inline std::optional<std::string> LogicalTree::find_violation() const {
  const Node& r = nodes_[0];
  if (!r.is_heading()) return "root must be a heading";
  if (r.level != 0) return "root must have level 0";
  if (!r.content.empty()) return "root must have empty content";
  if (r.parent) return "root must not have a parent";

  for (std::uint32_t i = 1; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    const std::string where = "node " + std::to_string(i) + ": ";
    if (!n.parent || !contains(*n.parent)) return where + "missing parent";
    const Node& p = nodes_[n.parent->value];
    if (!p.is_heading()) return where + "parent is a paragraph";
    if (n.content.empty()) return where + "empty content";
    for (const auto& text : n.content) {
      if (has_line_break(text)) return where + "content contains a line break";
    }
    if (n.is_heading()) {
      if (n.level < 1 || n.level > kMaxHeadingLevel) {
        return where + "heading level out of range";
      }
      if (n.level != p.level + 1) return where + "heading skips a level";
    } else if (!n.children.empty()) {
      return where + "paragraph has children";
    }
  }

  // Parent/children consistency and acyclicity: every non-root node must be
  // listed exactly once, by its own parent.
  std::vector<int> seen(nodes_.size(), 0);
  for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
    for (NodeId c : nodes_[i].children) {
      if (!contains(c) || c.value == 0) return "dangling child reference";
      if (nodes_[c.value].parent != NodeId{i}) return "parent/child mismatch";
      if (++seen[c.value] > 1) return "node listed twice";
    }
  }
  // Arena order must be a preorder traversal.
  const auto pre = preorder();
  if (pre.size() != nodes_.size()) return "tree is not connected";
  for (std::size_t i = 0; i < pre.size(); ++i) {
    if (pre[i] != order_[i]) return "insertion order is not a preorder";
  }
  return std::nullopt;
}

namespace detail {
inline bool subtree_equal(const LogicalTree& a, NodeId x, const LogicalTree& b,
                          NodeId y) {
  const Node& n = a[x];
  const Node& m = b[y];
  if (n.kind != m.kind || n.content != m.content) return false;
  if (n.is_heading() && n.level != m.level) return false;
  if (n.children.size() != m.children.size()) return false;
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    if (!subtree_equal(a, n.children[i], b, m.children[i])) return false;
  }
  return true;
}
}  // namespace detail

/// Exact structural equality: kinds, levels, content lists and child order.
inline bool operator==(const LogicalTree& a, const LogicalTree& b) {
  return detail::subtree_equal(a, a.root(), b, b.root());
}

/// Indented outline, one line per node.
inline std::string pretty_print(const LogicalTree& tree,
                                std::string_view separator = " ") {
  std::string out;
  for (NodeId id : tree.preorder()) {
    if (id == tree.root()) continue;
    const Node& n = tree[id];
    out += std::string(static_cast<std::size_t>(tree.depth(id) - 1) * 2, ' ');
    out += n.is_heading() ? std::string(static_cast<std::size_t>(n.level), '+')
                          : std::string("*");
    out += ' ';
    out += tree.joined_text(id, separator);
    out += '\n';
  }
  return out;
}

struct StackEntry {
  NodeId id;
  NodeKind kind = NodeKind::kHeading;
  int level = 0;  // headings only

  friend bool operator==(const StackEntry&, const StackEntry&) = default;
};

/// The global context stack: the path from the root to the last added node.
class ContextStack {
 public:
  ContextStack() : entries_{StackEntry{NodeId{0}, NodeKind::kHeading, 0}} {}
  explicit ContextStack(std::vector<StackEntry> entries)
      : entries_(std::move(entries)) {}

  const std::vector<StackEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  const StackEntry& top() const { return entries_.back(); }
  bool root_only() const { return entries_.size() == 1; }

  /// Level of the deepest heading on the stack (0 when only the root).
  int max_heading_level() const {
    for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
      if (it->kind == NodeKind::kHeading) return it->level;
    }
    return 0;
  }

  void push(StackEntry entry) { entries_.push_back(entry); }
  void pop() { entries_.pop_back(); }

  std::optional<std::string> find_violation() const {
    if (entries_.empty()) return "empty stack";
    if (entries_[0].id != NodeId{0} || entries_[0].kind != NodeKind::kHeading ||
        entries_[0].level != 0) {
      return "bottom entry is not the root";
    }
    for (std::size_t i = 1; i < entries_.size(); ++i) {
      const auto& e = entries_[i];
      if (e.kind == NodeKind::kParagraph) {
        if (i + 1 != entries_.size()) return "paragraph below the top";
      } else if (e.level != static_cast<int>(i)) {
        return "heading levels are not gap-free";
      }
    }
    return std::nullopt;
  }

  friend bool operator==(const ContextStack&, const ContextStack&) = default;

 private:
  std::vector<StackEntry> entries_;
};

/// Checks that `stack` is exactly the root-to-`last` path of `tree`.
inline bool stack_matches_path(const ContextStack& stack,
                               const LogicalTree& tree, NodeId last) {
  const auto path = tree.path_to(last);
  if (path.size() != stack.size()) return false;
  for (std::size_t i = 0; i < path.size(); ++i) {
    const auto& e = stack.entries()[i];
    const Node& n = tree[path[i]];
    if (e.id != path[i] || e.kind != n.kind) return false;
    if (n.is_heading() && e.level != n.level) return false;
  }
  return true;
}

}  // namespace docstruct
