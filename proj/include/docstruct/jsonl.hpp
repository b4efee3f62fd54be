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
#include <functional>
#include <istream>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "docstruct/action.hpp"
#include "docstruct/constraints.hpp"
#include "docstruct/errors.hpp"
#include "docstruct/tree.hpp"

namespace docstruct {

using Json = nlohmann::json;

struct TreeDocument {
  std::string doc_id;
  LogicalTree tree;
};

struct ActionDocument {
  std::string doc_id;
  std::vector<std::string> actions;  // raw action strings
};

// ---------------------------------------------------------------------------
// Tree JSON

namespace detail {
inline Json node_to_json(const LogicalTree& tree, NodeId id) {
  const Node& n = tree[id];
  Json j;
  j["kind"] = to_string(n.kind);
  if (n.is_heading()) j["level"] = n.level;
  j["content"] = n.content;
  Json kids = Json::array();
  for (NodeId c : n.children) kids.push_back(node_to_json(tree, c));
  j["children"] = std::move(kids);
  return j;
}

inline void node_from_json(const Json& j, LogicalTree& tree, NodeId parent,
                           int depth) {
  if (depth > kMaxHeadingLevel + 1) throw InvalidTree("tree too deep");
  if (!j.is_object()) throw InvalidTree("node is not an object");
  const std::string kind = j.at("kind").get<std::string>();
  NodeKind k;
  if (kind == "heading") {
    k = NodeKind::kHeading;
  } else if (kind == "paragraph") {
    k = NodeKind::kParagraph;
  } else {
    throw InvalidTree("unknown node kind '" + kind + "'");
  }
  const int level = k == NodeKind::kHeading ? j.at("level").get<int>() : 0;
  auto content = j.at("content").get<std::vector<std::string>>();
  const NodeId id = tree.add_child(parent, k, level, std::move(content));
  if (auto it = j.find("children"); it != j.end()) {
    if (!it->is_array()) throw InvalidTree("children is not an array");
    if (k == NodeKind::kParagraph && !it->empty()) {
      throw InvalidTree("paragraph has children");
    }
    for (const auto& c : *it) node_from_json(c, tree, id, depth + 1);
  }
}
}  // namespace detail

inline Json tree_to_json(const LogicalTree& tree) {
  return detail::node_to_json(tree, tree.root());
}

/// Builds and validates a tree. Throws InvalidTree on any invariant failure.
inline LogicalTree tree_from_json(const Json& j) {
  try {
    if (!j.is_object()) throw InvalidTree("tree is not an object");
    if (j.at("kind").get<std::string>() != "heading") {
      throw InvalidTree("root must be a heading");
    }
    LogicalTree tree;
    const int level = j.at("level").get<int>();
    auto content = j.at("content").get<std::vector<std::string>>();
    if (level != 0) throw InvalidTree("root must have level 0");
    if (!content.empty()) throw InvalidTree("root must have empty content");
    tree.set_root_content(level, std::move(content));
    if (auto it = j.find("children"); it != j.end()) {
      if (!it->is_array()) throw InvalidTree("children is not an array");
      for (const auto& c : *it) detail::node_from_json(c, tree, tree.root(), 1);
    }
    tree.validate();
    return tree;
  } catch (const Json::exception& e) {
    throw InvalidTree(std::string("bad tree JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Line-delimited readers/writers

namespace detail {
/// Calls `handle(json, line_number)` for each non-blank line; rejects
/// duplicate doc_ids. Any exception from `handle` becomes a FormatError.
inline void for_each_record(std::istream& in,
                            const std::function<void(const Json&)>& handle) {
  std::string line;
  std::size_t line_no = 0;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      const Json j = Json::parse(line);
      if (!j.is_object()) throw Error("record is not an object");
      auto id = j.find("doc_id");
      if (id == j.end() || !id->is_string()) throw Error("missing \"doc_id\"");
      if (!seen.insert(id->get<std::string>()).second) {
        throw Error("duplicate doc_id '" + id->get<std::string>() + "'");
      }
      handle(j);
    } catch (const FormatError&) {
      throw;
    } catch (const std::exception& e) {
      throw FormatError(line_no, e.what());
    }
  }
}
}  // namespace detail

inline std::vector<Document> read_segments(std::istream& in) {
  std::vector<Document> docs;
  detail::for_each_record(in, [&](const Json& j) {
    Document d{j.at("doc_id").get<std::string>(),
               j.at("segments").get<std::vector<std::string>>()};
    for (const auto& s : d.segments) {
      if (has_line_break(s)) throw Error("segment contains a line break");
    }
    docs.push_back(std::move(d));
  });
  return docs;
}

inline void write_segments(std::ostream& out, const std::vector<Document>& docs) {
  for (const auto& d : docs) {
    out << Json{{"doc_id", d.doc_id}, {"segments", d.segments}}.dump() << '\n';
  }
}

inline std::vector<TreeDocument> read_trees(std::istream& in) {
  std::vector<TreeDocument> docs;
  detail::for_each_record(in, [&](const Json& j) {
    docs.push_back({j.at("doc_id").get<std::string>(), tree_from_json(j.at("tree"))});
  });
  return docs;
}

inline void write_trees(std::ostream& out, const std::vector<TreeDocument>& docs) {
  for (const auto& d : docs) {
    out << Json{{"doc_id", d.doc_id}, {"tree", tree_to_json(d.tree)}}.dump()
        << '\n';
  }
}

/// Raw action strings; callers decide which vocabulary they belong to.
inline std::vector<ActionDocument> read_actions(std::istream& in) {
  std::vector<ActionDocument> docs;
  detail::for_each_record(in, [&](const Json& j) {
    docs.push_back({j.at("doc_id").get<std::string>(),
                    j.at("actions").get<std::vector<std::string>>()});
  });
  return docs;
}

inline void write_actions(std::ostream& out,
                          const std::vector<ActionDocument>& docs) {
  for (const auto& d : docs) {
    out << Json{{"doc_id", d.doc_id}, {"actions", d.actions}}.dump() << '\n';
  }
}

inline std::vector<std::string> action_strings(const std::vector<Action>& actions) {
  std::vector<std::string> out;
  out.reserve(actions.size());
  for (const auto& a : actions) out.push_back(to_string(a));
  return out;
}

/// Throws MalformedAction on the first bad string.
inline std::vector<Action> parse_actions(const std::vector<std::string>& strings) {
  std::vector<Action> out;
  out.reserve(strings.size());
  for (const auto& s : strings) out.push_back(parse_action(s));
  return out;
}

// ---------------------------------------------------------------------------
// Tokenizer profiles

inline TokenizerProfile profile_from_json(const Json& j) {
  TokenizerProfile p{j.at("name").get<std::string>(),
                     j.at("plus_tokens").get<std::vector<std::string>>()};
  p.validate();
  return p;
}

inline Json profile_to_json(const TokenizerProfile& p) {
  return Json{{"name", p.name}, {"plus_tokens", p.plus_tokens}};
}

}  // namespace docstruct
