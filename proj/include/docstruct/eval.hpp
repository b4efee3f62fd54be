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
#include <cstdio>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "docstruct/errors.hpp"
#include "docstruct/jsonl.hpp"
#include "docstruct/tree.hpp"

namespace docstruct {

enum class MatchMode {
  kStrict,  // kind, depth, text and the ancestor heading path
  kLoose,   // kind, depth and text only
};

enum class Category { kHeading, kParagraph, kTotal };

struct NodeKey {
  NodeKind kind = NodeKind::kHeading;
  int depth = 0;
  std::string text;
  std::vector<std::string> ancestor_path;  // joined heading texts, root excluded

  friend auto operator<=>(const NodeKey&, const NodeKey&) = default;
};

inline std::vector<NodeKey> node_keys(const LogicalTree& tree, MatchMode mode,
                                      std::string_view separator) {
  std::vector<NodeKey> keys;
  keys.reserve(tree.size());
  for (NodeId id : tree.preorder()) {
    if (id == tree.root()) continue;
    NodeKey key{tree[id].kind, tree.depth(id), tree.joined_text(id, separator), {}};
    if (mode == MatchMode::kStrict) {
      const auto path = tree.path_to(id);
      for (std::size_t i = 1; i + 1 < path.size(); ++i) {
        key.ancestor_path.push_back(tree.joined_text(path[i], separator));
      }
    }
    keys.push_back(std::move(key));
  }
  return keys;
}

/// Precision/recall/F1 with the raw counts they came from.
struct Prf {
  std::size_t matched = 0;
  std::size_t predicted = 0;
  std::size_t gold = 0;

  double precision() const {
    if (predicted == 0) return gold == 0 ? 1.0 : 0.0;
    return static_cast<double>(matched) / static_cast<double>(predicted);
  }
  double recall() const {
    if (gold == 0) return predicted == 0 ? 1.0 : 0.0;
    return static_cast<double>(matched) / static_cast<double>(gold);
  }
  double f1() const {
    if (predicted == 0 && gold == 0) return 1.0;
    if (matched == 0) return 0.0;
    const double p = precision();
    const double r = recall();
    return 2.0 * p * r / (p + r);
  }

  Prf& operator+=(const Prf& o) {
    matched += o.matched;
    predicted += o.predicted;
    gold += o.gold;
    return *this;
  }
};

inline nlohmann::json to_json(const Prf& p) {
  return {{"precision", p.precision()},
          {"recall", p.recall()},
          {"f1", p.f1()},
          {"matched", p.matched},
          {"predicted", p.predicted},
          {"gold", p.gold}};
}

namespace detail {
template <typename T>
Prf multiset_prf(const std::vector<T>& pred, const std::vector<T>& gold) {
  std::map<T, long> counts;
  for (const auto& k : gold) ++counts[k];
  Prf out{0, pred.size(), gold.size()};
  for (const auto& k : pred) {
    auto it = counts.find(k);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++out.matched;
    }
  }
  return out;
}

inline bool in_category(NodeKind kind, Category c) {
  return c == Category::kTotal ||
         (c == Category::kHeading) == (kind == NodeKind::kHeading);
}
}  // namespace detail

/// Multiset node matching, root excluded.
inline Prf node_f1(const LogicalTree& pred, const LogicalTree& gold,
                   Category category, MatchMode mode = MatchMode::kStrict,
                   std::string_view separator = " ") {
  auto filter = [&](const LogicalTree& t) {
    auto keys = node_keys(t, mode, separator);
    std::erase_if(keys, [&](const NodeKey& k) {
      return !detail::in_category(k.kind, category);
    });
    return keys;
  };
  return detail::multiset_prf(filter(pred), filter(gold));
}

/// Flat heading detection: heading texts only, depth and position ignored.
inline Prf heading_detection_f1(const LogicalTree& pred, const LogicalTree& gold,
                                std::string_view separator = " ") {
  auto texts = [&](const LogicalTree& t) {
    std::vector<std::string> out;
    for (NodeId id : t.preorder()) {
      if (id != t.root() && t[id].is_heading()) {
        out.push_back(t.joined_text(id, separator));
      }
    }
    return out;
  };
  return detail::multiset_prf(texts(pred), texts(gold));
}

// ---------------------------------------------------------------------------
// Tree edit distance

/// Ordered labelled tree in preorder; node 0 is the root.
struct LabelTree {
  std::vector<std::string> labels;
  std::vector<std::vector<int>> children;

  std::size_t size() const { return labels.size(); }
};

/// Labels are (kind, joined text). With `headings_only`, paragraph subtrees
/// are pruned.
inline LabelTree label_tree(const LogicalTree& tree, bool headings_only,
                            std::string_view separator = " ") {
  LabelTree out;
  std::map<NodeId, int> index;
  for (NodeId id : tree.preorder()) {
    const Node& n = tree[id];
    if (headings_only && n.is_paragraph()) continue;
    const int me = static_cast<int>(out.labels.size());
    index[id] = me;
    out.labels.push_back(std::string(n.is_heading() ? "H" : "P") + '\x1f' +
                         tree.joined_text(id, separator));
    out.children.emplace_back();
    if (n.parent) out.children[static_cast<std::size_t>(index.at(*n.parent))].push_back(me);
  }
  return out;
}

/// Zhang-Shasha ordered tree edit distance with unit insert/delete cost and
/// unit relabel cost for differing labels.
inline long tree_edit_distance(const LabelTree& a, const LabelTree& b) {
  struct Post {
    std::vector<const std::string*> label;  // 1-based postorder
    std::vector<int> leftmost;               // leftmost leaf, postorder index
    std::vector<int> keyroots;
  };
  auto prepare = [](const LabelTree& t) {
    Post p;
    const int n = static_cast<int>(t.size());
    p.label.assign(static_cast<std::size_t>(n) + 1, nullptr);
    p.leftmost.assign(static_cast<std::size_t>(n) + 1, 0);
    if (n == 0) return p;
    int counter = 0;
    // Iterative postorder: (node, next child index).
    std::vector<std::pair<int, std::size_t>> work{{0, 0}};
    std::vector<int> first_leaf(t.size(), 0);
    while (!work.empty()) {
      auto& [node, next] = work.back();
      const auto& kids = t.children[static_cast<std::size_t>(node)];
      if (next < kids.size()) {
        const int child = kids[next++];
        work.push_back({child, 0});
        continue;
      }
      const int post = ++counter;
      p.label[static_cast<std::size_t>(post)] = &t.labels[static_cast<std::size_t>(node)];
      first_leaf[static_cast<std::size_t>(node)] =
          kids.empty() ? post : first_leaf[static_cast<std::size_t>(kids.front())];
      p.leftmost[static_cast<std::size_t>(post)] = first_leaf[static_cast<std::size_t>(node)];
      work.pop_back();
    }
    // Keyroots: the highest node for each distinct leftmost leaf.
    std::map<int, int> highest;
    for (int i = 1; i <= n; ++i) highest[p.leftmost[static_cast<std::size_t>(i)]] = i;
    for (const auto& [leaf, node] : highest) p.keyroots.push_back(node);
    std::sort(p.keyroots.begin(), p.keyroots.end());
    return p;
  };

  const Post pa = prepare(a);
  const Post pb = prepare(b);
  const int n = static_cast<int>(a.size());
  const int m = static_cast<int>(b.size());
  if (n == 0 || m == 0) return n + m;

  std::vector<long> treedist(static_cast<std::size_t>((n + 1) * (m + 1)), 0);
  auto td = [&](int i, int j) -> long& {
    return treedist[static_cast<std::size_t>(i * (m + 1) + j)];
  };
  std::vector<long> forest(static_cast<std::size_t>((n + 2) * (m + 2)), 0);

  for (int i : pa.keyroots) {
    for (int j : pb.keyroots) {
      const int li = pa.leftmost[static_cast<std::size_t>(i)];
      const int lj = pb.leftmost[static_cast<std::size_t>(j)];
      const int cols = j - lj + 2;
      auto fd = [&](int x, int y) -> long& {
        // x in [li-1, i], y in [lj-1, j]
        return forest[static_cast<std::size_t>((x - li + 1) * cols + (y - lj + 1))];
      };
      fd(li - 1, lj - 1) = 0;
      for (int x = li; x <= i; ++x) fd(x, lj - 1) = fd(x - 1, lj - 1) + 1;
      for (int y = lj; y <= j; ++y) fd(li - 1, y) = fd(li - 1, y - 1) + 1;
      for (int x = li; x <= i; ++x) {
        for (int y = lj; y <= j; ++y) {
          const int lx = pa.leftmost[static_cast<std::size_t>(x)];
          const int ly = pb.leftmost[static_cast<std::size_t>(y)];
          const long del = fd(x - 1, y) + 1;
          const long ins = fd(x, y - 1) + 1;
          if (lx == li && ly == lj) {
            const long cost =
                *pa.label[static_cast<std::size_t>(x)] == *pb.label[static_cast<std::size_t>(y)] ? 0 : 1;
            fd(x, y) = std::min({del, ins, fd(x - 1, y - 1) + cost});
            td(x, y) = fd(x, y);
          } else {
            fd(x, y) = std::min({del, ins, fd(lx - 1, ly - 1) + td(x, y)});
          }
        }
      }
    }
  }
  return td(n, m);
}

/// 1 - TED / max(|pred|, |gold|), node counts including the root.
inline double teds(const LogicalTree& pred, const LogicalTree& gold,
                   bool toc_only, std::string_view separator = " ") {
  const LabelTree a = label_tree(pred, toc_only, separator);
  const LabelTree b = label_tree(gold, toc_only, separator);
  const auto denom = static_cast<double>(std::max(a.size(), b.size()));
  return 1.0 - static_cast<double>(tree_edit_distance(a, b)) / denom;
}

/// Fraction of documents whose predicted tree equals gold exactly (content
/// lists, not joined text).
inline double doc_acc(const std::vector<std::pair<const LogicalTree*, const LogicalTree*>>& pairs) {
  if (pairs.empty()) throw EmptyCorpus("doc_acc over an empty corpus");
  std::size_t hits = 0;
  for (const auto& [pred, gold] : pairs) hits += (*pred == *gold) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(pairs.size());
}

// ---------------------------------------------------------------------------
// Corpus report

struct EvalOptions {
  bool toc_only = false;
  MatchMode match = MatchMode::kStrict;
  std::string join_separator = " ";
};

struct DocumentScore {
  std::string doc_id;
  Prf heading;
  Prf paragraph;
  Prf total;
  Prf heading_detection;
  double teds = 0.0;
  bool exact = false;
};

struct EvalReport {
  EvalOptions options;
  Prf heading;  // micro-averaged over documents
  Prf paragraph;
  Prf total;
  Prf heading_detection;
  double teds_mean = 0.0;
  double doc_acc = 0.0;
  std::size_t documents = 0;
  std::vector<DocumentScore> per_document;  // sorted by doc_id
};

inline DocumentScore score_document(const std::string& doc_id,
                                    const LogicalTree& pred,
                                    const LogicalTree& gold,
                                    const EvalOptions& opt) {
  DocumentScore s;
  s.doc_id = doc_id;
  const auto& sep = opt.join_separator;
  s.heading = node_f1(pred, gold, Category::kHeading, opt.match, sep);
  if (!opt.toc_only) {
    s.paragraph = node_f1(pred, gold, Category::kParagraph, opt.match, sep);
  }
  s.total = opt.toc_only ? s.heading
                         : node_f1(pred, gold, Category::kTotal, opt.match, sep);
  s.heading_detection = heading_detection_f1(pred, gold, sep);
  s.teds = teds(pred, gold, opt.toc_only, sep);
  s.exact = pred == gold;
  return s;
}

/// Joins predictions to gold by doc_id; any unmatched id is a JoinError.
inline EvalReport evaluate_corpus(const std::vector<TreeDocument>& pred,
                                  const std::vector<TreeDocument>& gold,
                                  const EvalOptions& opt = {}) {
  std::map<std::string, const LogicalTree*> by_id_pred;
  std::map<std::string, const LogicalTree*> by_id_gold;
  for (const auto& d : pred) by_id_pred[d.doc_id] = &d.tree;
  for (const auto& d : gold) by_id_gold[d.doc_id] = &d.tree;
  std::vector<std::string> missing_pred;
  std::vector<std::string> missing_gold;
  for (const auto& [id, t] : by_id_gold) {
    if (!by_id_pred.contains(id)) missing_pred.push_back(id);
  }
  for (const auto& [id, t] : by_id_pred) {
    if (!by_id_gold.contains(id)) missing_gold.push_back(id);
  }
  if (!missing_pred.empty() || !missing_gold.empty()) {
    throw JoinError(std::move(missing_pred), std::move(missing_gold));
  }
  if (by_id_gold.empty()) throw EmptyCorpus("no documents to evaluate");

  EvalReport report;
  report.options = opt;
  double teds_sum = 0.0;
  std::size_t exact = 0;
  for (const auto& [id, g] : by_id_gold) {
    DocumentScore s = score_document(id, *by_id_pred.at(id), *g, opt);
    report.heading += s.heading;
    report.paragraph += s.paragraph;
    report.total += s.total;
    report.heading_detection += s.heading_detection;
    teds_sum += s.teds;
    exact += s.exact ? 1 : 0;
    report.per_document.push_back(std::move(s));
  }
  report.documents = report.per_document.size();
  report.teds_mean = teds_sum / static_cast<double>(report.documents);
  report.doc_acc = static_cast<double>(exact) / static_cast<double>(report.documents);
  return report;
}

inline nlohmann::json to_json(const EvalReport& r) {
  nlohmann::json j;
  j["toc_only"] = r.options.toc_only;
  j["match"] = r.options.match == MatchMode::kStrict ? "strict" : "loose";
  j["documents"] = r.documents;
  j["heading"] = to_json(r.heading);
  if (!r.options.toc_only) j["paragraph"] = to_json(r.paragraph);
  j["total"] = to_json(r.total);
  j["heading_detection"] = to_json(r.heading_detection);
  j["teds"] = r.teds_mean;
  j["doc_acc"] = r.doc_acc;
  auto& docs = j["per_document"] = nlohmann::json::array();
  for (const auto& s : r.per_document) {
    docs.push_back({{"doc_id", s.doc_id},
                    {"heading_f1", s.heading.f1()},
                    {"paragraph_f1", s.paragraph.f1()},
                    {"total_f1", s.total.f1()},
                    {"hd_f1", s.heading_detection.f1()},
                    {"teds", s.teds},
                    {"exact", s.exact}});
  }
  return j;
}

/// Heading / Paragraph / Total F1 and DocAcc as percentages, plus TEDS.
inline std::string summary_table(const EvalReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "documents  %zu\n"
                "heading    P %6.2f  R %6.2f  F1 %6.2f\n"
                "paragraph  P %6.2f  R %6.2f  F1 %6.2f\n"
                "total      P %6.2f  R %6.2f  F1 %6.2f\n"
                "HD F1      %6.2f\n"
                "TEDS       %6.2f\n"
                "DocAcc     %6.2f\n",
                r.documents, 100 * r.heading.precision(), 100 * r.heading.recall(),
                100 * r.heading.f1(), 100 * r.paragraph.precision(),
                100 * r.paragraph.recall(), 100 * r.paragraph.f1(),
                100 * r.total.precision(), 100 * r.total.recall(),
                100 * r.total.f1(), 100 * r.heading_detection.f1(),
                100 * r.teds_mean, 100 * r.doc_acc);
  return buf;
}

}  // namespace docstruct
