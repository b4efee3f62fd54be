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
#include <limits>
#include <string>
#include <vector>

#include "docstruct/tree.hpp"

// Exhaustive ordered tree edit distance, for cross-checking fast
// implementations on small trees. It enumerates every mapping between the
// two node sets that preserves preorder and ancestry (the mappings an edit
// script can realise) and takes the cheapest:
//   cost = #relabelled pairs + #unmapped nodes in either tree.
// Exponential; keep trees to a handful of nodes.

namespace docstruct::testing {

namespace detail {
struct Flat {
  std::vector<std::string> label;
  std::vector<std::vector<bool>> ancestor;  // ancestor[x][y]: x above y
};

inline Flat flatten(const LogicalTree& tree, bool headings_only,
                    const std::string& separator) {
  Flat f;
  std::vector<NodeId> kept;
  for (NodeId id : tree.preorder()) {
    if (headings_only && tree[id].is_paragraph()) continue;
    kept.push_back(id);
    f.label.push_back((tree[id].is_heading() ? "heading:" : "paragraph:") +
                      join(tree[id].content, separator));
  }
  const std::size_t n = kept.size();
  f.ancestor.assign(n, std::vector<bool>(n, false));
  for (std::size_t y = 0; y < n; ++y) {
    const auto path = tree.path_to(kept[y]);
    for (std::size_t x = 0; x < n; ++x) {
      if (x == y) continue;
      for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        if (path[k] == kept[x]) f.ancestor[x][y] = true;
      }
    }
  }
  return f;
}

struct Search {
  const Flat& a;
  const Flat& b;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  long best = std::numeric_limits<long>::max();

  bool compatible(std::size_t x, std::size_t y) const {
    for (const auto& [px, py] : pairs) {
      // Preorder is preserved because x and y only ever increase.
      if (a.ancestor[px][x] != b.ancestor[py][y]) return false;
    }
    return true;
  }

  void run(std::size_t x, std::size_t min_y, long relabels) {
    const auto n = static_cast<long>(a.label.size());
    const auto m = static_cast<long>(b.label.size());
    if (x == a.label.size()) {
      const auto k = static_cast<long>(pairs.size());
      best = std::min(best, relabels + (n - k) + (m - k));
      return;
    }
    run(x + 1, min_y, relabels);  // x unmapped
    for (std::size_t y = min_y; y < b.label.size(); ++y) {
      if (!compatible(x, y)) continue;
      pairs.emplace_back(x, y);
      run(x + 1, y + 1, relabels + (a.label[x] == b.label[y] ? 0 : 1));
      pairs.pop_back();
    }
  }
};
}  // namespace detail

inline long brute_force_ted(const LogicalTree& a, const LogicalTree& b,
                            bool headings_only = false,
                            const std::string& separator = " ") {
  const auto fa = detail::flatten(a, headings_only, separator);
  const auto fb = detail::flatten(b, headings_only, separator);
  detail::Search s{fa, fb, {}, std::numeric_limits<long>::max()};
  s.run(0, 0, 0);
  return s.best;
}

}  // namespace docstruct::testing
