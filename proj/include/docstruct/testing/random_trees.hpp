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
#include <random>
#include <string>
#include <vector>

#include "docstruct/action.hpp"
#include "docstruct/tree.hpp"

// Generators for property checks. Not used by the library proper.

namespace docstruct::testing {

/// Random valid tree with exactly `nodes` nodes (root included). Labels come
/// from a small alphabet so that equal labels are common.
template <typename Rng>
LogicalTree random_small_tree(Rng& rng, std::size_t nodes,
                              std::size_t alphabet = 3) {
  // Random parent array over preorder positions: node i attaches to some
  // node on the rightmost path of the tree built so far, which keeps the
  // arena in preorder.
  std::vector<int> parent(nodes, -1);
  std::vector<int> rightmost{0};
  for (std::size_t i = 1; i < nodes; ++i) {
    std::uniform_int_distribution<std::size_t> pick(0, rightmost.size() - 1);
    const std::size_t at = pick(rng);
    rightmost.resize(at + 1);
    parent[i] = rightmost.back();
    rightmost.push_back(static_cast<int>(i));
  }
  std::vector<bool> has_children(nodes, false);
  for (std::size_t i = 1; i < nodes; ++i) has_children[static_cast<std::size_t>(parent[i])] = true;

  std::uniform_int_distribution<std::size_t> letter(0, alphabet - 1);
  std::bernoulli_distribution coin(0.5);
  LogicalTree tree;
  std::vector<NodeId> ids(nodes);
  for (std::size_t i = 1; i < nodes; ++i) {
    const std::string text(1, static_cast<char>('a' + letter(rng)));
    const NodeId p = ids[static_cast<std::size_t>(parent[i])];
    ids[i] = (has_children[i] || coin(rng)) ? tree.add_heading(p, text)
                                            : tree.add_paragraph(p, text);
    if (coin(rng) && coin(rng)) tree.append_content(ids[i], "z");
  }
  return tree;
}

/// Arbitrary (mostly invalid) action sequences: heading levels up to
/// `max_level`, concatenations anywhere.
template <typename Rng>
std::vector<Action> random_actions(Rng& rng, std::size_t length, int max_level) {
  std::uniform_int_distribution<int> kind(0, 2);
  std::uniform_int_distribution<int> level(1, max_level);
  std::vector<Action> out;
  out.reserve(length);
  for (std::size_t i = 0; i < length; ++i) {
    switch (kind(rng)) {
      case 0:
        out.push_back(Action::heading(level(rng)));
        break;
      case 1:
        out.push_back(Action::paragraph());
        break;
      default:
        out.push_back(Action::concatenation());
    }
  }
  return out;
}

}  // namespace docstruct::testing
