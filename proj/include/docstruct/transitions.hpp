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
#include <optional>
#include <string>
#include <vector>

#include "docstruct/action.hpp"
#include "docstruct/errors.hpp"
#include "docstruct/tree.hpp"

namespace docstruct {

/// Stack half of an action. `new_node` is the node created by the action
/// (required for NewHeading/NewParagraph, ignored for Concatenation).
inline ContextStack update_stack(ContextStack stack, const Action& action,
                                 std::optional<NodeId> new_node) {
  switch (action.kind) {
    case Action::Kind::kNewHeading: {
      if (action.level < 1 || action.level > stack.max_heading_level() + 1) {
        throw InvalidTransition("level-" + std::to_string(action.level) +
                                " heading with stack max level " +
                                std::to_string(stack.max_heading_level()));
      }
      if (!new_node) throw InvalidTransition("heading action without a node");
      while (!(stack.top().kind == NodeKind::kHeading &&
               stack.top().level == action.level - 1)) {
        stack.pop();
      }
      stack.push({*new_node, NodeKind::kHeading, action.level});
      break;
    }
    case Action::Kind::kNewParagraph:
      if (!new_node) throw InvalidTransition("paragraph action without a node");
      if (stack.top().kind == NodeKind::kParagraph) stack.pop();
      stack.push({*new_node, NodeKind::kParagraph, 0});
      break;
    case Action::Kind::kConcatenation:
      if (stack.root_only()) {
        throw InvalidTransition("concatenation onto a root-only stack");
      }
      break;
  }
  return stack;
}

/// Tree + stack of one structuring run.
struct EngineState {
  LogicalTree tree;
  ContextStack stack;
  std::size_t consumed = 0;
  std::vector<std::size_t> skipped;
};

/// Applies one action in place. Throws InvalidTransition, leaving `state`
/// untouched, when the action is not valid for the current stack.
inline void apply_action_in_place(EngineState& state, const Action& action,
                                  const TextSegment& segment) {
  switch (action.kind) {
    case Action::Kind::kNewHeading: {
      if (action.level < 1 ||
          action.level > state.stack.max_heading_level() + 1) {
        throw InvalidTransition(
            "level-" + std::to_string(action.level) +
            " heading with stack max level " +
            std::to_string(state.stack.max_heading_level()));
      }
      // The parent is the stack's level-(k-1) heading.
      const auto& entries = state.stack.entries();
      const NodeId parent = entries[static_cast<std::size_t>(action.level - 1)].id;
      const NodeId id = state.tree.add_heading(parent, segment.text);
      state.stack = update_stack(std::move(state.stack), action, id);
      break;
    }
    case Action::Kind::kNewParagraph: {
      const auto& entries = state.stack.entries();
      const NodeId parent = state.stack.top().kind == NodeKind::kParagraph
                                ? entries[entries.size() - 2].id
                                : state.stack.top().id;
      const NodeId id = state.tree.add_paragraph(parent, segment.text);
      state.stack = update_stack(std::move(state.stack), action, id);
      break;
    }
    case Action::Kind::kConcatenation:
      if (state.stack.root_only()) {
        throw InvalidTransition("concatenation onto a root-only stack");
      }
      state.tree.append_content(state.stack.top().id, segment.text);
      break;
  }
  ++state.consumed;
}

inline EngineState apply_action(EngineState state, const Action& action,
                                const TextSegment& segment) {
  apply_action_in_place(state, action, segment);
  return state;
}

/// Debug validator: tree invariants, stack invariants, and stack = path to the
/// last added node.
inline std::optional<std::string> find_state_violation(const EngineState& s) {
  if (auto why = s.tree.find_violation()) return why;
  if (auto why = s.stack.find_violation()) return why;
  const NodeId last = s.tree.insertion_order().back();
  if (!stack_matches_path(s.stack, s.tree, last)) {
    return std::string("stack is not the root-to-last-node path");
  }
  return std::nullopt;
}

}  // namespace docstruct
