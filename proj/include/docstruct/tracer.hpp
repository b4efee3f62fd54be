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
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "docstruct/config.hpp"
#include "docstruct/errors.hpp"
#include "docstruct/prompt.hpp"
#include "docstruct/tree.hpp"

// Shift-reduce baseline. Segments are attached by pairwise decisions between
// the stack top and the pending segment; Reduce pops the stack and the same
// segment is compared again, so a document of N segments takes N consuming
// transitions plus one per Reduce.

namespace docstruct::tracer {

enum class TracerAction : std::uint8_t { kSubHeading, kSubText, kReduce, kConcat };

inline constexpr TracerAction kAllActions[] = {
    TracerAction::kSubHeading, TracerAction::kSubText, TracerAction::kReduce,
    TracerAction::kConcat};

inline const char* to_string(TracerAction a) {
  switch (a) {
    case TracerAction::kSubHeading:
      return "sub-heading";
    case TracerAction::kSubText:
      return "sub-text";
    case TracerAction::kReduce:
      return "reduce";
    case TracerAction::kConcat:
      return "concat";
  }
  return "?";
}

/// Accepts the canonical names; "sub-paragraph" is an alias of "sub-text".
inline TracerAction parse_tracer_action(std::string_view s) {
  if (s == "sub-heading") return TracerAction::kSubHeading;
  if (s == "sub-text" || s == "sub-paragraph") return TracerAction::kSubText;
  if (s == "reduce") return TracerAction::kReduce;
  if (s == "concat") return TracerAction::kConcat;
  throw MalformedAction("not a tracer action: \"" + std::string(s) + "\"");
}

inline bool consumes_segment(TracerAction a) { return a != TracerAction::kReduce; }

struct TracerState {
  LogicalTree tree;
  std::vector<NodeId> stack{NodeId{0}};
  std::optional<TextSegment> pending;
};

inline ContextStack as_context_stack(const TracerState& s) {
  std::vector<StackEntry> entries;
  for (NodeId id : s.stack) {
    const Node& n = s.tree[id];
    entries.push_back({id, n.kind, n.level});
  }
  return ContextStack(std::move(entries));
}

/// Root-only stack: attach only. Paragraph on top: pop or extend it (a
/// paragraph never gets children). Otherwise any action, except that a
/// heading at the maximum level cannot take a sub-heading.
inline std::vector<TracerAction> tracer_allowed_actions(const TracerState& s) {
  if (s.stack.size() == 1) return {TracerAction::kSubHeading, TracerAction::kSubText};
  const Node& top = s.tree[s.stack.back()];
  if (top.is_paragraph()) return {TracerAction::kReduce, TracerAction::kConcat};
  if (top.level >= kMaxHeadingLevel) {
    return {TracerAction::kSubText, TracerAction::kReduce, TracerAction::kConcat};
  }
  return {std::begin(kAllActions), std::end(kAllActions)};
}

inline bool is_allowed(const TracerState& s, TracerAction a) {
  const auto allowed = tracer_allowed_actions(s);
  return std::find(allowed.begin(), allowed.end(), a) != allowed.end();
}

inline void tracer_step_in_place(TracerState& s, TracerAction a) {
  if (!s.pending) throw InvalidTransition("no pending segment");
  if (!is_allowed(s, a)) {
    throw InvalidTransition(std::string(to_string(a)) + " not allowed here");
  }
  switch (a) {
    case TracerAction::kSubHeading:
      s.stack.push_back(s.tree.add_heading(s.stack.back(), s.pending->text));
      s.pending.reset();
      break;
    case TracerAction::kSubText:
      s.stack.push_back(s.tree.add_paragraph(s.stack.back(), s.pending->text));
      s.pending.reset();
      break;
    case TracerAction::kReduce:
      s.stack.pop_back();
      break;
    case TracerAction::kConcat:
      s.tree.append_content(s.stack.back(), s.pending->text);
      s.pending.reset();
      break;
  }
}

inline TracerState tracer_step(TracerState s, TracerAction a) {
  tracer_step_in_place(s, a);
  return s;
}

/// Gold transition sequence for a tree: Reduce until the stack top is the
/// next node's parent, attach it, then Concat its remaining content lines.
inline std::vector<TracerAction> tracer_gold_actions(const LogicalTree& tree) {
  tree.validate();
  std::vector<TracerAction> out;
  std::vector<NodeId> stack{tree.root()};
  for (NodeId id : tree.preorder()) {
    if (id == tree.root()) continue;
    const Node& n = tree[id];
    while (stack.back() != *n.parent) {
      out.push_back(TracerAction::kReduce);
      stack.pop_back();
    }
    out.push_back(n.is_heading() ? TracerAction::kSubHeading : TracerAction::kSubText);
    stack.push_back(id);
    for (std::size_t i = 1; i < n.content.size(); ++i) {
      out.push_back(TracerAction::kConcat);
    }
  }
  return out;
}

struct TracerRequest {
  std::string prompt;
  std::vector<TracerAction> allowed;
  std::size_t transition = 0;  // 0-based index within the document
};

class TracerPredictor {
 public:
  virtual ~TracerPredictor() = default;
  /// Returns the canonical name of one action.
  virtual std::string predict(const TracerRequest& request) = 0;
};

class TracerOraclePredictor final : public TracerPredictor {
 public:
  explicit TracerOraclePredictor(std::vector<TracerAction> gold)
      : gold_(std::move(gold)) {}

  std::string predict(const TracerRequest& request) override {
    if (request.transition >= gold_.size()) {
      throw CursorExhausted("tracer oracle asked past the gold sequence");
    }
    return to_string(gold_[request.transition]);
  }

 private:
  std::vector<TracerAction> gold_;
};

struct TracerConfig {
  bool global_context = false;  // render the whole stack, not just its top
  StructuringConfig render;     // separator and truncation for rendering
};

/// Pairwise prompt: the stack-top node and the pending segment.
inline std::string render_pairwise_prompt(const TracerState& s,
                                          const StructuringConfig& render) {
  std::string out = "### PARENT:\n";
  if (s.stack.size() > 1) {
    const Node& top = s.tree[s.stack.back()];
    out += top.is_heading() ? std::string(static_cast<std::size_t>(top.level), '+')
                            : std::string("*");
    out += ' ';
    out += stack_entry_text(s.tree, s.stack.back(), render);
    out += '\n';
  }
  out += "\n### SEGMENT:\n";
  out += s.pending ? s.pending->text : std::string();
  out += "\n\n### ACTION:\n";
  return out;
}

inline std::string render_tracer_prompt(const TracerState& s, const TracerConfig& c) {
  if (!c.global_context) return render_pairwise_prompt(s, c.render);
  const std::vector<TextSegment> window{*s.pending};
  return render_prompt(as_context_stack(s), s.tree, window, c.render);
}

struct TracerReport {
  std::string doc_id;
  std::size_t transitions = 0;
  std::size_t reduces = 0;
  double wall_ms = 0.0;
};

inline nlohmann::json to_json(const TracerReport& r) {
  return {{"doc_id", r.doc_id},
          {"transitions", r.transitions},
          {"reduces", r.reduces},
          {"wall_ms", r.wall_ms}};
}

struct TracerResult {
  LogicalTree tree;
  TracerReport report;
};

/// Queries the predictor until each segment is consumed. A predicted action
/// outside the allowed set is a ConstraintViolation; more than
/// (kMaxHeadingLevel + 2) * N transitions is a LivelockError.
inline TracerResult tracer_structure_document(std::span<const TextSegment> segments,
                                              TracerPredictor& predictor,
                                              const TracerConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  const std::size_t limit =
      static_cast<std::size_t>(kMaxHeadingLevel + 2) * segments.size();
  TracerState state;
  TracerReport report;
  if (!segments.empty()) report.doc_id = segments.front().doc_id;

  for (const auto& seg : segments) {
    state.pending = seg;
    while (state.pending) {
      if (report.transitions >= limit) {
        throw LivelockError("tracer exceeded " + std::to_string(limit) +
                            " transitions");
      }
      TracerRequest request{render_tracer_prompt(state, config),
                            tracer_allowed_actions(state), report.transitions};
      const TracerAction a = parse_tracer_action(predictor.predict(request));
      if (!is_allowed(state, a)) {
        throw ConstraintViolation(report.transitions,
                                  std::string(to_string(a)) + " not allowed");
      }
      tracer_step_in_place(state, a);
      ++report.transitions;
      if (a == TracerAction::kReduce) ++report.reduces;
    }
  }
  report.wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - started)
                       .count();
  return {std::move(state.tree), std::move(report)};
}

}  // namespace docstruct::tracer
