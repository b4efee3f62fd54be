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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "docstruct/action.hpp"
#include "docstruct/config.hpp"
#include "docstruct/constraints.hpp"
#include "docstruct/errors.hpp"
#include "docstruct/tree.hpp"

namespace docstruct {

inline constexpr std::string_view kStackHeader = "### STACK:";
inline constexpr std::string_view kSegmentHeader = "### SEGMENT:";
inline constexpr std::string_view kActionHeader = "### ACTION:";

/// Raised when generated action text does not parse into the expected number
/// of actions. Carries whatever parsed before the failure.
class MismatchError : public Error {
 public:
  MismatchError(const std::string& what, std::vector<Action> parsed)
      : Error(what), parsed_(std::move(parsed)) {}

  const std::vector<Action>& parsed() const { return parsed_; }

 private:
  std::vector<Action> parsed_;
};

/// Text of one stack entry as it appears in the prompt.
inline std::string stack_entry_text(const LogicalTree& tree, NodeId id,
                                    const StructuringConfig& config) {
  std::string text = tree.joined_text(id, config.join_separator);
  if (config.stack_entry_truncation) {
    text = truncate_utf8(text, *config.stack_entry_truncation);
  }
  return text;
}

/// Renders one prediction step:
///
///   ### STACK:
///   <symbol> <text>      one line per non-root stack entry, bottom to top
///
///   ### SEGMENT:
///   <text>               one line per window segment
///
///   ### ACTION:
///
/// The model continues after the final line break.
inline std::string render_prompt(const ContextStack& stack,
                                 const LogicalTree& tree,
                                 std::span<const TextSegment> segments,
                                 const StructuringConfig& config) {
  std::string out;
  out += kStackHeader;
  out += '\n';
  for (std::size_t i = 1; i < stack.size(); ++i) {
    const auto& e = stack.entries()[i];
    if (e.kind == NodeKind::kHeading) {
      out.append(static_cast<std::size_t>(e.level), '+');
    } else {
      out += '*';
    }
    out += ' ';
    out += stack_entry_text(tree, e.id, config);
    out += '\n';
  }
  out += '\n';
  out += kSegmentHeader;
  out += '\n';
  for (const auto& seg : segments) {
    out += seg.text;
    out += '\n';
  }
  out += '\n';
  out += kActionHeader;
  out += '\n';
  return out;
}

/// One action per line, each line terminated by a line break.
inline std::string format_action_block(std::span<const Action> actions) {
  std::string out;
  for (const auto& a : actions) {
    out += to_string(a);
    out += '\n';
  }
  return out;
}

namespace detail {
inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

/// Splits `block` into lines, where every line is terminated by '\n'
/// (a final unterminated line is kept).
inline std::vector<std::string> split_lines(std::string_view block) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < block.size()) {
    const auto nl = block.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.emplace_back(block.substr(start));
      break;
    }
    lines.emplace_back(block.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}
}  // namespace detail

/// Parses the text generated after the action header. Plus runs split over
/// several tokens are already contiguous in text form, so a line is one
/// action. A trailing end-of-sequence marker is ignored.
inline std::vector<Action> parse_action_block(std::string_view text,
                                              std::size_t expected_count) {
  if (const auto eos = text.find(kEndToken); eos != std::string_view::npos) {
    text = text.substr(0, eos);
  }
  std::vector<std::string_view> lines;
  for (std::size_t start = 0; start < text.size();) {
    const auto nl = text.find('\n', start);
    const auto end = nl == std::string_view::npos ? text.size() : nl;
    lines.push_back(detail::trim(text.substr(start, end - start)));
    start = end + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();

  std::vector<Action> actions;
  for (const auto line : lines) {
    try {
      actions.push_back(parse_action(line));
    } catch (const MalformedAction& e) {
      throw MismatchError(std::string("malformed action line: ") + e.what(),
                          std::move(actions));
    }
  }
  if (actions.size() != expected_count) {
    throw MismatchError("expected " + std::to_string(expected_count) +
                            " actions, got " + std::to_string(actions.size()),
                        std::move(actions));
  }
  return actions;
}

/// A prompt re-parsed into its stack lines and segment lines.
struct ParsedPrompt {
  struct StackLine {
    NodeKind kind = NodeKind::kHeading;
    int level = 0;
    std::string text;
  };
  std::vector<StackLine> stack;
  std::vector<std::string> segments;
};

inline ParsedPrompt parse_prompt(std::string_view prompt) {
  const std::string stack_open = std::string(kStackHeader) + "\n";
  const std::string segment_open = "\n" + std::string(kSegmentHeader) + "\n";
  const std::string action_open = "\n" + std::string(kActionHeader) + "\n";
  if (!prompt.starts_with(stack_open)) throw Error("prompt lacks stack header");
  const auto seg_pos = prompt.find(segment_open, stack_open.size() - 1);
  const auto act_pos = prompt.rfind(action_open);
  if (seg_pos == std::string_view::npos || act_pos == std::string_view::npos ||
      act_pos < seg_pos) {
    throw Error("prompt lacks segment or action header");
  }

  ParsedPrompt out;
  // Both blocks end with the blank separator line; drop its '\n'.
  auto stack_block =
      prompt.substr(stack_open.size(), seg_pos + 1 - stack_open.size());
  if (!stack_block.empty()) stack_block.remove_suffix(1);
  for (const auto& line : detail::split_lines(stack_block)) {
    const auto space = line.find(' ');
    const std::string symbol = line.substr(0, space);
    ParsedPrompt::StackLine entry;
    entry.text = space == std::string::npos ? "" : line.substr(space + 1);
    if (symbol == "*") {
      entry.kind = NodeKind::kParagraph;
    } else if (!symbol.empty() &&
               symbol.find_first_not_of('+') == std::string::npos) {
      entry.level = static_cast<int>(symbol.size());
    } else {
      throw Error("bad stack line: " + line);
    }
    out.stack.push_back(std::move(entry));
  }

  const auto seg_start = seg_pos + segment_open.size();
  auto seg_block = prompt.substr(seg_start, act_pos + 1 - seg_start);
  if (!seg_block.empty()) seg_block.remove_suffix(1);
  out.segments = detail::split_lines(seg_block);
  return out;
}

}  // namespace docstruct
