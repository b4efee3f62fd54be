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

#include <cstdint>
#include <string>
#include <string_view>

#include "docstruct/errors.hpp"

namespace docstruct {

/// Deepest heading level the action grammar accepts.
inline constexpr int kMaxHeadingLevel = 64;

/// One structuring action. Exactly one action is produced per text segment.
struct Action {
  enum class Kind : std::uint8_t { kNewHeading, kNewParagraph, kConcatenation };

  Kind kind = Kind::kNewParagraph;
  int level = 0;  // NewHeading only; 1..kMaxHeadingLevel.

  static Action heading(int level) {
    if (level < 1 || level > kMaxHeadingLevel) {
      throw MalformedAction("heading level out of range: " +
                            std::to_string(level));
    }
    return Action{Kind::kNewHeading, level};
  }
  static Action paragraph() { return Action{Kind::kNewParagraph, 0}; }
  static Action concatenation() { return Action{Kind::kConcatenation, 0}; }

  bool is_heading() const { return kind == Kind::kNewHeading; }
  bool is_paragraph() const { return kind == Kind::kNewParagraph; }
  bool is_concatenation() const { return kind == Kind::kConcatenation; }

  friend bool operator==(const Action&, const Action&) = default;
};

/// "+" repeated `level` times, "*" or "=".
inline std::string to_string(const Action& action) {
  switch (action.kind) {
    case Action::Kind::kNewHeading:
      return std::string(static_cast<std::size_t>(action.level), '+');
    case Action::Kind::kNewParagraph:
      return "*";
    case Action::Kind::kConcatenation:
      return "=";
  }
  return {};
}

inline Action parse_action(std::string_view text) {
  if (text == "*") return Action::paragraph();
  if (text == "=") return Action::concatenation();
  if (!text.empty() && text.find_first_not_of('+') == std::string_view::npos) {
    if (text.size() > static_cast<std::size_t>(kMaxHeadingLevel)) {
      throw MalformedAction("heading deeper than " +
                            std::to_string(kMaxHeadingLevel) + " levels");
    }
    return Action::heading(static_cast<int>(text.size()));
  }
  throw MalformedAction("not an action: \"" + std::string(text) + "\"");
}

}  // namespace docstruct
