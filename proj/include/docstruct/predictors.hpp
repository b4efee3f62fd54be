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
#include <cctype>
#include <cstddef>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "docstruct/action.hpp"
#include "docstruct/errors.hpp"
#include "docstruct/predictor.hpp"
#include "docstruct/prompt.hpp"
#include "docstruct/tree.hpp"

namespace docstruct {

/// Replays a gold action sequence. The slice for a request starts at
/// `step * output_window`, so the response depends only on the request.
class OraclePredictor final : public ActionPredictor {
 public:
  OraclePredictor(std::vector<Action> gold, int output_window)
      : gold_(std::move(gold)),
        output_window_(static_cast<std::size_t>(output_window)) {
    if (output_window < 1) throw Error("output window must be >= 1");
  }

  PredictionResponse predict(const PredictionRequest& request) override {
    const std::size_t cursor = request.step * output_window_;
    if (cursor >= gold_.size() ||
        request.expected_actions > gold_.size() - cursor) {
      throw CursorExhausted("oracle asked for actions past the gold sequence");
    }
    const std::span<const Action> slice(gold_.data() + cursor,
                                        request.expected_actions);
    return {format_action_block(slice), 0.0};
  }

 private:
  std::vector<Action> gold_;
  std::size_t output_window_;
};

/// How a numbering pattern maps to a heading level.
enum class LevelRule {
  kFixed,        // always `level`
  kDottedDepth,  // number of dot-separated numerals in the match
  kNested,       // level of the closest stack heading matching the same
                 // pattern, else one below the deepest heading
};

struct HeadingPattern {
  std::string name;
  std::regex regex;  // matched at the start of the segment
  LevelRule rule = LevelRule::kFixed;
  int level = 1;
};

inline std::vector<HeadingPattern> default_heading_patterns() {
  return {
      {"chapter", std::regex(R"((Chapter|CHAPTER|Part|PART)\s+[0-9IVXLC]+\b)"),
       LevelRule::kFixed, 1},
      {"dotted", std::regex(R"([0-9]+(\.[0-9]+)*\.?(\s|$))"),
       LevelRule::kDottedDepth, 0},
      {"parenthesized", std::regex(R"(\(([0-9]+|[a-z]|[ivx]+)\)\s)"),
       LevelRule::kNested, 0},
  };
}

/// Characters that end a sentence in English and CJK text.
inline const std::vector<std::string>& terminal_punctuation() {
  static const std::vector<std::string> marks{".", "!", "?", ":", ";",
                                              "\xE3\x80\x82",   // 。
                                              "\xEF\xBC\x81",   // ！
                                              "\xEF\xBC\x9F"};  // ？
  return marks;
}

inline bool ends_sentence(std::string_view text) {
  const auto last = text.find_last_not_of(" \t");
  if (last == std::string_view::npos) return false;
  text = text.substr(0, last + 1);
  return std::any_of(terminal_punctuation().begin(), terminal_punctuation().end(),
                     [&](const std::string& m) { return text.ends_with(m); });
}

/// Rule-based predictor driven by numbering patterns and line-final
/// punctuation. It re-parses the rendered prompt, so it sees exactly what a
/// generative model would.
class HeuristicPredictor final : public ActionPredictor {
 public:
  HeuristicPredictor() : patterns_(default_heading_patterns()) {}
  explicit HeuristicPredictor(std::vector<HeadingPattern> patterns)
      : patterns_(std::move(patterns)) {}

  PredictionResponse predict(const PredictionRequest& request) override {
    const ParsedPrompt prompt = parse_prompt(request.prompt);

    // Simulated stack: (kind, level, text, pattern index) per entry.
    struct Entry {
      NodeKind kind;
      int level;
      std::string text;
      int pattern;
    };
    std::vector<Entry> stack;
    for (const auto& line : prompt.stack) {
      stack.push_back({line.kind, line.level, line.text, match(line.text).first});
    }
    auto max_level = [&] {
      for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
        if (it->kind == NodeKind::kHeading) return it->level;
      }
      return 0;
    };

    std::vector<Action> actions;
    for (const auto& seg : prompt.segments) {
      const auto [pattern, raw_level] = match(seg);
      if (pattern >= 0) {
        int level = raw_level;
        if (patterns_[static_cast<std::size_t>(pattern)].rule == LevelRule::kNested) {
          level = max_level() + 1;
          for (const auto& e : stack) {
            if (e.kind == NodeKind::kHeading && e.pattern == pattern) {
              level = e.level;
              break;
            }
          }
        }
        level = std::clamp(level, 1, max_level() + 1);
        actions.push_back(Action::heading(level));
        while (!stack.empty() && !(stack.back().kind == NodeKind::kHeading &&
                                   stack.back().level < level)) {
          stack.pop_back();
        }
        stack.push_back({NodeKind::kHeading, level, seg, pattern});
      } else if (!stack.empty() && stack.back().kind == NodeKind::kParagraph &&
                 !ends_sentence(stack.back().text)) {
        actions.push_back(Action::concatenation());
        stack.back().text = seg;  // the line that now ends the paragraph
      } else {
        actions.push_back(Action::paragraph());
        if (!stack.empty() && stack.back().kind == NodeKind::kParagraph) {
          stack.pop_back();
        }
        stack.push_back({NodeKind::kParagraph, 0, seg, -1});
      }
    }
    return {format_action_block(actions), 0.0};
  }

 private:
  /// Index of the first matching pattern and its raw level, or -1.
  std::pair<int, int> match(const std::string& text) const {
    for (std::size_t i = 0; i < patterns_.size(); ++i) {
      std::smatch m;
      if (!std::regex_search(text, m, patterns_[i].regex,
                             std::regex_constants::match_continuous)) {
        continue;
      }
      switch (patterns_[i].rule) {
        case LevelRule::kFixed:
          return {static_cast<int>(i), patterns_[i].level};
        case LevelRule::kDottedDepth: {
          const std::string head = m.str(0);
          int depth = 1;
          for (std::size_t k = 0; k + 1 < head.size(); ++k) {
            if (head[k] == '.' && std::isdigit(static_cast<unsigned char>(head[k + 1]))) {
              ++depth;
            }
          }
          return {static_cast<int>(i), std::min(depth, kMaxHeadingLevel)};
        }
        case LevelRule::kNested:
          return {static_cast<int>(i), 0};
      }
    }
    return {-1, 0};
  }

  std::vector<HeadingPattern> patterns_;
};

}  // namespace docstruct
