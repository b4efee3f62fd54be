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
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "docstruct/action.hpp"
#include "docstruct/errors.hpp"
#include "docstruct/transitions.hpp"
#include "docstruct/tree.hpp"

namespace docstruct {

// Decoder vocabulary. Plus runs are tokenizer-specific; see TokenizerProfile.
inline constexpr std::string_view kLineBreakToken = "\n";
inline constexpr std::string_view kParagraphToken = "*";
inline constexpr std::string_view kConcatToken = "=";
inline constexpr std::string_view kEndToken = "</s>";

/// The plus-run tokens a tokenizer can emit atomically.
struct TokenizerProfile {
  std::string name;
  std::vector<std::string> plus_tokens;

  void validate() const {
    if (plus_tokens.empty() ||
        std::find(plus_tokens.begin(), plus_tokens.end(), "+") ==
            plus_tokens.end()) {
      throw Error("tokenizer profile '" + name + "' must contain \"+\"");
    }
    for (const auto& t : plus_tokens) {
      if (t.empty() || t.find_first_not_of('+') != std::string::npos) {
        throw Error("tokenizer profile '" + name +
                    "' has a non-plus token: \"" + t + "\"");
      }
    }
  }

  bool is_plus_token(std::string_view token) const {
    return std::find(plus_tokens.begin(), plus_tokens.end(), token) !=
           plus_tokens.end();
  }

  /// Every token the decoder may ever emit under this profile.
  std::vector<std::string> vocabulary() const {
    std::vector<std::string> v{std::string(kLineBreakToken)};
    v.insert(v.end(), plus_tokens.begin(), plus_tokens.end());
    v.emplace_back(kParagraphToken);
    v.emplace_back(kConcatToken);
    v.emplace_back(kEndToken);
    return v;
  }
};

/// Tokenizer with "+", "++" and "++++" as single tokens.
inline TokenizerProfile gpt2_profile() {
  return {"gpt2-medium", {"+", "++", "++++"}};
}

/// Tokenizer with "+" and "++" as single tokens.
inline TokenizerProfile baichuan_profile() {
  return {"baichuan-7b", {"+", "++"}};
}

inline std::optional<TokenizerProfile> builtin_profile(std::string_view name) {
  if (name == "gpt2-medium") return gpt2_profile();
  if (name == "baichuan-7b") return baichuan_profile();
  return std::nullopt;
}

struct DecoderState {
  std::optional<std::string> last_token;  // nullopt at start of output
  int actions_emitted = 0;                // completed action lines
  int requested_actions = 1;              // window size of the step
  bool stack_is_root_only = true;
  int current_max_level = 0;
};

/// Legal next tokens. Rows follow the published last-token tables; on top of
/// that `=` is banned as the first token on a root-only stack and `</s>` is
/// only legal after a line break once the whole window has been emitted.
inline std::set<std::string> allowed_next_tokens(const DecoderState& state,
                                                 const TokenizerProfile& profile) {
  std::set<std::string> out;
  const auto& last = state.last_token;
  const bool line_start = !last || *last == kLineBreakToken;
  if (line_start) {
    out.insert(profile.plus_tokens.begin(), profile.plus_tokens.end());
    out.emplace(kParagraphToken);
    if (!(!last && state.stack_is_root_only)) out.emplace(kConcatToken);
    if (last && state.actions_emitted == state.requested_actions) {
      out.emplace(kEndToken);
    }
  } else if (profile.is_plus_token(*last)) {
    out.emplace(kLineBreakToken);
    out.insert(profile.plus_tokens.begin(), profile.plus_tokens.end());
  } else if (*last == kParagraphToken || *last == kConcatToken) {
    out.emplace(kLineBreakToken);
  }
  return out;
}

/// Advances the decoder after emitting `token`.
inline DecoderState advance_decoder(DecoderState state, const std::string& token) {
  if (token == kLineBreakToken && state.last_token &&
      *state.last_token != kLineBreakToken) {
    ++state.actions_emitted;
  }
  state.last_token = token;
  return state;
}

/// Greedy longest-match tokenization of generated action text. Returns
/// nullopt if the text contains anything outside the vocabulary.
inline std::optional<std::vector<std::string>> tokenize_actions(
    std::string_view text, const TokenizerProfile& profile) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text.substr(i, kEndToken.size()) == kEndToken) {
      tokens.emplace_back(kEndToken);
      i += kEndToken.size();
      continue;
    }
    const char c = text[i];
    if (c == '\n' || c == '*' || c == '=') {
      tokens.emplace_back(1, c);
      ++i;
      continue;
    }
    if (c != '+') return std::nullopt;
    std::size_t best = 0;
    for (const auto& t : profile.plus_tokens) {
      if (t.size() > best && text.substr(i, t.size()) == t) best = t.size();
    }
    if (best == 0) return std::nullopt;
    tokens.emplace_back(text.substr(i, best));
    i += best;
  }
  return tokens;
}

/// Replays `text` through the token automaton. Returns the index of the first
/// disallowed token, or nullopt when every token was legal. A missing final
/// line break is tolerated.
inline std::optional<std::size_t> first_masked_token(
    std::string_view text, const TokenizerProfile& profile, int requested,
    bool stack_is_root_only) {
  const auto tokens = tokenize_actions(text, profile);
  if (!tokens) return std::size_t{0};
  DecoderState state;
  state.requested_actions = requested;
  state.stack_is_root_only = stack_is_root_only;
  for (std::size_t i = 0; i < tokens->size(); ++i) {
    const auto allowed = allowed_next_tokens(state, profile);
    if (!allowed.contains((*tokens)[i])) return i;
    if ((*tokens)[i] == kEndToken) return std::nullopt;
    state = advance_decoder(state, (*tokens)[i]);
  }
  return std::nullopt;
}

/// Caps a heading at one level below the deepest heading on the stack.
inline Action clamp_heading_level(const Action& action,
                                  const ContextStack& stack) {
  if (!action.is_heading()) return action;
  const int limit = stack.max_heading_level() + 1;
  return action.level <= limit ? action : Action::heading(limit);
}

enum class ConstraintMode { kMask, kRepair, kStrict };

inline const char* to_string(ConstraintMode mode) {
  switch (mode) {
    case ConstraintMode::kMask:
      return "mask";
    case ConstraintMode::kRepair:
      return "repair";
    case ConstraintMode::kStrict:
      return "strict";
  }
  return "?";
}

inline std::optional<ConstraintMode> parse_constraint_mode(std::string_view s) {
  if (s == "mask") return ConstraintMode::kMask;
  if (s == "repair") return ConstraintMode::kRepair;
  if (s == "strict") return ConstraintMode::kStrict;
  return std::nullopt;
}

struct ConstraintPolicy {
  ConstraintMode mode = ConstraintMode::kRepair;
  TokenizerProfile profile = baichuan_profile();
};

namespace testing_hooks {
/// Disables heading clamping in validate_and_repair. Only for negative
/// controls in property checks.
inline std::atomic<bool>& clamp_disabled() {
  static std::atomic<bool> disabled{false};
  return disabled;
}
}  // namespace testing_hooks

/// Sequence-level enforcement against the stack the actions will run on.
/// Repair rewrites root-level `=` to `*` and clamps headings step by step;
/// strict throws on the first violation; mask rejects root-level `=` (the
/// token mask should have banned it) and clamps headings.
inline std::vector<Action> validate_and_repair(std::vector<Action> actions,
                                               ContextStack stack,
                                               const ConstraintPolicy& policy) {
  std::uint32_t next_id = 1u << 30;  // placeholder ids for simulated nodes
  for (std::size_t i = 0; i < actions.size(); ++i) {
    Action& a = actions[i];
    if (a.is_concatenation() && stack.root_only()) {
      if (policy.mode != ConstraintMode::kRepair) {
        throw ConstraintViolation(i, "concatenation on a root-only stack");
      }
      a = Action::paragraph();
    }
    if (a.is_heading() && a.level > stack.max_heading_level() + 1) {
      if (policy.mode == ConstraintMode::kStrict) {
        throw ConstraintViolation(i, "heading level " + std::to_string(a.level) +
                                         " skips past " +
                                         std::to_string(stack.max_heading_level()));
      }
      if (!testing_hooks::clamp_disabled()) a = clamp_heading_level(a, stack);
    }
    if (a.is_concatenation()) continue;
    if (a.is_heading() && a.level > stack.max_heading_level() + 1) {
      // Only reachable with clamping disabled; the caller will hit
      // InvalidTransition when executing it.
      continue;
    }
    stack = update_stack(std::move(stack), a, NodeId{next_id++});
  }
  return actions;
}

}  // namespace docstruct
