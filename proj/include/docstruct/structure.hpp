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
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "docstruct/config.hpp"
#include "docstruct/constraints.hpp"
#include "docstruct/errors.hpp"
#include "docstruct/predictor.hpp"
#include "docstruct/prompt.hpp"
#include "docstruct/transitions.hpp"
#include "docstruct/tree.hpp"

namespace docstruct {

struct RunReport {
  std::string doc_id;
  std::size_t steps = 0;
  std::size_t committed_actions = 0;
  std::vector<std::size_t> skipped_segment_indices;
  double wall_ms = 0.0;
};

inline nlohmann::json to_json(const RunReport& r) {
  return {{"doc_id", r.doc_id},
          {"steps", r.steps},
          {"skipped_segment_indices", r.skipped_segment_indices},
          {"wall_ms", r.wall_ms}};
}

struct StructureResult {
  LogicalTree tree;
  RunReport report;
};

/// Called after every committed action with the post-action state.
using CommitObserver = std::function<void(const EngineState&, const Action&)>;

inline std::size_t step_count(std::size_t segments, int output_window) {
  const auto w = static_cast<std::size_t>(output_window);
  return (segments + w - 1) / w;
}

/// Windowed structuring loop. Each step shows the predictor up to w_I
/// segments starting at step * w_O and commits the first w_O actions; the
/// rest are look-ahead and are predicted again next step. A step whose
/// output fails to parse into the requested count (or violates strict/mask
/// constraints) is skipped: its committed segments are recorded and the
/// stack is left as it was.
inline StructureResult structure_document(std::span<const TextSegment> segments,
                                          ActionPredictor& predictor,
                                          const StructuringConfig& config,
                                          const ConstraintPolicy& constraints,
                                          const CommitObserver& observer = {}) {
  config.validate();
  const auto started = std::chrono::steady_clock::now();
  const std::size_t n = segments.size();
  const auto wi = static_cast<std::size_t>(config.input_window);
  const auto wo = static_cast<std::size_t>(config.output_window);

  EngineState state;
  RunReport report;
  if (n > 0) report.doc_id = segments.front().doc_id;

  for (std::size_t step = 0; step * wo < n; ++step) {
    const std::size_t begin = step * wo;
    const std::size_t end = std::min(begin + wi, n);
    const std::size_t commit = std::min(wo, n - begin);
    const auto window = segments.subspan(begin, end - begin);
    ++report.steps;

    DecoderState start;
    start.requested_actions = static_cast<int>(window.size());
    start.stack_is_root_only = state.stack.root_only();
    start.current_max_level = state.stack.max_heading_level();

    PredictionRequest request;
    request.prompt = render_prompt(state.stack, state.tree, window, config);
    request.expected_actions = window.size();
    request.step = step;
    request.allowed_first_tokens = allowed_next_tokens(start, constraints.profile);
    request.profile_name = constraints.profile.name;

    PredictionResponse response;
    try {
      response = predictor.predict(request);
    } catch (const PredictorError& e) {
      throw PredictorError("step " + std::to_string(step) + ": " + e.what(),
                           e.status(), e.attempts());
    }

    std::vector<Action> actions;
    bool failed = false;
    if (constraints.mode == ConstraintMode::kMask &&
        first_masked_token(response.action_lines, constraints.profile,
                           static_cast<int>(window.size()),
                           state.stack.root_only())) {
      failed = true;
    }
    if (!failed) {
      try {
        actions = parse_action_block(response.action_lines, window.size());
        actions = validate_and_repair(std::move(actions), state.stack, constraints);
      } catch (const MismatchError&) {
        failed = true;
      } catch (const ConstraintViolation&) {
        failed = true;
      }
    }
    if (failed) {
      for (std::size_t j = 0; j < commit; ++j) {
        state.skipped.push_back(segments[begin + j].index);
      }
      continue;
    }
    for (std::size_t j = 0; j < commit; ++j) {
      apply_action_in_place(state, actions[j], segments[begin + j]);
      ++report.committed_actions;
      if (observer) observer(state, actions[j]);
    }
  }

  report.skipped_segment_indices = state.skipped;
  report.wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - started)
                       .count();
  return {std::move(state.tree), std::move(report)};
}

}  // namespace docstruct
