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
#include <set>
#include <string>

namespace docstruct {

struct PredictionRequest {
  std::string prompt;  // rendered step template
  std::size_t expected_actions = 1;
  std::size_t step = 0;  // 0-based prediction step within the document
  // Constraint hints for backends that can mask tokens.
  std::set<std::string> allowed_first_tokens;
  std::string profile_name;
};

struct PredictionResponse {
  std::string action_lines;  // raw text generated after the action header
  double latency_ms = 0.0;
};

/// Stands in for the generative model. Implementations must be greedy:
/// equal requests yield equal responses. Transport failures are reported as
/// PredictorError.
class ActionPredictor {
 public:
  virtual ~ActionPredictor() = default;
  virtual PredictionResponse predict(const PredictionRequest& request) = 0;
};

}  // namespace docstruct
