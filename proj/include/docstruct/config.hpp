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
#include <string_view>

#include "docstruct/errors.hpp"

namespace docstruct {

struct StructuringConfig {
  int input_window = 1;   // segments shown to the predictor per step
  int output_window = 1;  // actions committed per step
  std::string join_separator = " ";
  std::optional<std::size_t> stack_entry_truncation;  // characters

  void validate() const {
    if (input_window < 1) throw Error("input window must be >= 1");
    if (output_window < 1) throw Error("output window must be >= 1");
    if (output_window > input_window) {
      throw Error("output window must not exceed input window");
    }
  }
};

inline StructuringConfig window_config(int input_window, int output_window) {
  StructuringConfig c;
  c.input_window = input_window;
  c.output_window = output_window;
  return c;
}

/// Keeps the first `max_chars` UTF-8 code points of `text`.
inline std::string truncate_utf8(std::string_view text, std::size_t max_chars) {
  std::size_t chars = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto byte = static_cast<unsigned char>(text[i]);
    if ((byte & 0xC0) != 0x80) {
      if (chars == max_chars) return std::string(text.substr(0, i));
      ++chars;
    }
  }
  return std::string(text);
}

}  // namespace docstruct
