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
#include <stdexcept>
#include <string>
#include <vector>

namespace docstruct {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MalformedAction : public Error {
 public:
  using Error::Error;
};

/// Raised when an action is applied to a stack it is not valid for. This
/// means the constraint layer was bypassed.
class InvalidTransition : public Error {
 public:
  using Error::Error;
};

class InvalidTree : public Error {
 public:
  using Error::Error;
};

class ConstraintViolation : public Error {
 public:
  ConstraintViolation(std::size_t index, std::string rule)
      : Error("constraint violation at action " + std::to_string(index) +
              ": " + rule),
        index_(index),
        rule_(std::move(rule)) {}

  std::size_t index() const { return index_; }
  const std::string& rule() const { return rule_; }

 private:
  std::size_t index_;
  std::string rule_;
};

class FormatError : public Error {
 public:
  FormatError(std::size_t line, const std::string& cause)
      : Error("line " + std::to_string(line) + ": " + cause), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class PredictorError : public Error {
 public:
  explicit PredictorError(const std::string& what, int status = 0,
                          int attempts = 0)
      : Error(what), status_(status), attempts_(attempts) {}

  int status() const { return status_; }
  int attempts() const { return attempts_; }

 private:
  int status_;
  int attempts_;
};

class CursorExhausted : public PredictorError {
 public:
  using PredictorError::PredictorError;
};

class LivelockError : public Error {
 public:
  using Error::Error;
};

class EmptyCorpus : public Error {
 public:
  using Error::Error;
};

class JoinError : public Error {
 public:
  JoinError(std::vector<std::string> missing_pred,
            std::vector<std::string> missing_gold)
      : Error(describe(missing_pred, missing_gold)),
        missing_pred_(std::move(missing_pred)),
        missing_gold_(std::move(missing_gold)) {}

  /// doc_ids present in gold but absent from the predictions.
  const std::vector<std::string>& missing_pred() const { return missing_pred_; }
  /// doc_ids present in the predictions but absent from gold.
  const std::vector<std::string>& missing_gold() const { return missing_gold_; }

 private:
  static std::string describe(const std::vector<std::string>& pred,
                              const std::vector<std::string>& gold) {
    std::string out = "unmatched doc_ids;";
    out += " missing from pred:";
    for (const auto& id : pred) out += " " + id;
    out += "; missing from gold:";
    for (const auto& id : gold) out += " " + id;
    return out;
  }

  std::vector<std::string> missing_pred_;
  std::vector<std::string> missing_gold_;
};

}  // namespace docstruct
