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

#include "docstruct/action.hpp"
#include "docstruct/config.hpp"
#include "docstruct/constraints.hpp"
#include "docstruct/datagen.hpp"
#include "docstruct/errors.hpp"
#include "docstruct/eval.hpp"
#include "docstruct/jsonl.hpp"
#include "docstruct/predictor.hpp"
#include "docstruct/predictors.hpp"
#include "docstruct/prompt.hpp"
#include "docstruct/structure.hpp"
#include "docstruct/tracer.hpp"
#include "docstruct/transitions.hpp"
#include "docstruct/tree.hpp"
