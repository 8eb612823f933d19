// Copyright 2026 The JRR Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef JRR_STATUS_MACROS_H_
#define JRR_STATUS_MACROS_H_

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define JRR_STATUS_CONCAT_INNER_(x, y) x##y
#define JRR_STATUS_CONCAT_(x, y) JRR_STATUS_CONCAT_INNER_(x, y)

// Returns early from the enclosing function if `expr` is not OK.
#define JRR_RETURN_IF_ERROR(expr)            \
  do {                                       \
    const absl::Status _jrr_status = (expr); \
    if (!_jrr_status.ok()) return _jrr_status; \
  } while (0)

#define JRR_ASSIGN_OR_RETURN_IMPL_(statusor, lhs, rexpr) \
  auto statusor = (rexpr);                               \
  if (!statusor.ok()) return statusor.status();          \
  lhs = std::move(statusor).value()

// Evaluates `rexpr` (a StatusOr) and either assigns the value to `lhs` or
// returns the error status.
#define JRR_ASSIGN_OR_RETURN(lhs, rexpr) \
  JRR_ASSIGN_OR_RETURN_IMPL_(            \
      JRR_STATUS_CONCAT_(_jrr_statusor_, __LINE__), lhs, rexpr)

#endif  // JRR_STATUS_MACROS_H_
