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

// Umbrella header.

#ifndef JRR_JRR_H_
#define JRR_JRR_H_

#include "jrr/dataset.h"
#include "jrr/estimation.h"
#include "jrr/grouping.h"
#include "jrr/harness.h"
#include "jrr/mechanisms.h"
#include "jrr/oracle.h"
#include "jrr/params.h"
#include "jrr/privacy.h"
#include "jrr/random.h"

#endif  // JRR_JRR_H_
