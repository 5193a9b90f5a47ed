// Copyright 2026 The mtsp-ldp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MTSP_PIPELINE_H_
#define MTSP_PIPELINE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "mtsp/adaptive.h"
#include "mtsp/budget.h"
#include "mtsp/dissimilarity.h"
#include "mtsp/domain.h"
#include "mtsp/query.h"

namespace mtsp {

enum class Method { kMtsp, kLbu, kLsp, kLbd, kLba };
const char* to_string(Method m);
Method method_from_string(const std::string& s);

struct MethodOptions {
  // Replace every oracle with its exact counterpart (variance 0); budgets are
  // still ledgered so the audit machinery stays active.
  bool noiseless = false;
  // Force the reference (full enumeration) allocator instead of the
  // early-stopping one.
  bool exact_oba = false;
  // Route approximation timestamps through the smoothing module instead of
  // republishing the previous release verbatim (ablation toggle).
  bool smooth_approximations = false;
  PruningPolicy::Mode prune_mode = PruningPolicy::Mode::kDerived;
  double fixed_prune_threshold = 0.0;
  // Fraction of the window's untouched publication budget a dissimilarity
  // baseline publication consumes.
  double lbd_decay = 0.5;
  // Cap on quanta one absorption-baseline publication may spend (own quantum
  // included); 0 means bounded only by the window budget.
  std::int64_t lba_max_absorb = 0;
};

struct RunStats {
  std::int64_t warmups = 0;
  std::int64_t publications = 0;
  std::int64_t approximations = 0;
  std::vector<double> per_timestamp_seconds;
  double total_seconds = 0.0;
};

struct RunOutput {
  ReleaseSeries releases;
  BudgetLedger ledger;
  RunStats stats;
  std::vector<DissimilarityRecord> dis_records;  // empty for methods without
};

// The full streaming publisher: per-timestamp dissimilarity estimation on
// half the per-window budget, adaptive budget allocation over the trailing
// window, adaptive tree estimation and smoothing on publication timestamps,
// verbatim reuse otherwise. Timestamps 1..w warm up with full estimates at
// epsilon/w each. Throws std::invalid_argument when epsilon/(2w) quantizes
// to zero.
RunOutput run_mtsp(const StreamDataset& dataset, double epsilon, int w,
                   std::uint64_t seed, const MethodOptions& options = {});

// Dispatch by method name; see baselines.h for the four reference methods.
RunOutput run_method(Method method, const StreamDataset& dataset,
                     double epsilon, int w, std::uint64_t seed,
                     const MethodOptions& options = {});

}  // namespace mtsp

#endif  // MTSP_PIPELINE_H_
