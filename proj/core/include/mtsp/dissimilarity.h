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

#ifndef MTSP_DISSIMILARITY_H_
#define MTSP_DISSIMILARITY_H_

#include <cstdint>

#include "mtsp/tree.h"

namespace mtsp {

// One timestamp's estimated distance between the current batch and the
// previous release. `raw` is unbiased and may be negative; `clamped` is the
// non-negative copy used for budget planning only.
struct DissimilarityRecord {
  std::int64_t t = 0;
  double raw = 0.0;
  double clamped = 0.0;
  std::int64_t budget_nano = 0;  // what the estimating oracle consumed
};

// Mean squared node-property difference between two trees over the same
// domain, all nodes included (root contributes zero between two valid trees).
double true_dissimilarity(const PrivateTree& current,
                          const PrivateTree& previous_release);

// Unbiased estimate from a privately estimated current tree:
//   (1/N) * sum_a [ (cur[a] - prev[a])^2 - var_a ]
// where var_a is the estimator variance recorded on each current node (zero
// for exact or copied nodes). The previous release is a published constant,
// so only the current tree's noise is corrected; subtracting the
// node-count-weighted mean of per-node variances keeps the estimator
// unbiased even when estimation groups were uneven.
DissimilarityRecord estimate_dissimilarity(const PrivateTree& noisy_current,
                                           const PrivateTree& previous_release,
                                           std::int64_t budget_nano = 0);

}  // namespace mtsp

#endif  // MTSP_DISSIMILARITY_H_
