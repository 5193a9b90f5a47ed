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

#ifndef MTSP_QUERY_H_
#define MTSP_QUERY_H_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mtsp/tree.h"

namespace mtsp {

// Answering queries is pure post-processing: this layer sees only released
// trees (never raw batches or budgets), so no query ever costs privacy.

class QueryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Contiguous run of releases, one per timestamp starting at first_t.
class ReleaseSeries {
 public:
  ReleaseSeries() = default;

  void append(PrivateTree release);  // t must be last_t() + 1 (or any first)
  bool empty() const { return releases_.empty(); }
  std::int64_t first_t() const;
  std::int64_t last_t() const;
  bool contains(std::int64_t t) const;
  const PrivateTree& at(std::int64_t t) const;  // throws QueryError
  const ValueDomain& domain() const;
  std::int64_t size() const { return static_cast<std::int64_t>(releases_.size()); }

 private:
  std::vector<PrivateTree> releases_;
};

// Estimated count of value v accumulated over the delta most recent
// timestamps ending at t: sum of leaf frequency times batch size per
// timestamp. clamp_output truncates the final answer at zero (presentation
// only; sums always use the signed estimates).
double counting_query(const ReleaseSeries& series, std::int64_t v, int delta,
                      std::int64_t t, bool clamp_output = false);

// Same for the value range [v1, v2], answered through the minimum node cover
// evaluated on every involved release.
double range_query(const ReleaseSeries& series, std::int64_t v1,
                   std::int64_t v2, int delta, std::int64_t t,
                   bool clamp_output = false);

// A monitoring task: watch a base statistic (value count or range count over
// a delta-sized window) and signal when it rose by more than `threshold`
// relative to `lag` timestamps ago.
struct MonitorSpec {
  std::optional<std::int64_t> value;                          // exactly one of
  std::optional<std::pair<std::int64_t, std::int64_t>> range;  // these two
  int delta = 1;
  int lag = 1;
  double threshold = 0.0;
};

struct MonitorResult {
  bool ready = false;  // both comparison points covered by the series
  double statistic = 0.0;
  int signal = 0;
};

// Never conflates "not ready" with a zero statistic: ready is reported
// separately and 0/NaN are not used as sentinels.
MonitorResult monitor(const ReleaseSeries& series, const MonitorSpec& spec,
                      std::int64_t t);

}  // namespace mtsp

#endif  // MTSP_QUERY_H_
