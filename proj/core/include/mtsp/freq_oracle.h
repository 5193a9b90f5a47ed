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

#ifndef MTSP_FREQ_ORACLE_H_
#define MTSP_FREQ_ORACLE_H_

#include <cstdint>
#include <random>
#include <vector>

#include "mtsp/domain.h"

namespace mtsp {

// Unary-encoding frequency oracle. Each user encodes their value as a one-hot
// bit vector; the support bit is kept with probability p = 1/2 and every
// other bit is set with probability q = 1/(e^eps + 1). This (p, q) pair
// satisfies eps-LDP and minimizes estimator variance among unary encodings.
struct OueParams {
  double epsilon = 0.0;
  std::int64_t domain_size = 0;

  double p() const { return 0.5; }
  double q() const;

  // Throws std::invalid_argument unless epsilon > 0 (finite) and
  // domain_size >= 1.
  void validate() const;
};

// Sum of reported bit vectors over n users.
struct AggregateReport {
  std::vector<std::int64_t> bit_sums;
  std::int64_t n = 0;
};

// Unbiased per-value frequency estimates. Never clamped here: downstream
// consumers (dissimilarity correction, tree aggregation, smoothing) rely on
// unbiasedness, and clamping is a presentation-time choice.
struct FrequencyEstimate {
  std::vector<double> freq;
  std::int64_t n = 0;
  bool empty = false;  // n == 0: all-zero placeholder, not an estimate
};

enum class PerturbPath {
  kBinomial,  // aggregate bit sums drawn directly from binomials (default)
  kPerUser,   // materialize every user's perturbed bit vector
};

// One user's perturbed bit vector. value_index may be -1, meaning the user
// holds no value in this domain (all bits behave as non-support bits).
std::vector<std::uint8_t> oue_perturb(std::int64_t value_index,
                                      const OueParams& params,
                                      std::mt19937_64& rng);

// Frequency estimates from aggregated bit sums:
//   f_j = (y_j - n q) / (n (p - q)).
// n == 0 yields the flagged empty estimate; it never divides by zero.
FrequencyEstimate oue_aggregate(const AggregateReport& report,
                                const OueParams& params);

// Estimator variance for a rare value: 4 e^eps / (n (e^eps - 1)^2).
// Throws std::invalid_argument when epsilon <= 0 or n <= 0.
double oue_variance(double epsilon, std::int64_t n);

// Draws the aggregate report for n users whose true per-value counts are
// `true_counts` (sum <= n; the remainder holds no value). The binomial path
// samples y_j ~ Bin(c_j, p) + Bin(n - c_j, q) per value, which is
// distribution-identical to summing per-user vectors but costs O(d) instead
// of O(n d). The per-user path is kept for equivalence testing.
AggregateReport oue_simulate_aggregate(const std::vector<std::int64_t>& true_counts,
                                       std::int64_t n, const OueParams& params,
                                       std::mt19937_64& rng,
                                       PerturbPath path = PerturbPath::kBinomial);

// Convenience overload for a true-counts histogram (n = sum of counts).
AggregateReport oue_simulate_aggregate(const Histogram& truth,
                                       const OueParams& params,
                                       std::mt19937_64& rng,
                                       PerturbPath path = PerturbPath::kBinomial);

}  // namespace mtsp

#endif  // MTSP_FREQ_ORACLE_H_
