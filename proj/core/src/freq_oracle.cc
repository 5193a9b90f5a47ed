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

#include "mtsp/freq_oracle.h"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mtsp {

double OueParams::q() const { return 1.0 / (std::exp(epsilon) + 1.0); }

void OueParams::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("OUE epsilon must be positive and finite");
  }
  if (domain_size < 1) {
    throw std::invalid_argument("OUE domain size must be >= 1");
  }
}

std::vector<std::uint8_t> oue_perturb(std::int64_t value_index,
                                      const OueParams& params,
                                      std::mt19937_64& rng) {
  params.validate();
  if (value_index < -1 || value_index >= params.domain_size) {
    throw std::invalid_argument("value index " + std::to_string(value_index) +
                                " outside OUE domain");
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double p = params.p();
  const double q = params.q();
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(params.domain_size));
  for (std::int64_t j = 0; j < params.domain_size; ++j) {
    const double keep = (j == value_index) ? p : q;
    bits[static_cast<std::size_t>(j)] =
        static_cast<std::uint8_t>(unit(rng) < keep);
  }
  return bits;
}

FrequencyEstimate oue_aggregate(const AggregateReport& report,
                                const OueParams& params) {
  params.validate();
  if (report.bit_sums.size() != static_cast<std::size_t>(params.domain_size)) {
    throw std::invalid_argument("aggregate width != OUE domain size");
  }
  FrequencyEstimate est;
  est.n = report.n;
  est.freq.assign(report.bit_sums.size(), 0.0);
  if (report.n <= 0) {
    est.empty = true;
    return est;
  }
  const double n = static_cast<double>(report.n);
  const double q = params.q();
  const double denom = n * (params.p() - q);
  for (std::size_t j = 0; j < report.bit_sums.size(); ++j) {
    est.freq[j] = (static_cast<double>(report.bit_sums[j]) - n * q) / denom;
  }
  return est;
}

double oue_variance(double epsilon, std::int64_t n) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("oue_variance: epsilon must be positive");
  }
  if (n <= 0) {
    throw std::invalid_argument("oue_variance: n must be >= 1");
  }
  const double e = std::exp(epsilon);
  return 4.0 * e / (static_cast<double>(n) * (e - 1.0) * (e - 1.0));
}

AggregateReport oue_simulate_aggregate(const std::vector<std::int64_t>& true_counts,
                                       std::int64_t n, const OueParams& params,
                                       std::mt19937_64& rng, PerturbPath path) {
  params.validate();
  if (true_counts.size() != static_cast<std::size_t>(params.domain_size)) {
    throw std::invalid_argument("true_counts width != OUE domain size");
  }
  std::int64_t total = 0;
  for (std::int64_t c : true_counts) {
    if (c < 0) throw std::invalid_argument("negative true count");
    total += c;
  }
  if (total > n) {
    throw std::invalid_argument("true counts exceed user count");
  }

  AggregateReport report;
  report.n = n;
  report.bit_sums.assign(true_counts.size(), 0);
  if (n == 0) return report;

  if (path == PerturbPath::kBinomial) {
    std::binomial_distribution<std::int64_t> binom;
    using Param = std::binomial_distribution<std::int64_t>::param_type;
    const double p = params.p();
    const double q = params.q();
    for (std::size_t j = 0; j < true_counts.size(); ++j) {
      const std::int64_t c = true_counts[j];
      std::int64_t y = 0;
      if (c > 0) y += binom(rng, Param(c, p));
      if (n - c > 0) y += binom(rng, Param(n - c, q));
      report.bit_sums[j] = y;
    }
    return report;
  }

  // Per-user path: expand counts into individual reports in value order; the
  // remaining n - total users hold no value.
  for (std::size_t j = 0; j < true_counts.size(); ++j) {
    for (std::int64_t i = 0; i < true_counts[j]; ++i) {
      std::vector<std::uint8_t> bits =
          oue_perturb(static_cast<std::int64_t>(j), params, rng);
      for (std::size_t b = 0; b < bits.size(); ++b) {
        report.bit_sums[b] += bits[b];
      }
    }
  }
  for (std::int64_t i = 0; i < n - total; ++i) {
    std::vector<std::uint8_t> bits = oue_perturb(-1, params, rng);
    for (std::size_t b = 0; b < bits.size(); ++b) {
      report.bit_sums[b] += bits[b];
    }
  }
  return report;
}

AggregateReport oue_simulate_aggregate(const Histogram& truth,
                                       const OueParams& params,
                                       std::mt19937_64& rng, PerturbPath path) {
  if (truth.basis != HistogramBasis::kTrueCounts) {
    throw std::invalid_argument("simulation requires a true-counts histogram");
  }
  std::vector<std::int64_t> counts(truth.counts.size());
  std::int64_t n = 0;
  for (std::size_t j = 0; j < truth.counts.size(); ++j) {
    const double c = truth.counts[j];
    const auto ci = static_cast<std::int64_t>(c);
    if (c < 0 || static_cast<double>(ci) != c) {
      throw std::invalid_argument("true-counts histogram must hold integers");
    }
    counts[j] = ci;
    n += ci;
  }
  return oue_simulate_aggregate(counts, n, params, rng, path);
}

}  // namespace mtsp
