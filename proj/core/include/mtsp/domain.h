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

#ifndef MTSP_DOMAIN_H_
#define MTSP_DOMAIN_H_

#include <cstdint>
#include <string>
#include <vector>

namespace mtsp {

// A categorical value domain of `size` addressable values, padded up to the
// next power of two so the interval tree over it is a perfect binary tree.
// Padding indices (>= size) never occur in data and carry zero mass.
struct ValueDomain {
  std::int64_t size = 0;         // addressable values, >= 1
  std::int64_t padded_size = 0;  // smallest power of two >= size
  int height = 0;                // log2(padded_size)
  int levels = 0;                // height + 1 (tree levels incl. root)

  static ValueDomain of(std::int64_t size);

  friend bool operator==(const ValueDomain&, const ValueDomain&) = default;
};

// One user's report at one timestamp. Users are dictionary-encoded to dense
// ids by ingestion / synthesis; values index into the domain.
struct Report {
  std::int64_t user = 0;
  std::int32_t value = 0;
};

// All reports collected at one timestamp. A user appears at most once.
struct StreamBatch {
  std::int64_t t = 0;  // 1-based
  std::vector<Report> reports;

  std::int64_t size() const { return static_cast<std::int64_t>(reports.size()); }
};

// A finite prefix of a stream: contiguous batches t = 1..length. Timestamps
// with no activity are represented by empty batches, never skipped.
struct StreamDataset {
  ValueDomain domain;
  std::vector<StreamBatch> batches;
  std::vector<std::string> value_labels;  // optional; dictionary order

  std::int64_t length() const { return static_cast<std::int64_t>(batches.size()); }
};

enum class HistogramBasis { kTrueCounts, kEstimatedFrequencies };

// Per-value tallies over the padded domain. In the kTrueCounts basis the
// entries are non-negative integers summing to the batch size; in the
// kEstimatedFrequencies basis they are unbiased (possibly negative) estimates.
struct Histogram {
  std::vector<double> counts;
  HistogramBasis basis = HistogramBasis::kTrueCounts;
};

// Exact per-value counts of a batch over the padded domain.
Histogram true_histogram(const StreamBatch& batch, const ValueDomain& domain);

// Exact per-value frequencies (counts / n). All zeros when the batch is empty.
std::vector<double> true_frequencies(const StreamBatch& batch,
                                     const ValueDomain& domain);

// Throws std::invalid_argument when the dataset violates its invariants:
// non-contiguous timestamps, out-of-domain values, or duplicate users within
// a batch.
void validate_dataset(const StreamDataset& dataset);

}  // namespace mtsp

#endif  // MTSP_DOMAIN_H_
