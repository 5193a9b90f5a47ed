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

#include "mtsp/domain.h"

#include <stdexcept>
#include <string>
#include <unordered_set>

namespace mtsp {

ValueDomain ValueDomain::of(std::int64_t size) {
  if (size < 1) {
    throw std::invalid_argument("domain size must be >= 1, got " +
                                std::to_string(size));
  }
  ValueDomain d;
  d.size = size;
  d.padded_size = 1;
  d.height = 0;
  while (d.padded_size < size) {
    d.padded_size <<= 1;
    ++d.height;
  }
  d.levels = d.height + 1;
  return d;
}

Histogram true_histogram(const StreamBatch& batch, const ValueDomain& domain) {
  Histogram h;
  h.basis = HistogramBasis::kTrueCounts;
  h.counts.assign(static_cast<std::size_t>(domain.padded_size), 0.0);
  for (const Report& r : batch.reports) {
    if (r.value < 0 || r.value >= domain.size) {
      throw std::invalid_argument("report value " + std::to_string(r.value) +
                                  " outside domain of size " +
                                  std::to_string(domain.size));
    }
    h.counts[static_cast<std::size_t>(r.value)] += 1.0;
  }
  return h;
}

std::vector<double> true_frequencies(const StreamBatch& batch,
                                     const ValueDomain& domain) {
  Histogram h = true_histogram(batch, domain);
  const double n = static_cast<double>(batch.size());
  if (n > 0) {
    for (double& c : h.counts) c /= n;
  }
  return std::move(h.counts);
}

void validate_dataset(const StreamDataset& dataset) {
  if (dataset.domain.padded_size <= 0) {
    throw std::invalid_argument("dataset has an uninitialized domain");
  }
  std::unordered_set<std::int64_t> users;
  for (std::size_t i = 0; i < dataset.batches.size(); ++i) {
    const StreamBatch& b = dataset.batches[i];
    if (b.t != static_cast<std::int64_t>(i) + 1) {
      throw std::invalid_argument(
          "batch timestamps must be contiguous from 1; index " +
          std::to_string(i) + " has t=" + std::to_string(b.t));
    }
    users.clear();
    for (const Report& r : b.reports) {
      if (r.value < 0 || r.value >= dataset.domain.size) {
        throw std::invalid_argument("value out of domain at t=" +
                                    std::to_string(b.t));
      }
      if (!users.insert(r.user).second) {
        throw std::invalid_argument("duplicate user " + std::to_string(r.user) +
                                    " at t=" + std::to_string(b.t));
      }
    }
  }
}

}  // namespace mtsp
