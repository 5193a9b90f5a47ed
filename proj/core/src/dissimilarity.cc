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

#include "mtsp/dissimilarity.h"

#include <algorithm>
#include <stdexcept>

namespace mtsp {
namespace {

void check_same_shape(const PrivateTree& a, const PrivateTree& b) {
  if (a.domain.padded_size != b.domain.padded_size ||
      a.nodes.size() != b.nodes.size()) {
    throw std::invalid_argument("dissimilarity requires trees over one domain");
  }
}

}  // namespace

double true_dissimilarity(const PrivateTree& current,
                          const PrivateTree& previous_release) {
  check_same_shape(current, previous_release);
  double sum = 0.0;
  for (std::size_t i = 0; i < current.nodes.size(); ++i) {
    const double d = current.nodes[i].property - previous_release.nodes[i].property;
    sum += d * d;
  }
  return sum / static_cast<double>(current.nodes.size());
}

DissimilarityRecord estimate_dissimilarity(const PrivateTree& noisy_current,
                                           const PrivateTree& previous_release,
                                           std::int64_t budget_nano) {
  check_same_shape(noisy_current, previous_release);
  double sum = 0.0;
  for (std::size_t i = 0; i < noisy_current.nodes.size(); ++i) {
    const double d =
        noisy_current.nodes[i].property - previous_release.nodes[i].property;
    sum += d * d - noisy_current.nodes[i].variance;
  }
  DissimilarityRecord rec;
  rec.t = noisy_current.t;
  rec.raw = sum / static_cast<double>(noisy_current.nodes.size());
  rec.clamped = std::max(0.0, rec.raw);
  rec.budget_nano = budget_nano;
  return rec;
}

}  // namespace mtsp
