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

#ifndef MTSP_SYNTH_H_
#define MTSP_SYNTH_H_

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mtsp/domain.h"

namespace mtsp {

// Declarative synthetic stream: a base distribution over the domain, an
// optional smooth drift applied every step, and discrete change points.
// Sampling is fully determined by `seed`.
struct GeneratorSpec {
  enum class BaseKind { kUniform, kZipf, kWeights };
  struct Change {
    enum class Kind {
      kSwap,       // exchange the weights of values a and b
      kShift,      // move `mass` of probability from value a to value b
      kScaleUsers  // multiply the per-timestamp user count by `factor`
    };
    std::int64_t t = 0;  // applied before sampling batch t
    Kind kind = Kind::kSwap;
    std::int64_t a = 0;
    std::int64_t b = 0;
    double mass = 0.0;
    double factor = 1.0;
  };

  std::int64_t domain_size = 0;
  std::int64_t timestamps = 0;
  std::int64_t users_per_timestamp = 0;
  BaseKind base_kind = BaseKind::kUniform;
  double zipf_s = 1.0;                // for kZipf
  std::vector<double> base_weights;   // for kWeights
  // Each step blends this fraction of every value's mass into its cyclic
  // successor, giving a slow deterministic rotation of the distribution.
  double drift = 0.0;
  std::vector<Change> changes;
  std::uint64_t seed = 0;

  static GeneratorSpec from_json(const nlohmann::json& j);
  static GeneratorSpec from_file(const std::string& path);
};

// The exact sampling distributions behind a synthetic dataset; test oracles
// and ground-truth plots use these.
struct SynthTruth {
  std::vector<std::vector<double>> weights;  // [t-1] -> per-value probability
  std::vector<std::int64_t> users;           // [t-1] -> batch size
};

// Draws the dataset described by `spec`. Byte-identical across runs for the
// same spec (including seed). If `truth` is non-null it receives the exact
// per-timestamp distributions.
StreamDataset synthesize_stream(const GeneratorSpec& spec,
                                SynthTruth* truth = nullptr);

}  // namespace mtsp

#endif  // MTSP_SYNTH_H_
