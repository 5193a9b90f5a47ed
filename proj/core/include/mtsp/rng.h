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

#ifndef MTSP_RNG_H_
#define MTSP_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace mtsp {

// SplitMix64 finalizer; bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t x);

// Derives the seed of an independent substream from a master seed and a tag
// path such as {timestamp, phase, level}. The derivation depends only on the
// (master, path) pair, never on how many draws other substreams consumed, so
// results are reproducible regardless of execution order.
std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> path);

// Convenience: an engine seeded for the given substream.
std::mt19937_64 make_rng(std::uint64_t master,
                         std::initializer_list<std::uint64_t> path);

}  // namespace mtsp

#endif  // MTSP_RNG_H_
