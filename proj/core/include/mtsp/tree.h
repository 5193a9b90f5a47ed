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

#ifndef MTSP_TREE_H_
#define MTSP_TREE_H_

#include <cstdint>
#include <random>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mtsp/domain.h"

namespace mtsp {

enum class NodeProvenance {
  kExact,               // structural constant or noise-free construction
  kMeasured,            // estimated by a frequency oracle at this timestamp
  kInferredFromParent,  // filled by recursive halving of a kept ancestor
  kCopiedFromPrevious,  // approximation timestamp: previous release reused
};

const char* to_string(NodeProvenance p);
NodeProvenance provenance_from_string(const std::string& s);

struct TreeNode {
  double property = 0.0;  // interval frequency in [0,1] in expectation
  double variance = 0.0;  // estimator variance metadata (0 when exact)
  NodeProvenance provenance = NodeProvenance::kExact;
};

// (level, index) address of a node; level 0 is the root, index counts nodes
// left-to-right within a level. The node covers padded_size / 2^level values
// starting at index * that width.
struct NodeRef {
  int level = 0;
  std::int64_t index = 0;

  friend bool operator==(const NodeRef&, const NodeRef&) = default;
};

// A perfect binary interval tree over the padded domain, stored level by
// level. Every instance is complete: pruning during estimation fills the cut
// branches by halving, so consumers never see holes.
struct PrivateTree {
  ValueDomain domain;
  std::int64_t t = 0;         // timestamp this tree describes
  std::int64_t n_active = 0;  // users in the batch it was built from
  std::vector<TreeNode> nodes;
  bool uneven_partition = false;  // estimation groups differed in size

  static PrivateTree zeros(const ValueDomain& domain);

  std::int64_t node_count() const {
    return static_cast<std::int64_t>(nodes.size());
  }
  static std::size_t offset(int level) {
    return (std::size_t{1} << level) - 1;
  }
  TreeNode& node(int level, std::int64_t index) {
    return nodes[offset(level) + static_cast<std::size_t>(index)];
  }
  const TreeNode& node(int level, std::int64_t index) const {
    return nodes[offset(level) + static_cast<std::size_t>(index)];
  }
  const TreeNode& node(const NodeRef& ref) const {
    return node(ref.level, ref.index);
  }
  TreeNode& leaf(std::int64_t value) { return node(domain.height, value); }
  const TreeNode& leaf(std::int64_t value) const {
    return node(domain.height, value);
  }
};

// Which nodes survive a top-down pruning pass. kept[level] holds the sorted
// node indices retained at that level; kept[0] is always {0}. Prefix-closed:
// a node may appear only if its parent does.
struct PrunedSkeleton {
  std::vector<std::vector<std::int64_t>> kept;

  static PrunedSkeleton full(const ValueDomain& domain);
  int depth() const { return static_cast<int>(kept.size()) - 1; }
  // Throws std::invalid_argument when not prefix-closed / out of range.
  void validate(const ValueDomain& domain) const;
};

// Noise-free tree: leaves are exact frequencies, parents the sum of their
// children. All-zero (root included) when the batch is empty.
PrivateTree build_exact_tree(const StreamBatch& batch, const ValueDomain& domain);

// Private estimate: users are shuffled and split across the structure's
// non-root levels (floor + round-robin remainder); one OUE invocation per
// level estimates that level's kept-node frequencies with the full epsilon
// (parallel composition across disjoint user groups). The root is pinned to
// property 1 with variance 0. Nodes cut by `structure` are filled by
// recursive halving of their deepest kept ancestor. With noiseless = true the
// oracle is replaced by exact frequencies (variance 0); used for regression
// tests of everything downstream of the noise.
PrivateTree estimate_tree(const StreamBatch& batch, const ValueDomain& domain,
                          double epsilon, std::mt19937_64& rng,
                          const PrunedSkeleton* structure = nullptr,
                          bool noiseless = false);

// The unique minimal set of disjoint tree nodes whose intervals exactly tile
// [v1, v2]; at most 2*height nodes. Requires 0 <= v1 <= v2 < domain.size.
std::vector<NodeRef> minimum_cover(const ValueDomain& domain, std::int64_t v1,
                                   std::int64_t v2);

// Sum of node properties over a cover (a frequency; multiply by n_active for
// a count).
double tree_answer(const PrivateTree& tree, const std::vector<NodeRef>& cover);

// Lifts per-leaf frequency estimates (padded width) into a tree whose
// internal nodes are exact sums of their children; used by the flat-histogram
// baselines so query code paths are identical across methods.
PrivateTree lift_histogram_to_tree(const std::vector<double>& leaf_estimates,
                                   const std::vector<double>& leaf_variances,
                                   const ValueDomain& domain, std::int64_t t,
                                   std::int64_t n_active);

// Flat JSON array of {level, index, property, variance, provenance} plus
// header fields; round-trips exactly (bit-preserving doubles).
nlohmann::json tree_to_json(const PrivateTree& tree);
PrivateTree tree_from_json(const nlohmann::json& j);

}  // namespace mtsp

#endif  // MTSP_TREE_H_
