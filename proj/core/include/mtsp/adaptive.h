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

#ifndef MTSP_ADAPTIVE_H_
#define MTSP_ADAPTIVE_H_

#include <cstdint>
#include <deque>
#include <random>

#include "mtsp/domain.h"
#include "mtsp/tree.h"

namespace mtsp {

// Keep-or-cut threshold for a node whose cut subtree would have
// `subtree_height` levels below the node: cutting replaces 2^{h+1}-2 noisy
// measurements with halving inference, which wins whenever the node's mass is
// below sqrt(((2^{h+1}-3)/(2^{h+1}-1)) * var(eps2, n_group)). Approaches
// sqrt(var) from below as the subtree grows.
double pruning_threshold(double epsilon2, int subtree_height,
                         std::int64_t n_group);

struct PruningPolicy {
  enum class Mode { kDerived, kFixed };
  Mode mode = Mode::kDerived;
  double fixed_value = 0.0;
  double epsilon2 = 0.0;     // kDerived inputs
  std::int64_t n_group = 1;  //

  static PruningPolicy derived(double epsilon2, std::int64_t n_group);
  static PruningPolicy fixed(double value);
  double value(int subtree_height) const;
};

// Top-down pass over a decision tree: a kept node's children survive only
// when the node's property reaches the policy threshold for its subtree
// height. The root is always kept; the result is prefix-closed.
PrunedSkeleton prune_tree(const PrivateTree& decision_tree,
                          const PruningPolicy& policy);

// Prune against `decision_tree`, then re-estimate the surviving structure
// from the batch at epsilon2 (cut branches are filled by halving). The
// output is always a complete tree over the same domain.
PrivateTree adaptive_tree_estimate(const PrivateTree& decision_tree,
                                   const PruningPolicy& policy, double epsilon2,
                                   const StreamBatch& batch,
                                   std::mt19937_64& rng, bool noiseless = false);

struct GroupMember {
  std::int64_t t = 0;
  double value = 0.0;     // raw (unsmoothed) estimate
  double variance = 0.0;  // its estimator variance
};

// Per-node run of publications judged to share one underlying value.
struct GroupState {
  std::deque<GroupMember> members;  // oldest first

  int length() const { return static_cast<int>(members.size()); }
  double mean() const;
  double variance_sum() const;
};

// One group per tree node. `max_members` bounds history (oldest evicted), so
// memory stays O(w * tree size).
class GroupTable {
 public:
  GroupTable(const ValueDomain& domain, int max_members);

  GroupState& state(int level, std::int64_t index);
  const GroupState& state(int level, std::int64_t index) const;
  int max_members() const { return max_members_; }

 private:
  std::vector<GroupState> states_;
  int max_members_;
};

// Bias-corrected squared deviation of a fresh estimate from its group's
// mean: (g0 - mean)^2 - ((l+1)/l) * var_now. Unbiased for the true squared
// deviation when members share the truth; may be negative. l >= 1 required.
double group_deviation_estimate(double new_estimate, const GroupState& group,
                                double var_now);
// Convenience overload deriving var_now from the oracle's closed form.
double group_deviation_estimate(double new_estimate, const GroupState& group,
                                double epsilon2, std::int64_t n_group);

// Largest deviation attributable to estimation noise alone:
// (1/l^2) * ((l+1)^2 * var_now - (var_now + sum of member variances)).
// Equals ((l+1)/l) * var when every variance is var.
double grouping_threshold(double var_now, const GroupState& group);

// Per node: extend the group when the deviation estimate is within the
// noise threshold, else restart it at this publication. The released
// property is the mean of the member raw estimates (variance sum / l^2 as
// the reduced variance). Mutates `groups`; never rewrites member history.
PrivateTree group_smooth(const PrivateTree& estimated, GroupTable& groups);

}  // namespace mtsp

#endif  // MTSP_ADAPTIVE_H_
