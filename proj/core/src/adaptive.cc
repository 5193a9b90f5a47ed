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

#include "mtsp/adaptive.h"

#include <cmath>
#include <stdexcept>

#include "mtsp/freq_oracle.h"

namespace mtsp {

double pruning_threshold(double epsilon2, int subtree_height,
                         std::int64_t n_group) {
  if (subtree_height < 1) {
    throw std::invalid_argument("pruning applies to nodes with children");
  }
  const double var = oue_variance(epsilon2, n_group);
  const double pow_h1 = std::ldexp(1.0, subtree_height + 1);  // 2^{h+1}
  const double factor = (pow_h1 - 3.0) / (pow_h1 - 1.0);
  return std::sqrt(factor * var);
}

PruningPolicy PruningPolicy::derived(double epsilon2, std::int64_t n_group) {
  PruningPolicy p;
  p.mode = Mode::kDerived;
  p.epsilon2 = epsilon2;
  p.n_group = n_group;
  return p;
}

PruningPolicy PruningPolicy::fixed(double value) {
  PruningPolicy p;
  p.mode = Mode::kFixed;
  p.fixed_value = value;
  return p;
}

double PruningPolicy::value(int subtree_height) const {
  if (mode == Mode::kFixed) return fixed_value;
  return pruning_threshold(epsilon2, subtree_height, n_group);
}

PrunedSkeleton prune_tree(const PrivateTree& decision_tree,
                          const PruningPolicy& policy) {
  const int height = decision_tree.domain.height;
  PrunedSkeleton skeleton;
  skeleton.kept.push_back({0});
  for (int level = 0; level < height; ++level) {
    const double threshold = policy.value(height - level);
    std::vector<std::int64_t> next;
    for (std::int64_t idx : skeleton.kept[static_cast<std::size_t>(level)]) {
      if (decision_tree.node(level, idx).property >= threshold) {
        next.push_back(2 * idx);
        next.push_back(2 * idx + 1);
      }
    }
    if (next.empty()) break;
    skeleton.kept.push_back(std::move(next));
  }
  return skeleton;
}

PrivateTree adaptive_tree_estimate(const PrivateTree& decision_tree,
                                   const PruningPolicy& policy, double epsilon2,
                                   const StreamBatch& batch,
                                   std::mt19937_64& rng, bool noiseless) {
  const PrunedSkeleton skeleton = prune_tree(decision_tree, policy);
  return estimate_tree(batch, decision_tree.domain, epsilon2, rng, &skeleton,
                       noiseless);
}

double GroupState::mean() const {
  if (members.empty()) throw std::logic_error("mean of an empty group");
  double sum = 0.0;
  for (const GroupMember& m : members) sum += m.value;
  return sum / static_cast<double>(members.size());
}

double GroupState::variance_sum() const {
  double sum = 0.0;
  for (const GroupMember& m : members) sum += m.variance;
  return sum;
}

GroupTable::GroupTable(const ValueDomain& domain, int max_members)
    : max_members_(max_members) {
  if (max_members < 1) {
    throw std::invalid_argument("group history bound must be >= 1");
  }
  states_.resize(
      static_cast<std::size_t>((std::int64_t{2} << domain.height) - 1));
}

GroupState& GroupTable::state(int level, std::int64_t index) {
  return states_[PrivateTree::offset(level) + static_cast<std::size_t>(index)];
}

const GroupState& GroupTable::state(int level, std::int64_t index) const {
  return states_[PrivateTree::offset(level) + static_cast<std::size_t>(index)];
}

double group_deviation_estimate(double new_estimate, const GroupState& group,
                                double var_now) {
  const int l = group.length();
  if (l < 1) throw std::invalid_argument("deviation needs a non-empty group");
  const double diff = new_estimate - group.mean();
  return diff * diff -
         (static_cast<double>(l + 1) / static_cast<double>(l)) * var_now;
}

double group_deviation_estimate(double new_estimate, const GroupState& group,
                                double epsilon2, std::int64_t n_group) {
  return group_deviation_estimate(new_estimate, group,
                                  oue_variance(epsilon2, n_group));
}

double grouping_threshold(double var_now, const GroupState& group) {
  const int l = group.length();
  if (l < 1) throw std::invalid_argument("threshold needs a non-empty group");
  const double ld = static_cast<double>(l);
  return ((ld + 1.0) * (ld + 1.0) * var_now -
          (var_now + group.variance_sum())) /
         (ld * ld);
}

PrivateTree group_smooth(const PrivateTree& estimated, GroupTable& groups) {
  PrivateTree out = estimated;
  const int height = estimated.domain.height;
  for (int level = 1; level <= height; ++level) {
    const std::int64_t width = std::int64_t{1} << level;
    for (std::int64_t idx = 0; idx < width; ++idx) {
      const TreeNode& in = estimated.node(level, idx);
      GroupState& group = groups.state(level, idx);
      const GroupMember fresh{estimated.t, in.property, in.variance};

      bool extend = false;
      if (group.length() > 0) {
        const double deviation =
            group_deviation_estimate(in.property, group, in.variance);
        extend = deviation <= grouping_threshold(in.variance, group);
      }
      if (!extend) {
        group.members.clear();
      }
      group.members.push_back(fresh);
      while (group.length() > groups.max_members()) group.members.pop_front();

      TreeNode& released = out.node(level, idx);
      const double l = static_cast<double>(group.length());
      released.property = group.mean();
      released.variance = group.variance_sum() / (l * l);
      released.provenance = in.provenance;
    }
  }
  return out;
}

}  // namespace mtsp
