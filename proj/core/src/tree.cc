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

#include "mtsp/tree.h"

#include <algorithm>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "mtsp/freq_oracle.h"
#include "mtsp/rng.h"

namespace mtsp {
namespace {

// Exact per-node interval counts, level by level (root last entry not
// included; index math mirrors PrivateTree::offset).
std::vector<std::int64_t> interval_counts(const StreamBatch& batch,
                                          const ValueDomain& domain) {
  std::vector<std::int64_t> counts(
      static_cast<std::size_t>((std::int64_t{2} << domain.height) - 1), 0);
  const std::size_t leaf_off = PrivateTree::offset(domain.height);
  for (const Report& r : batch.reports) {
    if (r.value < 0 || r.value >= domain.size) {
      throw std::invalid_argument("report value outside domain");
    }
    ++counts[leaf_off + static_cast<std::size_t>(r.value)];
  }
  for (int level = domain.height - 1; level >= 0; --level) {
    const std::size_t off = PrivateTree::offset(level);
    const std::size_t child_off = PrivateTree::offset(level + 1);
    const std::int64_t width = std::int64_t{1} << level;
    for (std::int64_t i = 0; i < width; ++i) {
      counts[off + static_cast<std::size_t>(i)] =
          counts[child_off + static_cast<std::size_t>(2 * i)] +
          counts[child_off + static_cast<std::size_t>(2 * i + 1)];
    }
  }
  return counts;
}

// Fills every node not kept by the skeleton with half of its parent's
// property, walking levels top-down so parents are final before children.
void fill_cut_branches(PrivateTree& tree, const PrunedSkeleton& skeleton) {
  const int height = tree.domain.height;
  std::vector<bool> parent_kept{true};  // level 0: root always kept
  for (int level = 1; level <= height; ++level) {
    const std::int64_t width = std::int64_t{1} << level;
    std::vector<bool> kept(static_cast<std::size_t>(width), false);
    if (level < static_cast<int>(skeleton.kept.size())) {
      for (std::int64_t idx : skeleton.kept[static_cast<std::size_t>(level)]) {
        kept[static_cast<std::size_t>(idx)] = true;
      }
    }
    for (std::int64_t idx = 0; idx < width; ++idx) {
      if (kept[static_cast<std::size_t>(idx)]) continue;
      const TreeNode& parent = tree.node(level - 1, idx >> 1);
      TreeNode& n = tree.node(level, idx);
      n.property = parent.property / 2.0;
      n.variance = parent.variance / 4.0;
      n.provenance = NodeProvenance::kInferredFromParent;
    }
    parent_kept = std::move(kept);
  }
}

}  // namespace

const char* to_string(NodeProvenance p) {
  switch (p) {
    case NodeProvenance::kExact:
      return "exact";
    case NodeProvenance::kMeasured:
      return "measured";
    case NodeProvenance::kInferredFromParent:
      return "inferred_from_parent";
    case NodeProvenance::kCopiedFromPrevious:
      return "copied_from_previous_release";
  }
  return "unknown";
}

NodeProvenance provenance_from_string(const std::string& s) {
  if (s == "exact") return NodeProvenance::kExact;
  if (s == "measured") return NodeProvenance::kMeasured;
  if (s == "inferred_from_parent") return NodeProvenance::kInferredFromParent;
  if (s == "copied_from_previous_release") {
    return NodeProvenance::kCopiedFromPrevious;
  }
  throw std::invalid_argument("unknown provenance: " + s);
}

PrivateTree PrivateTree::zeros(const ValueDomain& domain) {
  PrivateTree t;
  t.domain = domain;
  t.nodes.assign(
      static_cast<std::size_t>((std::int64_t{2} << domain.height) - 1),
      TreeNode{});
  return t;
}

PrunedSkeleton PrunedSkeleton::full(const ValueDomain& domain) {
  PrunedSkeleton s;
  s.kept.resize(static_cast<std::size_t>(domain.levels));
  for (int level = 0; level <= domain.height; ++level) {
    auto& v = s.kept[static_cast<std::size_t>(level)];
    v.resize(std::size_t{1} << level);
    for (std::size_t i = 0; i < v.size(); ++i) {
      v[i] = static_cast<std::int64_t>(i);
    }
  }
  return s;
}

void PrunedSkeleton::validate(const ValueDomain& domain) const {
  if (kept.empty() || kept[0] != std::vector<std::int64_t>{0}) {
    throw std::invalid_argument("skeleton must keep exactly the root");
  }
  if (depth() > domain.height) {
    throw std::invalid_argument("skeleton deeper than the tree");
  }
  for (int level = 1; level < static_cast<int>(kept.size()); ++level) {
    const auto& prev = kept[static_cast<std::size_t>(level - 1)];
    const auto& cur = kept[static_cast<std::size_t>(level)];
    std::int64_t last = -1;
    for (std::int64_t idx : cur) {
      if (idx <= last) {
        throw std::invalid_argument("skeleton level not sorted/unique");
      }
      last = idx;
      if (idx < 0 || idx >= (std::int64_t{1} << level)) {
        throw std::invalid_argument("skeleton index out of range");
      }
      if (!std::binary_search(prev.begin(), prev.end(), idx >> 1)) {
        throw std::invalid_argument("skeleton is not prefix-closed");
      }
    }
  }
}

PrivateTree build_exact_tree(const StreamBatch& batch,
                             const ValueDomain& domain) {
  PrivateTree tree = PrivateTree::zeros(domain);
  tree.t = batch.t;
  tree.n_active = batch.size();
  if (tree.n_active == 0) return tree;  // all zeros, including the root

  const std::vector<std::int64_t> counts = interval_counts(batch, domain);
  const double n = static_cast<double>(tree.n_active);
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    tree.nodes[i].property = static_cast<double>(counts[i]) / n;
    tree.nodes[i].variance = 0.0;
    tree.nodes[i].provenance = NodeProvenance::kExact;
  }
  return tree;
}

PrivateTree estimate_tree(const StreamBatch& batch, const ValueDomain& domain,
                          double epsilon, std::mt19937_64& rng,
                          const PrunedSkeleton* structure, bool noiseless) {
  PrunedSkeleton full_structure;
  if (structure == nullptr) {
    full_structure = PrunedSkeleton::full(domain);
    structure = &full_structure;
  }
  structure->validate(domain);

  PrivateTree tree = PrivateTree::zeros(domain);
  tree.t = batch.t;
  tree.n_active = batch.size();
  tree.node(0, 0) =
      TreeNode{1.0, 0.0, NodeProvenance::kExact};  // root: total mass

  const int depth = structure->depth();
  if (depth == 0) {
    fill_cut_branches(tree, *structure);
    return tree;
  }

  if (noiseless) {
    // Exact sub-oracle: kept nodes get their true frequency, variance 0.
    const std::vector<std::int64_t> counts = interval_counts(batch, domain);
    const double n = static_cast<double>(tree.n_active);
    for (int level = 1; level <= depth; ++level) {
      for (std::int64_t idx : structure->kept[static_cast<std::size_t>(level)]) {
        TreeNode& node = tree.node(level, idx);
        node.property =
            tree.n_active == 0
                ? 0.0
                : static_cast<double>(
                      counts[PrivateTree::offset(level) +
                             static_cast<std::size_t>(idx)]) /
                      n;
        node.variance = 0.0;
        node.provenance = NodeProvenance::kMeasured;
      }
    }
    fill_cut_branches(tree, *structure);
    return tree;
  }

  // One engine per level, derived from a single draw so results do not
  // depend on how sibling levels consume randomness.
  const std::uint64_t base_seed = rng();

  std::vector<std::int32_t> values;
  values.reserve(static_cast<std::size_t>(batch.size()));
  for (const Report& r : batch.reports) values.push_back(r.value);
  {
    std::mt19937_64 shuffle_rng = make_rng(base_seed, {0});
    std::shuffle(values.begin(), values.end(), shuffle_rng);
  }

  const std::int64_t n = static_cast<std::int64_t>(values.size());
  const std::int64_t groups = depth;
  const std::int64_t group_base = n / groups;
  const std::int64_t remainder = n % groups;
  tree.uneven_partition = remainder != 0 || group_base == 0;

  std::int64_t cursor = 0;
  for (int level = 1; level <= depth; ++level) {
    const std::int64_t m = group_base + (level <= remainder ? 1 : 0);
    const auto& kept = structure->kept[static_cast<std::size_t>(level)];
    const std::int64_t slice_begin = cursor;
    cursor += m;

    if (m == 0) {
      // Empty estimate: no users were available for this level.
      for (std::int64_t idx : kept) {
        tree.node(level, idx) =
            TreeNode{0.0, 0.0, NodeProvenance::kMeasured};
      }
      continue;
    }

    // Per-kept-node true counts of this level's user slice. Values whose
    // interval was cut at this level map to no kept node and contribute
    // all-zero vectors (handled by counts summing below m).
    std::vector<std::int32_t> position(std::size_t{1} << level, -1);
    for (std::size_t i = 0; i < kept.size(); ++i) {
      position[static_cast<std::size_t>(kept[i])] =
          static_cast<std::int32_t>(i);
    }
    std::vector<std::int64_t> counts(kept.size(), 0);
    const int shift = domain.height - level;
    for (std::int64_t u = slice_begin; u < slice_begin + m; ++u) {
      const std::int64_t node_idx =
          static_cast<std::int64_t>(values[static_cast<std::size_t>(u)]) >> shift;
      const std::int32_t pos = position[static_cast<std::size_t>(node_idx)];
      if (pos >= 0) ++counts[static_cast<std::size_t>(pos)];
    }

    OueParams params{epsilon, static_cast<std::int64_t>(kept.size())};
    std::mt19937_64 level_rng =
        make_rng(base_seed, {static_cast<std::uint64_t>(level)});
    const AggregateReport report =
        oue_simulate_aggregate(counts, m, params, level_rng);
    const FrequencyEstimate est = oue_aggregate(report, params);
    const double variance = oue_variance(epsilon, m);
    for (std::size_t i = 0; i < kept.size(); ++i) {
      tree.node(level, kept[i]) =
          TreeNode{est.freq[i], variance, NodeProvenance::kMeasured};
    }
  }

  fill_cut_branches(tree, *structure);
  return tree;
}

namespace {

void cover_recurse(const ValueDomain& domain, int level, std::int64_t index,
                   std::int64_t lo, std::int64_t hi, std::int64_t v1,
                   std::int64_t v2, std::vector<NodeRef>& out) {
  if (v2 < lo || hi < v1) return;
  if (v1 <= lo && hi <= v2) {
    out.push_back(NodeRef{level, index});
    return;
  }
  const std::int64_t mid = lo + (hi - lo) / 2;
  cover_recurse(domain, level + 1, 2 * index, lo, mid, v1, v2, out);
  cover_recurse(domain, level + 1, 2 * index + 1, mid + 1, hi, v1, v2, out);
}

}  // namespace

std::vector<NodeRef> minimum_cover(const ValueDomain& domain, std::int64_t v1,
                                   std::int64_t v2) {
  if (v1 < 0 || v2 >= domain.size || v1 > v2) {
    throw std::invalid_argument("range [" + std::to_string(v1) + ", " +
                                std::to_string(v2) + "] invalid for domain of size " +
                                std::to_string(domain.size));
  }
  std::vector<NodeRef> out;
  cover_recurse(domain, 0, 0, 0, domain.padded_size - 1, v1, v2, out);
  return out;
}

double tree_answer(const PrivateTree& tree, const std::vector<NodeRef>& cover) {
  double sum = 0.0;
  for (const NodeRef& ref : cover) {
    if (ref.level < 0 || ref.level > tree.domain.height || ref.index < 0 ||
        ref.index >= (std::int64_t{1} << ref.level)) {
      throw std::invalid_argument("cover node outside tree");
    }
    sum += tree.node(ref).property;
  }
  return sum;
}

PrivateTree lift_histogram_to_tree(const std::vector<double>& leaf_estimates,
                                   const std::vector<double>& leaf_variances,
                                   const ValueDomain& domain, std::int64_t t,
                                   std::int64_t n_active) {
  if (leaf_estimates.size() != static_cast<std::size_t>(domain.padded_size) ||
      leaf_variances.size() != leaf_estimates.size()) {
    throw std::invalid_argument("leaf arrays must have padded width");
  }
  PrivateTree tree = PrivateTree::zeros(domain);
  tree.t = t;
  tree.n_active = n_active;
  for (std::int64_t v = 0; v < domain.padded_size; ++v) {
    TreeNode& leafv = tree.leaf(v);
    leafv.property = leaf_estimates[static_cast<std::size_t>(v)];
    leafv.variance = leaf_variances[static_cast<std::size_t>(v)];
    leafv.provenance = v < domain.size ? NodeProvenance::kMeasured
                                       : NodeProvenance::kExact;
  }
  for (int level = domain.height - 1; level >= 0; --level) {
    const std::int64_t width = std::int64_t{1} << level;
    for (std::int64_t i = 0; i < width; ++i) {
      const TreeNode& a = tree.node(level + 1, 2 * i);
      const TreeNode& b = tree.node(level + 1, 2 * i + 1);
      tree.node(level, i) = TreeNode{a.property + b.property,
                                     a.variance + b.variance,
                                     NodeProvenance::kMeasured};
    }
  }
  return tree;
}

nlohmann::json tree_to_json(const PrivateTree& tree) {
  nlohmann::json nodes = nlohmann::json::array();
  for (int level = 0; level <= tree.domain.height; ++level) {
    const std::int64_t width = std::int64_t{1} << level;
    for (std::int64_t i = 0; i < width; ++i) {
      const TreeNode& n = tree.node(level, i);
      nodes.push_back({{"level", level},
                       {"index", i},
                       {"property", n.property},
                       {"variance", n.variance},
                       {"provenance", to_string(n.provenance)}});
    }
  }
  return nlohmann::json{{"t", tree.t},
                        {"n_active", tree.n_active},
                        {"domain_size", tree.domain.size},
                        {"padded_size", tree.domain.padded_size},
                        {"uneven_partition", tree.uneven_partition},
                        {"nodes", std::move(nodes)}};
}

PrivateTree tree_from_json(const nlohmann::json& j) {
  const auto domain_size = j.at("domain_size").get<std::int64_t>();
  PrivateTree tree = PrivateTree::zeros(ValueDomain::of(domain_size));
  if (j.at("padded_size").get<std::int64_t>() != tree.domain.padded_size) {
    throw std::invalid_argument("padded_size mismatch in serialized tree");
  }
  tree.t = j.at("t").get<std::int64_t>();
  tree.n_active = j.at("n_active").get<std::int64_t>();
  tree.uneven_partition = j.value("uneven_partition", false);
  const nlohmann::json& nodes = j.at("nodes");
  if (nodes.size() != tree.nodes.size()) {
    throw std::invalid_argument("serialized tree has wrong node count");
  }
  for (const nlohmann::json& nj : nodes) {
    const int level = nj.at("level").get<int>();
    const auto index = nj.at("index").get<std::int64_t>();
    if (level < 0 || level > tree.domain.height || index < 0 ||
        index >= (std::int64_t{1} << level)) {
      throw std::invalid_argument("serialized node address out of range");
    }
    TreeNode& n = tree.node(level, index);
    n.property = nj.at("property").get<double>();
    n.variance = nj.at("variance").get<double>();
    n.provenance =
        provenance_from_string(nj.at("provenance").get<std::string>());
  }
  return tree;
}

}  // namespace mtsp
