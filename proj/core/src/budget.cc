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

#include "mtsp/budget.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mtsp/freq_oracle.h"
#include "mtsp/rng.h"

namespace mtsp {

BudgetNano nano_from_epsilon(double epsilon) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("epsilon must be finite and >= 0");
  }
  return static_cast<BudgetNano>(
      std::llround(epsilon * static_cast<double>(kNanoPerEpsilon)));
}

double epsilon_from_nano(BudgetNano nano) {
  return static_cast<double>(nano) / static_cast<double>(kNanoPerEpsilon);
}

const char* to_string(Decision d) {
  switch (d) {
    case Decision::kWarmup:
      return "warmup";
    case Decision::kPublish:
      return "publish";
    case Decision::kApproximate:
      return "approximate";
  }
  return "unknown";
}

Decision decision_from_string(const std::string& s) {
  if (s == "warmup") return Decision::kWarmup;
  if (s == "publish") return Decision::kPublish;
  if (s == "approximate") return Decision::kApproximate;
  throw std::invalid_argument("unknown decision: " + s);
}

BudgetLedger::BudgetLedger(BudgetNano epsilon_total, int w)
    : epsilon_total_(epsilon_total), w_(w) {
  if (epsilon_total <= 0) {
    throw std::invalid_argument("ledger epsilon must be positive");
  }
  if (w < 1) throw std::invalid_argument("ledger window must be >= 1");
  prefix_total_.push_back(0);
  prefix_pub_.push_back(0);
}

void BudgetLedger::record(const LedgerEntry& entry) {
  if (entry.t != static_cast<std::int64_t>(entries_.size()) + 1) {
    throw std::invalid_argument("ledger entries must be consecutive from t=1");
  }
  if (entry.eps1 < 0 || entry.eps2 < 0) {
    throw std::invalid_argument("negative budget spend");
  }
  const BudgetNano new_total = prefix_total_.back() + entry.eps1 + entry.eps2;
  const std::size_t lo =
      entry.t > w_ ? static_cast<std::size_t>(entry.t - w_) : 0;
  if (new_total - prefix_total_[lo] > epsilon_total_) {
    // Hard w-event invariant; every allocator caps its spend against
    // remaining_publication() so this must be unreachable.
    throw std::logic_error("w-event budget invariant violated at t=" +
                           std::to_string(entry.t));
  }
  entries_.push_back(entry);
  prefix_total_.push_back(new_total);
  prefix_pub_.push_back(prefix_pub_.back() + entry.eps2);
}

BudgetNano BudgetLedger::remaining_publication(std::int64_t t) const {
  if (t < 1) throw std::invalid_argument("timestamp must be >= 1");
  // eps2 spends at timestamps [t-w+1, t-1]; entry i (0-based) is t=i+1.
  const std::int64_t hi = std::min<std::int64_t>(
      static_cast<std::int64_t>(entries_.size()), t - 1);
  const std::int64_t lo = std::max<std::int64_t>(0, t - w_);
  const BudgetNano spent =
      hi <= lo ? 0
               : prefix_pub_[static_cast<std::size_t>(hi)] -
                     prefix_pub_[static_cast<std::size_t>(lo)];
  return std::max<BudgetNano>(0, epsilon_total_ / 2 - spent);
}

bool BudgetLedger::audit(std::string* error) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const LedgerEntry& e = entries_[i];
    if (e.t != static_cast<std::int64_t>(i) + 1 || e.eps1 < 0 || e.eps2 < 0) {
      if (error) *error = "malformed entry at index " + std::to_string(i);
      return false;
    }
    const std::size_t lo = i + 1 > static_cast<std::size_t>(w_)
                               ? i + 1 - static_cast<std::size_t>(w_)
                               : 0;
    const BudgetNano window_sum = prefix_total_[i + 1] - prefix_total_[lo];
    if (window_sum > epsilon_total_) {
      if (error) {
        *error = "window ending at t=" + std::to_string(e.t) + " spends " +
                 std::to_string(window_sum) + " > " +
                 std::to_string(epsilon_total_);
      }
      return false;
    }
  }
  return true;
}

DisUnits dis_units_from(double clamped_dis) {
  if (!(clamped_dis >= 0.0) || !std::isfinite(clamped_dis)) {
    throw std::invalid_argument("clamped dissimilarity must be >= 0");
  }
  return static_cast<DisUnits>(std::llround(clamped_dis / kDisResolution));
}

void OrderedDisSet::update(int n) {
  Node& node = pool_[static_cast<std::size_t>(n)];
  node.count = 1;
  node.sum = node.dis;
  if (node.left != -1) {
    node.count += pool_[static_cast<std::size_t>(node.left)].count;
    node.sum += pool_[static_cast<std::size_t>(node.left)].sum;
  }
  if (node.right != -1) {
    node.count += pool_[static_cast<std::size_t>(node.right)].count;
    node.sum += pool_[static_cast<std::size_t>(node.right)].sum;
  }
}

int OrderedDisSet::merge(int a, int b) {
  if (a == -1) return b;
  if (b == -1) return a;
  if (pool_[static_cast<std::size_t>(a)].priority >
      pool_[static_cast<std::size_t>(b)].priority) {
    pool_[static_cast<std::size_t>(a)].right =
        merge(pool_[static_cast<std::size_t>(a)].right, b);
    update(a);
    return a;
  }
  pool_[static_cast<std::size_t>(b)].left =
      merge(a, pool_[static_cast<std::size_t>(b)].left);
  update(b);
  return b;
}

void OrderedDisSet::split(int n, DisUnits dis, std::int64_t t, int& left,
                          int& right) {
  // left receives everything strictly before (dis, t) in descending order.
  if (n == -1) {
    left = right = -1;
    return;
  }
  Node& node = pool_[static_cast<std::size_t>(n)];
  if (key_less(node.dis, node.t, dis, t)) {
    split(node.right, dis, t, node.right, right);
    left = n;
    update(n);
  } else {
    split(node.left, dis, t, left, node.left);
    right = n;
    update(n);
  }
}

void OrderedDisSet::insert(DisUnits dis, std::int64_t t) {
  int idx;
  if (!free_.empty()) {
    idx = free_.back();
    free_.pop_back();
    pool_[static_cast<std::size_t>(idx)] = Node{};
  } else {
    idx = static_cast<int>(pool_.size());
    pool_.push_back(Node{});
  }
  Node& node = pool_[static_cast<std::size_t>(idx)];
  node.dis = dis;
  node.t = t;
  node.sum = dis;
  // Deterministic priority: the tree shape depends only on the contents.
  node.priority = mix64(static_cast<std::uint64_t>(dis) * 0x9e3779b97f4a7c15ULL ^
                        static_cast<std::uint64_t>(t));
  int left, right;
  split(root_, dis, t, left, right);
  root_ = merge(merge(left, idx), right);
}

void OrderedDisSet::erase(DisUnits dis, std::int64_t t) {
  // Split strictly-before | target | rest, drop the singleton in the middle.
  int left, mid_right, target, rest;
  split(root_, dis, t, left, mid_right);
  // Everything in mid_right sorts >= (dis, t); peel off the first element.
  if (mid_right == -1) throw std::logic_error("erase: key not found");
  // Split mid_right around the successor of (dis, t): elements equal to the
  // key come first; there can be only one (timestamps are unique).
  split(mid_right, dis, t + 1, target, rest);
  if (target == -1 || pool_[static_cast<std::size_t>(target)].count != 1 ||
      pool_[static_cast<std::size_t>(target)].dis != dis ||
      pool_[static_cast<std::size_t>(target)].t != t) {
    throw std::logic_error("erase: key not found");
  }
  free_.push_back(target);
  root_ = merge(left, rest);
}

int OrderedDisSet::rank(DisUnits dis, std::int64_t t) const {
  int n = root_;
  int before = 0;
  while (n != -1) {
    const Node& node = pool_[static_cast<std::size_t>(n)];
    if (node.dis == dis && node.t == t) {
      const int left_count =
          node.left == -1 ? 0 : pool_[static_cast<std::size_t>(node.left)].count;
      return before + left_count + 1;
    }
    if (key_less(node.dis, node.t, dis, t)) {
      const int left_count =
          node.left == -1 ? 0 : pool_[static_cast<std::size_t>(node.left)].count;
      before += left_count + 1;
      n = node.right;
    } else {
      n = node.left;
    }
  }
  throw std::logic_error("rank: key not found");
}

DissimilarityWindow::DissimilarityWindow(int w) : w_(w) {
  if (w < 1) throw std::invalid_argument("window width must be >= 1");
}

void DissimilarityWindow::push(std::int64_t t, double clamped_dis) {
  if (!fifo_.empty() && t <= fifo_.back().first) {
    throw std::invalid_argument("window timestamps must increase");
  }
  const DisUnits units = dis_units_from(clamped_dis);
  fifo_.emplace_back(t, units);
  sorted_.insert(units, t);
  while (!fifo_.empty() && fifo_.front().first <= t - w_) {
    sorted_.erase(fifo_.front().second, fifo_.front().first);
    fifo_.pop_front();
  }
}

std::int64_t DissimilarityWindow::last_t() const {
  if (fifo_.empty()) throw std::logic_error("empty window");
  return fifo_.back().first;
}

DisUnits DissimilarityWindow::last_dis_units() const {
  if (fifo_.empty()) throw std::logic_error("empty window");
  return fifo_.back().second;
}

std::vector<std::pair<DisUnits, std::int64_t>>
DissimilarityWindow::snapshot_descending() const {
  std::vector<std::pair<DisUnits, std::int64_t>> out;
  out.reserve(fifo_.size());
  for (const auto& [t, dis] : fifo_) out.emplace_back(dis, t);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.first > b.first || (a.first == b.first && a.second < b.second);
  });
  return out;
}

PublicationErrorTable PublicationErrorTable::build(double epsilon, int w) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (w < 1) throw std::invalid_argument("w must be >= 1");
  PublicationErrorTable t;
  t.epsilon = epsilon;
  t.w = w;
  t.base.assign(static_cast<std::size_t>(w) + 1, 0.0);
  for (int k = 1; k <= w; ++k) {
    const double x = epsilon / (2.0 * static_cast<double>(k));
    const double e = std::exp(x);
    t.base[static_cast<std::size_t>(k)] =
        static_cast<double>(k) * 4.0 * e / ((e - 1.0) * (e - 1.0));
  }
  // Discrete convexity makes first-ascent termination exact.
  t.convex = true;
  for (int k = 1; k + 1 <= w; ++k) {
    const double d_prev = t.base[static_cast<std::size_t>(k)] -
                          t.base[static_cast<std::size_t>(k - 1)];
    const double d_next = t.base[static_cast<std::size_t>(k + 1)] -
                          t.base[static_cast<std::size_t>(k)];
    if (d_next < d_prev) {
      t.convex = false;
      break;
    }
  }
  return t;
}

double cumulative_error(const std::vector<double>& sorted_desc, int k,
                        double epsilon, std::int64_t n_group) {
  const int w = static_cast<int>(sorted_desc.size());
  if (k < 0 || k > w) throw std::invalid_argument("k outside [0, w]");
  for (int i = 0; i + 1 < w; ++i) {
    if (sorted_desc[static_cast<std::size_t>(i)] <
        sorted_desc[static_cast<std::size_t>(i + 1)]) {
      throw std::invalid_argument("dissimilarities must be non-increasing");
    }
  }
  double err = 0.0;
  if (k > 0) {
    err += static_cast<double>(k) *
           oue_variance(epsilon / (2.0 * static_cast<double>(k)), n_group);
  }
  for (int i = k; i < w; ++i) err += sorted_desc[static_cast<std::size_t>(i)];
  return err;
}

namespace {

struct SearchResult {
  int k_star = 0;
  int evaluations = 0;
};

// Shared final step: whether t is among the k* largest, and the spend.
AllocationDecision finalize(const SearchResult& search,
                            const DissimilarityWindow& window,
                            BudgetNano epsilon_total, std::int64_t t,
                            BudgetNano remaining) {
  AllocationDecision d;
  d.k_star = search.k_star;
  d.evaluations = search.evaluations;
  d.eps2 = 0;
  if (search.k_star == 0) return d;
  const int rank = window.sorted_view().rank(window.last_dis_units(), t);
  if (rank > search.k_star) return d;
  const BudgetNano share =
      epsilon_total / (2 * static_cast<BudgetNano>(search.k_star));
  d.eps2 = std::max<BudgetNano>(0, std::min(remaining, share));
  return d;
}

void check_inputs(const DissimilarityWindow& window,
                  const PublicationErrorTable& table, std::int64_t t,
                  std::int64_t n_group) {
  if (!window.full()) {
    throw std::invalid_argument("allocator needs a full window of w records");
  }
  if (window.last_t() != t) {
    throw std::invalid_argument("window must end at the current timestamp");
  }
  if (table.w != window.w()) {
    throw std::invalid_argument("error table built for a different window");
  }
  if (n_group < 1) throw std::invalid_argument("group size must be >= 1");
}

}  // namespace

AllocationDecision oba_allocate(const DissimilarityWindow& window,
                                const PublicationErrorTable& table,
                                BudgetNano epsilon_total, std::int64_t t,
                                std::int64_t n_group,
                                BudgetNano remaining_publication) {
  check_inputs(window, table, t, n_group);
  const auto sorted = window.snapshot_descending();
  const int w = window.w();
  const double n = static_cast<double>(n_group);

  DisUnits total = 0;
  for (const auto& [dis, _] : sorted) total += dis;

  SearchResult search;
  double best = static_cast<double>(total) * kDisResolution;  // k = 0
  search.k_star = 0;
  search.evaluations = 1;
  DisUnits prefix = 0;
  for (int k = 1; k <= w; ++k) {
    prefix += sorted[static_cast<std::size_t>(k - 1)].first;
    const double score = table.base[static_cast<std::size_t>(k)] / n +
                         static_cast<double>(total - prefix) * kDisResolution;
    ++search.evaluations;
    if (score < best) {
      best = score;
      search.k_star = k;
    }
  }
  return finalize(search, window, epsilon_total, t, remaining_publication);
}

AllocationDecision oba_allocate_fast(const DissimilarityWindow& window,
                                     const PublicationErrorTable& table,
                                     BudgetNano epsilon_total, std::int64_t t,
                                     std::int64_t n_group,
                                     BudgetNano remaining_publication) {
  check_inputs(window, table, t, n_group);
  const int w = window.w();
  const double n = static_cast<double>(n_group);
  const DisUnits total = window.sorted_view().total();

  SearchResult search;
  double best = static_cast<double>(total) * kDisResolution;
  double prev = best;
  search.k_star = 0;
  search.evaluations = 1;

  int k = 0;
  DisUnits prefix = 0;
  window.sorted_view().scan_descending([&](DisUnits dis) {
    ++k;
    prefix += dis;
    const double score = table.base[static_cast<std::size_t>(k)] / n +
                         static_cast<double>(total - prefix) * kDisResolution;
    ++search.evaluations;
    if (score < best) {
      best = score;
      search.k_star = k;
    }
    // Once the score stops descending it can never dip below `best` again
    // (the publication term is discretely convex and the approximation term's
    // savings shrink with k), so stop scanning.
    const bool keep_going = !(table.convex && score > prev) && k < w;
    prev = score;
    return keep_going;
  });
  return finalize(search, window, epsilon_total, t, remaining_publication);
}

AllocationDecision oba_allocate_and_record(const DissimilarityWindow& window,
                                           const PublicationErrorTable& table,
                                           BudgetLedger& ledger, std::int64_t t,
                                           BudgetNano eps1, std::int64_t n_group,
                                           bool exact) {
  const BudgetNano remaining = ledger.remaining_publication(t);
  const AllocationDecision decision =
      exact ? oba_allocate(window, table, ledger.epsilon_total(), t, n_group,
                           remaining)
            : oba_allocate_fast(window, table, ledger.epsilon_total(), t,
                                n_group, remaining);
  LedgerEntry entry;
  entry.t = t;
  entry.eps1 = eps1;
  entry.eps2 = decision.eps2;
  entry.k_star = decision.k_star;
  entry.decision =
      decision.publish() ? Decision::kPublish : Decision::kApproximate;
  ledger.record(entry);
  return decision;
}

}  // namespace mtsp
