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

#ifndef MTSP_BUDGET_H_
#define MTSP_BUDGET_H_

#include <cstdint>
#include <deque>
#include <string>
#include <vector>

namespace mtsp {

// Privacy budget in integer nano-epsilon units. All recorded spends are
// floor-quantized to this grid and the mechanisms consume exactly the
// recorded amount, so the sliding-window audit is an equality-grade integer
// assertion with no floating-point slack.
using BudgetNano = std::int64_t;
inline constexpr BudgetNano kNanoPerEpsilon = 1'000'000'000;

BudgetNano nano_from_epsilon(double epsilon);
double epsilon_from_nano(BudgetNano nano);

enum class Decision { kWarmup, kPublish, kApproximate };
const char* to_string(Decision d);
Decision decision_from_string(const std::string& s);

struct LedgerEntry {
  std::int64_t t = 0;
  BudgetNano eps1 = 0;  // dissimilarity-estimation spend
  BudgetNano eps2 = 0;  // publication spend
  int k_star = 0;       // allocator's k*, 0 when not applicable
  Decision decision = Decision::kApproximate;
};

// Append-only per-timestamp spend record with the hard w-event invariant:
// the total spend of every w-length window never exceeds epsilon. record()
// throws std::logic_error if an append would break it — that path must be
// unreachable from any mechanism.
class BudgetLedger {
 public:
  BudgetLedger(BudgetNano epsilon_total, int w);

  // Entries must arrive with consecutive timestamps starting at 1.
  void record(const LedgerEntry& entry);

  // Publication budget still free in the window that ends at t, i.e.
  // epsilon/2 minus the eps2 spends at timestamps [t-w+1, t-1]. Never
  // negative. Valid to call before recording timestamp t.
  BudgetNano remaining_publication(std::int64_t t) const;

  // Exact re-check of every window; also validates non-negative spends.
  bool audit(std::string* error = nullptr) const;

  const std::vector<LedgerEntry>& entries() const { return entries_; }
  BudgetNano epsilon_total() const { return epsilon_total_; }
  int window() const { return w_; }
  std::int64_t size() const { return static_cast<std::int64_t>(entries_.size()); }

 private:
  BudgetNano epsilon_total_;
  int w_;
  std::vector<LedgerEntry> entries_;
  // prefix_total_[i] = sum of (eps1+eps2) over entries [0, i);
  // prefix_pub_[i] = sum of eps2 over entries [0, i).
  std::vector<BudgetNano> prefix_total_;
  std::vector<BudgetNano> prefix_pub_;
};

// Clamped dissimilarities are quantized to this fixed-point grid inside the
// planning window so that suffix sums are integers: both allocator
// implementations then compute bit-identical error scores regardless of
// summation order.
using DisUnits = std::int64_t;
inline constexpr double kDisResolution = 0x1p-40;
DisUnits dis_units_from(double clamped_dis);

// Order-statistic multiset over (dissimilarity desc, timestamp asc) with
// subtree counts and sums: O(log n) insert/erase/rank, O(k) iteration of the
// top k. Deterministic shape (priorities are hashed from keys).
class OrderedDisSet {
 public:
  void insert(DisUnits dis, std::int64_t t);
  void erase(DisUnits dis, std::int64_t t);  // throws if absent
  int size() const { return root_ == -1 ? 0 : pool_[root_].count; }
  DisUnits total() const { return root_ == -1 ? 0 : pool_[root_].sum; }
  // 1-based position of the key in descending order; throws if absent.
  int rank(DisUnits dis, std::int64_t t) const;
  // Calls visit(dis) for elements in descending order while it returns true.
  template <typename F>
  void scan_descending(F&& visit) const {
    scan_recurse(root_, visit);
  }

 private:
  struct Node {
    DisUnits dis;
    std::int64_t t;
    std::uint64_t priority;
    int left = -1, right = -1;
    int count = 1;
    DisUnits sum;
  };
  // true when a sorts strictly before b in descending-dis order
  static bool key_less(DisUnits a_dis, std::int64_t a_t, DisUnits b_dis,
                       std::int64_t b_t) {
    return a_dis > b_dis || (a_dis == b_dis && a_t < b_t);
  }
  void update(int n);
  int merge(int a, int b);
  void split(int n, DisUnits dis, std::int64_t t, int& left, int& right);
  template <typename F>
  bool scan_recurse(int n, F&& visit) const {
    if (n == -1) return true;
    if (!scan_recurse(pool_[n].left, visit)) return false;
    if (!visit(pool_[n].dis)) return false;
    return scan_recurse(pool_[n].right, visit);
  }

  std::vector<Node> pool_;
  std::vector<int> free_;
  int root_ = -1;
};

// Sliding window of the w most recent per-timestamp dissimilarities, stored
// quantized, with both FIFO and sorted access.
class DissimilarityWindow {
 public:
  explicit DissimilarityWindow(int w);

  // t must be strictly increasing; entries older than t-w+1 are evicted.
  void push(std::int64_t t, double clamped_dis);
  int w() const { return w_; }
  int size() const { return static_cast<int>(fifo_.size()); }
  bool full() const { return size() == w_; }
  std::int64_t last_t() const;
  DisUnits last_dis_units() const;

  // (dis, t) pairs in descending-dis order (ties: earlier t first).
  std::vector<std::pair<DisUnits, std::int64_t>> snapshot_descending() const;
  const OrderedDisSet& sorted_view() const { return sorted_; }

 private:
  int w_;
  std::deque<std::pair<std::int64_t, DisUnits>> fifo_;  // (t, dis)
  OrderedDisSet sorted_;
};

// k * oue_variance(eps/(2k), 1) for k in 1..w, precomputed once per
// (epsilon, w); divide by the group size at use. `convex` records whether
// increments are non-decreasing, which is what makes the early-stopping
// search exact; it holds for every epsilon (checked defensively).
struct PublicationErrorTable {
  double epsilon = 0.0;
  int w = 0;
  std::vector<double> base;  // index k; base[0] = 0
  bool convex = false;

  static PublicationErrorTable build(double epsilon, int w);
};

// Planning score: publishing on the k largest of the window's
// dissimilarities costs k * var(eps/(2k), n_group) of fresh-estimate error
// plus the approximation error sum of the remaining w-k entries.
// sorted_desc must be non-increasing; k in [0, w].
double cumulative_error(const std::vector<double>& sorted_desc, int k,
                        double epsilon, std::int64_t n_group);

struct AllocationDecision {
  int k_star = 0;
  BudgetNano eps2 = 0;  // 0 => approximate this timestamp
  int evaluations = 0;  // error-score evaluations performed
  bool publish() const { return eps2 > 0; }
};

// Reference allocator: full enumeration of k = 0..w over a fresh sort.
AllocationDecision oba_allocate(const DissimilarityWindow& window,
                                const PublicationErrorTable& table,
                                BudgetNano epsilon_total, std::int64_t t,
                                std::int64_t n_group,
                                BudgetNano remaining_publication);

// Optimized allocator: incremental sorted view, precomputed error table and
// early termination at the first strict ascent of the score. Produces
// exactly the same decision as oba_allocate in O(log w + k*) expected time.
AllocationDecision oba_allocate_fast(const DissimilarityWindow& window,
                                     const PublicationErrorTable& table,
                                     BudgetNano epsilon_total, std::int64_t t,
                                     std::int64_t n_group,
                                     BudgetNano remaining_publication);

// Pipeline entry point: picks the implementation, draws the remaining budget
// from the ledger and records the (eps1, eps2) row before returning.
AllocationDecision oba_allocate_and_record(const DissimilarityWindow& window,
                                           const PublicationErrorTable& table,
                                           BudgetLedger& ledger, std::int64_t t,
                                           BudgetNano eps1, std::int64_t n_group,
                                           bool exact);

}  // namespace mtsp

#endif  // MTSP_BUDGET_H_
