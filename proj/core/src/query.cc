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

#include "mtsp/query.h"

#include <algorithm>
#include <string>

namespace mtsp {

void ReleaseSeries::append(PrivateTree release) {
  if (!releases_.empty()) {
    if (release.t != last_t() + 1) {
      throw QueryError("releases must be appended contiguously: expected t=" +
                       std::to_string(last_t() + 1) + ", got t=" +
                       std::to_string(release.t));
    }
    if (release.domain.padded_size != domain().padded_size) {
      throw QueryError("release domain changed mid-series");
    }
  }
  releases_.push_back(std::move(release));
}

std::int64_t ReleaseSeries::first_t() const {
  if (releases_.empty()) throw QueryError("empty release series");
  return releases_.front().t;
}

std::int64_t ReleaseSeries::last_t() const {
  if (releases_.empty()) throw QueryError("empty release series");
  return releases_.back().t;
}

bool ReleaseSeries::contains(std::int64_t t) const {
  return !releases_.empty() && t >= first_t() && t <= last_t();
}

const PrivateTree& ReleaseSeries::at(std::int64_t t) const {
  if (!contains(t)) {
    throw QueryError("no release for t=" + std::to_string(t) +
                     (releases_.empty()
                          ? " (series is empty)"
                          : " (series covers [" + std::to_string(first_t()) +
                                ", " + std::to_string(last_t()) + "])"));
  }
  return releases_[static_cast<std::size_t>(t - first_t())];
}

const ValueDomain& ReleaseSeries::domain() const {
  if (releases_.empty()) throw QueryError("empty release series");
  return releases_.front().domain;
}

namespace {

void check_span(const ReleaseSeries& series, int delta, std::int64_t t) {
  if (delta < 1) throw QueryError("delta must be >= 1");
  if (!series.contains(t) || !series.contains(t - delta + 1)) {
    throw QueryError("series does not cover [" + std::to_string(t - delta + 1) +
                     ", " + std::to_string(t) + "]");
  }
}

}  // namespace

double counting_query(const ReleaseSeries& series, std::int64_t v, int delta,
                      std::int64_t t, bool clamp_output) {
  check_span(series, delta, t);
  const ValueDomain& dom = series.domain();
  if (v < 0 || v >= dom.size) throw QueryError("value outside domain");
  double sum = 0.0;
  for (std::int64_t tt = t - delta + 1; tt <= t; ++tt) {
    const PrivateTree& tree = series.at(tt);
    sum += tree.leaf(v).property * static_cast<double>(tree.n_active);
  }
  return clamp_output ? std::max(0.0, sum) : sum;
}

double range_query(const ReleaseSeries& series, std::int64_t v1,
                   std::int64_t v2, int delta, std::int64_t t,
                   bool clamp_output) {
  check_span(series, delta, t);
  const std::vector<NodeRef> cover = minimum_cover(series.domain(), v1, v2);
  double sum = 0.0;
  for (std::int64_t tt = t - delta + 1; tt <= t; ++tt) {
    const PrivateTree& tree = series.at(tt);
    sum += tree_answer(tree, cover) * static_cast<double>(tree.n_active);
  }
  return clamp_output ? std::max(0.0, sum) : sum;
}

MonitorResult monitor(const ReleaseSeries& series, const MonitorSpec& spec,
                      std::int64_t t) {
  if (spec.value.has_value() == spec.range.has_value()) {
    throw QueryError("monitor needs exactly one of value/range");
  }
  if (spec.delta < 1 || spec.lag < 1) {
    throw QueryError("monitor delta and lag must be >= 1");
  }
  MonitorResult result;
  if (series.empty() || !series.contains(t) ||
      t - spec.lag - spec.delta + 1 < series.first_t()) {
    return result;  // not ready
  }
  const auto base = [&](std::int64_t at) {
    if (spec.value) {
      return counting_query(series, *spec.value, spec.delta, at);
    }
    return range_query(series, spec.range->first, spec.range->second,
                       spec.delta, at);
  };
  result.ready = true;
  result.statistic = base(t) - base(t - spec.lag);
  result.signal = result.statistic > spec.threshold ? 1 : 0;
  return result;
}

}  // namespace mtsp
