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

#include "mtsp/synth.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "mtsp/rng.h"

namespace mtsp {
namespace {

constexpr std::uint64_t kSynthTag = 0x5359;  // substream namespace

std::vector<double> base_distribution(const GeneratorSpec& spec) {
  const auto d = static_cast<std::size_t>(spec.domain_size);
  std::vector<double> w(d, 0.0);
  switch (spec.base_kind) {
    case GeneratorSpec::BaseKind::kUniform:
      std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(d));
      break;
    case GeneratorSpec::BaseKind::kZipf: {
      double total = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        w[j] = 1.0 / std::pow(static_cast<double>(j + 1), spec.zipf_s);
        total += w[j];
      }
      for (double& x : w) x /= total;
      break;
    }
    case GeneratorSpec::BaseKind::kWeights: {
      if (spec.base_weights.size() != d) {
        throw std::invalid_argument("base weights length != domain size");
      }
      double total = 0.0;
      for (double x : spec.base_weights) {
        if (x < 0) throw std::invalid_argument("negative base weight");
        total += x;
      }
      if (total <= 0) throw std::invalid_argument("base weights sum to zero");
      for (std::size_t j = 0; j < d; ++j) w[j] = spec.base_weights[j] / total;
      break;
    }
  }
  return w;
}

void apply_drift(std::vector<double>& w, double rate) {
  if (rate <= 0) return;
  const std::size_t d = w.size();
  std::vector<double> next(d);
  for (std::size_t j = 0; j < d; ++j) {
    next[(j + 1) % d] = rate * w[j];
  }
  for (std::size_t j = 0; j < d; ++j) {
    next[j] += (1.0 - rate) * w[j];
  }
  w.swap(next);
}

void apply_change(std::vector<double>& w, std::int64_t& users,
                  const GeneratorSpec::Change& c) {
  const auto idx_ok = [&](std::int64_t i) {
    return i >= 0 && i < static_cast<std::int64_t>(w.size());
  };
  switch (c.kind) {
    case GeneratorSpec::Change::Kind::kSwap:
      if (!idx_ok(c.a) || !idx_ok(c.b)) {
        throw std::invalid_argument("swap change indices out of domain");
      }
      std::swap(w[static_cast<std::size_t>(c.a)],
                w[static_cast<std::size_t>(c.b)]);
      break;
    case GeneratorSpec::Change::Kind::kShift: {
      if (!idx_ok(c.a) || !idx_ok(c.b)) {
        throw std::invalid_argument("shift change indices out of domain");
      }
      double& from = w[static_cast<std::size_t>(c.a)];
      double moved = std::min(c.mass, from);
      from -= moved;
      w[static_cast<std::size_t>(c.b)] += moved;
      break;
    }
    case GeneratorSpec::Change::Kind::kScaleUsers:
      users = static_cast<std::int64_t>(
          std::llround(static_cast<double>(users) * c.factor));
      if (users < 0) users = 0;
      break;
  }
}

GeneratorSpec::Change change_from_json(const nlohmann::json& j) {
  GeneratorSpec::Change c;
  c.t = j.at("t").get<std::int64_t>();
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "swap") {
    c.kind = GeneratorSpec::Change::Kind::kSwap;
    c.a = j.at("a").get<std::int64_t>();
    c.b = j.at("b").get<std::int64_t>();
  } else if (kind == "shift") {
    c.kind = GeneratorSpec::Change::Kind::kShift;
    c.a = j.at("a").get<std::int64_t>();
    c.b = j.at("b").get<std::int64_t>();
    c.mass = j.at("mass").get<double>();
  } else if (kind == "scale_users") {
    c.kind = GeneratorSpec::Change::Kind::kScaleUsers;
    c.factor = j.at("factor").get<double>();
  } else {
    throw std::invalid_argument("unknown change kind: " + kind);
  }
  return c;
}

}  // namespace

GeneratorSpec GeneratorSpec::from_json(const nlohmann::json& j) {
  GeneratorSpec s;
  s.domain_size = j.at("domain").get<std::int64_t>();
  s.timestamps = j.at("timestamps").get<std::int64_t>();
  s.users_per_timestamp = j.at("users_per_timestamp").get<std::int64_t>();
  if (j.contains("base")) {
    const nlohmann::json& b = j.at("base");
    const std::string kind = b.at("kind").get<std::string>();
    if (kind == "uniform") {
      s.base_kind = BaseKind::kUniform;
    } else if (kind == "zipf") {
      s.base_kind = BaseKind::kZipf;
      s.zipf_s = b.at("s").get<double>();
    } else if (kind == "weights") {
      s.base_kind = BaseKind::kWeights;
      s.base_weights = b.at("weights").get<std::vector<double>>();
    } else {
      throw std::invalid_argument("unknown base kind: " + kind);
    }
  }
  s.drift = j.value("drift", 0.0);
  if (j.contains("changes")) {
    for (const nlohmann::json& cj : j.at("changes")) {
      s.changes.push_back(change_from_json(cj));
    }
  }
  s.seed = j.value("seed", std::uint64_t{0});
  if (s.domain_size < 1) throw std::invalid_argument("domain must be >= 1");
  if (s.timestamps < 1) throw std::invalid_argument("timestamps must be >= 1");
  if (s.users_per_timestamp < 0) {
    throw std::invalid_argument("users_per_timestamp must be >= 0");
  }
  if (s.drift < 0 || s.drift >= 1) {
    throw std::invalid_argument("drift must be in [0, 1)");
  }
  return s;
}

GeneratorSpec GeneratorSpec::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open generator spec: " + path);
  nlohmann::json j;
  in >> j;
  return from_json(j);
}

StreamDataset synthesize_stream(const GeneratorSpec& spec, SynthTruth* truth) {
  StreamDataset ds;
  ds.domain = ValueDomain::of(spec.domain_size);
  ds.value_labels.reserve(static_cast<std::size_t>(spec.domain_size));
  for (std::int64_t j = 0; j < spec.domain_size; ++j) {
    ds.value_labels.push_back("v" + std::to_string(j));
  }

  std::vector<double> weights = base_distribution(spec);
  std::int64_t users = spec.users_per_timestamp;
  std::size_t next_change = 0;
  std::vector<GeneratorSpec::Change> changes = spec.changes;
  std::stable_sort(changes.begin(), changes.end(),
                   [](const auto& x, const auto& y) { return x.t < y.t; });

  ds.batches.reserve(static_cast<std::size_t>(spec.timestamps));
  if (truth) {
    truth->weights.clear();
    truth->users.clear();
  }
  for (std::int64_t t = 1; t <= spec.timestamps; ++t) {
    if (t > 1) apply_drift(weights, spec.drift);
    while (next_change < changes.size() && changes[next_change].t == t) {
      apply_change(weights, users, changes[next_change]);
      ++next_change;
    }
    if (truth) {
      truth->weights.push_back(weights);
      truth->users.push_back(users);
    }

    StreamBatch batch;
    batch.t = t;
    batch.reports.resize(static_cast<std::size_t>(users));
    std::mt19937_64 rng =
        make_rng(spec.seed, {kSynthTag, static_cast<std::uint64_t>(t)});
    std::discrete_distribution<std::int32_t> pick(weights.begin(),
                                                  weights.end());
    for (std::int64_t u = 0; u < users; ++u) {
      batch.reports[static_cast<std::size_t>(u)] = Report{u, pick(rng)};
    }
    ds.batches.push_back(std::move(batch));
  }
  return ds;
}

}  // namespace mtsp
