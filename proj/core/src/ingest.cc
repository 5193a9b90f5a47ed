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

#include "mtsp/ingest.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "mtsp/rng.h"

namespace mtsp {
namespace {

// Reads one CSV record (RFC-4180 quoting, possibly spanning multiple lines).
// Returns nullopt at end of input.
std::optional<std::vector<std::string>> read_record(std::istream& in) {
  std::vector<std::string> fields;
  std::string field;
  bool in_quotes = false;
  bool saw_any = false;
  int ch;
  while ((ch = in.get()) != EOF) {
    saw_any = true;
    const char c = static_cast<char>(ch);
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          field.push_back('"');
          in.get();
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      break;
    } else if (c == '\r') {
      if (in.peek() == '\n') in.get();
      break;
    } else {
      field.push_back(c);
    }
  }
  if (!saw_any) return std::nullopt;
  if (in_quotes) throw std::runtime_error("unterminated quoted CSV field");
  fields.push_back(std::move(field));
  return fields;
}

std::int64_t parse_int(const std::string& s, std::size_t row) {
  std::int64_t v = 0;
  const char* b = s.data();
  const char* e = b + s.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e) {
    throw std::runtime_error("row " + std::to_string(row) +
                             ": expected integer, got '" + s + "'");
  }
  return v;
}

struct RawRow {
  std::int64_t ts;
  std::string user;
  std::string value;
};

}  // namespace

StreamDataset ingest_csv(const std::string& path, const CsvSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open CSV file: " + path);

  auto header = read_record(in);
  if (!header) throw std::runtime_error("empty CSV file: " + path);
  int ts_idx = -1, user_idx = -1, value_idx = -1;
  for (std::size_t i = 0; i < header->size(); ++i) {
    const std::string& name = (*header)[i];
    if (name == schema.ts_col) ts_idx = static_cast<int>(i);
    if (name == schema.user_col) user_idx = static_cast<int>(i);
    if (name == schema.value_col) value_idx = static_cast<int>(i);
  }
  if (ts_idx < 0 || user_idx < 0 || value_idx < 0) {
    throw std::runtime_error("CSV header missing required columns (" +
                             schema.ts_col + ", " + schema.user_col + ", " +
                             schema.value_col + ")");
  }

  std::vector<RawRow> rows;
  std::size_t row_no = 1;
  while (auto rec = read_record(in)) {
    ++row_no;
    if (rec->size() == 1 && (*rec)[0].empty()) continue;  // trailing newline
    if (rec->size() != header->size()) {
      throw std::runtime_error("row " + std::to_string(row_no) +
                               ": expected " + std::to_string(header->size()) +
                               " fields, got " + std::to_string(rec->size()));
    }
    RawRow r;
    r.ts = parse_int((*rec)[static_cast<std::size_t>(ts_idx)], row_no);
    r.user = std::move((*rec)[static_cast<std::size_t>(user_idx)]);
    r.value = std::move((*rec)[static_cast<std::size_t>(value_idx)]);
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw std::runtime_error("CSV has no data rows: " + path);

  if (schema.trim_quantile > 0.0) {
    if (schema.trim_quantile >= 1.0) {
      throw std::invalid_argument("trim quantile must be in (0, 1)");
    }
    std::vector<double> nums(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      try {
        nums[i] = std::stod(rows[i].value);
      } catch (const std::exception&) {
        throw std::runtime_error(
            "trimming requires numeric values; offending value '" +
            rows[i].value + "'");
      }
    }
    std::vector<double> sorted = nums;
    std::sort(sorted.begin(), sorted.end());
    // Nearest-rank quantile.
    const auto rank = static_cast<std::size_t>(
        std::min<double>(static_cast<double>(sorted.size()) - 1,
                         schema.trim_quantile * static_cast<double>(sorted.size())));
    const double cutoff = sorted[rank];
    std::vector<RawRow> kept;
    kept.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (nums[i] <= cutoff) kept.push_back(std::move(rows[i]));
    }
    rows.swap(kept);
  }

  std::unordered_map<std::string, std::int32_t> value_ids;
  std::unordered_map<std::string, std::int64_t> user_ids;
  std::vector<std::string> value_labels;
  // (ts -> user -> value); later rows overwrite earlier ones (last wins).
  std::map<std::int64_t, std::unordered_map<std::int64_t, std::int32_t>> by_ts;
  for (const RawRow& r : rows) {
    auto [vit, vnew] = value_ids.try_emplace(
        r.value, static_cast<std::int32_t>(value_ids.size()));
    if (vnew) value_labels.push_back(r.value);
    auto [uit, _] = user_ids.try_emplace(
        r.user, static_cast<std::int64_t>(user_ids.size()));
    by_ts[r.ts][uit->second] = vit->second;
  }

  StreamDataset ds;
  ds.domain = ValueDomain::of(static_cast<std::int64_t>(value_labels.size()));
  ds.value_labels = std::move(value_labels);

  const std::int64_t ts_min = by_ts.begin()->first;
  const std::int64_t ts_max = by_ts.rbegin()->first;
  ds.batches.reserve(static_cast<std::size_t>(ts_max - ts_min + 1));
  for (std::int64_t ts = ts_min; ts <= ts_max; ++ts) {
    StreamBatch batch;
    batch.t = ts - ts_min + 1;
    auto it = by_ts.find(ts);
    if (it != by_ts.end()) {
      batch.reports.reserve(it->second.size());
      for (const auto& [user, value] : it->second) {
        batch.reports.push_back(Report{user, value});
      }
      // Hash-map order is unspecified; fix it for reproducibility.
      std::sort(batch.reports.begin(), batch.reports.end(),
                [](const Report& a, const Report& b) { return a.user < b.user; });
      if (schema.per_timestamp_cap > 0 &&
          batch.size() > schema.per_timestamp_cap) {
        std::mt19937_64 rng = make_rng(schema.subsample_seed,
                                       {0xCA9, static_cast<std::uint64_t>(batch.t)});
        std::shuffle(batch.reports.begin(), batch.reports.end(), rng);
        batch.reports.resize(static_cast<std::size_t>(schema.per_timestamp_cap));
        std::sort(batch.reports.begin(), batch.reports.end(),
                  [](const Report& a, const Report& b) { return a.user < b.user; });
      }
    }
    ds.batches.push_back(std::move(batch));
  }
  return ds;
}

}  // namespace mtsp
