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

#ifndef MTSP_INGEST_H_
#define MTSP_INGEST_H_

#include <cstdint>
#include <string>

#include "mtsp/domain.h"

namespace mtsp {

// Column mapping and preprocessing for CSV ingestion.
struct CsvSchema {
  std::string ts_col = "timestamp";   // integer timestamps (e.g. day index)
  std::string user_col = "user";      // opaque user ids
  std::string value_col = "value";    // categorical values

  // When > 0, rows whose numeric value exceeds this quantile of the observed
  // values are dropped before dictionary encoding (requires numeric values).
  double trim_quantile = 0.0;
  // Per-timestamp cap on user events; batches above it are subsampled with
  // `subsample_seed`. 0 disables the cap.
  std::int64_t per_timestamp_cap = 100000;
  std::uint64_t subsample_seed = 0;
};

// Reads a CSV file with a header row into a stream dataset:
//   - timestamps are normalized to a contiguous 1-based span; empty
//     timestamps inside the span become empty batches;
//   - values and users are dictionary-encoded (first-occurrence order);
//   - for duplicate (timestamp, user) pairs the last row wins.
// Throws std::runtime_error with the offending row number on malformed input.
StreamDataset ingest_csv(const std::string& path, const CsvSchema& schema);

}  // namespace mtsp

#endif  // MTSP_INGEST_H_
