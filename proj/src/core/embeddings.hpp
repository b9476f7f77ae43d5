/**
 * Copyright 2026 The ironykit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "core/corpus.hpp"

namespace irony {

/// Word-embedding table in the plain-text interchange format
/// ("<count> <dim>" header, then "word v1 ... vdim" per line). Row order
/// follows the file, which by convention is most-frequent-first.
struct EmbeddingTable {
  int dim = 0;
  std::vector<std::string> words;
  std::unordered_map<std::string, int> index;
  Eigen::MatrixXd vectors;  // |vocab| x dim
  bool normalized = false;

  std::size_t size() const { return words.size(); }

  /// Exact match first, then a Latin-lowercased retry; nullopt means OOV.
  std::optional<int> find(const std::string& word) const;
  Eigen::VectorXd row(int i) const { return vectors.row(i); }
};

struct CoverageReport {
  double token_coverage = 0.0;
  double type_coverage = 0.0;
  std::int64_t n_tokens = 0;
  std::int64_t n_types = 0;
  /// OOV word types, most frequent first (ties lexicographic).
  std::vector<std::pair<std::string, std::int64_t>> oov_types;
};

/// max_vocab of 0 loads everything; otherwise the first max_vocab rows.
EmbeddingTable load_embeddings(const std::string& path,
                               std::int64_t max_vocab = 0);

void save_embeddings(const EmbeddingTable& table, const std::string& path);

/// Returns a unit-row copy; rejects zero-norm rows by word. Idempotent.
EmbeddingTable normalize(const EmbeddingTable& table);

/// Token/type coverage over word-like tokens (punctuation and emoticons are
/// excluded from both denominators).
CoverageReport coverage(const Dataset& ds, const EmbeddingTable& table);

std::string coverage_csv(const CoverageReport& report);

}  // namespace irony
