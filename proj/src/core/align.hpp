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
#include <vector>

#include "core/embeddings.hpp"

namespace irony {

struct BilingualDictionary {
  std::vector<std::pair<std::string, std::string>> pairs;

  /// One pair per line, "source<TAB>target".
  static BilingualDictionary load(const std::string& path);
};

/// Orthogonal source-to-target mapping. Orthogonality is enforced whenever
/// a map is constructed (fit or load): ||W W^T - I||_F <= 1e-8.
struct LinearMap {
  Eigen::MatrixXd W;  // dim x dim
  std::string src_lang;
  std::string tgt_lang;
  int n_pairs_used = 0;
  double residual = 0.0;  // ||W X - Y||_F over the pairs used to fit

  int dim() const { return static_cast<int>(W.rows()); }
  double orthogonality_error() const;
};

void check_orthogonal(const Eigen::MatrixXd& W);

/// Solves min ||W X - Y||_F over orthogonal W by the closed form
/// W = U V^T with U S V^T = svd(Y X^T); X and Y column-stack the dictionary
/// pairs' source and target vectors. Both tables must be unit-normalized.
/// Pairs with an out-of-vocabulary side are filtered (count reported via a
/// warning); repeated source words are all kept.
LinearMap fit_procrustes(const EmbeddingTable& src, const EmbeddingTable& tgt,
                         const BilingualDictionary& dict);

/// Applies W to every row and re-normalizes.
EmbeddingTable map_table(const EmbeddingTable& src, const LinearMap& m);

struct CslsConfig {
  int k = 10;
  /// r_S is computed over the first source_sample mapped-source rows
  /// (file order, i.e. by frequency); 0 means the spec default of 50000.
  std::int64_t source_sample = 0;
};

/// CSLS ranking: score(x, y) = 2 cos(x, y) - r_T(x) - r_S(y), where r_T(x)
/// is the mean cosine from x to its k nearest target rows and r_S(y) the
/// mean cosine from target row y to its k nearest mapped-source rows. The
/// r_S terms are precomputed once at construction. Ties break on the word,
/// lexicographically, so rankings are reproducible under any parallelism.
class CslsIndex {
 public:
  CslsIndex(const EmbeddingTable& mapped_src, const EmbeddingTable& tgt,
            CslsConfig cfg);

  std::vector<std::pair<std::string, double>> neighbors(
      const Eigen::VectorXd& query, int top_n) const;

  int k() const { return k_; }

 private:
  const EmbeddingTable& tgt_;
  int k_;
  Eigen::VectorXd r_src_;  // r_S per target row
};

std::vector<std::pair<std::string, double>> csls_neighbors(
    const Eigen::VectorXd& query, const EmbeddingTable& mapped_src,
    const EmbeddingTable& tgt, const CslsConfig& cfg, int top_n);

struct RefineResult {
  LinearMap map;
  std::vector<double> residuals;  // per round, over that round's induced pairs
  std::vector<int> induced_pairs;
};

/// Iterative refinement: each round induces a synthetic dictionary from
/// mutual CSLS nearest neighbors over the top-frequency vocabulary slice
/// (at most vocab_slice words per side), refits Procrustes from scratch,
/// and records the residual. Stops early with a warning if the induced
/// dictionary comes back empty.
RefineResult refine(const EmbeddingTable& src, const EmbeddingTable& tgt,
                    const LinearMap& start, int rounds,
                    const CslsConfig& cfg = {}, std::int64_t vocab_slice = 5000);

void save_map(const LinearMap& m, const std::string& path);
LinearMap load_map(const std::string& path);

}  // namespace irony
