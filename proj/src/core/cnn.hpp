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
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "core/corpus.hpp"
#include "core/embeddings.hpp"

namespace irony {

struct TrainConfig {
  int epochs = 10;
  int batch_size = 32;
  double learning_rate = 1e-3;
  double dropout = 0.5;
  std::vector<int> widths = {3, 4, 5};
  int n_filters = 100;
  int max_seq_len = 40;
  /// 0 disables early stopping (the final model is returned instead of the
  /// best-validation checkpoint).
  int early_stop_patience = 5;
  /// Fraction of the training set held out for validation; 0 is allowed
  /// only with early stopping disabled.
  double val_fraction = 0.2;
  bool stratify_val = true;
  std::uint64_t seed = 42;

  void validate() const;
  static TrainConfig from_json(const std::string& json_text);
  std::string to_json() const;
};

/// Word-level CNN for binary classification: embedding lookup, parallel
/// banks of width-w filters with valid convolution over time, ReLU,
/// max-over-time pooling, dropout, and a softmax output pair.
///
/// Embedding row layout: row 0 is the padding token (pinned to zero, never
/// updated), rows 1..V the training vocabulary, row V+1 the shared trainable
/// unknown vector. Vocabulary keys are "<lang>:<lowercased word>" so that
/// mixed-language training sets never collide across languages.
struct CnnModel {
  int dim = 0;
  int max_seq_len = 0;
  std::vector<int> widths;
  int n_filters = 0;
  std::vector<std::string> vocab;
  std::unordered_map<std::string, int> vindex;  // key -> row in [1, V]
  Eigen::MatrixXd emb;                          // (V+2) x dim
  std::vector<Eigen::MatrixXd> kernels;         // per width: n_filters x (w*dim)
  std::vector<Eigen::VectorXd> kbias;           // per width: n_filters
  Eigen::MatrixXd dense_w;                      // 2 x total_filters
  Eigen::Vector2d dense_b;
  std::uint64_t seed = 0;

  int pad_row() const { return 0; }
  int unk_row() const { return static_cast<int>(vocab.size()) + 1; }
  int total_filters() const {
    return n_filters * static_cast<int>(widths.size());
  }
  std::uint64_t vocab_hash() const;
};

struct CnnGradients {
  std::map<int, Eigen::RowVectorXd> demb;  // touched rows only
  std::vector<Eigen::MatrixXd> dkernels;
  std::vector<Eigen::VectorXd> dkbias;
  Eigen::MatrixXd ddense_w;
  Eigen::Vector2d ddense_b;
};

struct CnnTrainResult {
  CnnModel model;
  std::vector<std::string> log;  // one line per epoch
  double best_val_macro_f = 0.0;
  int epochs_run = 0;
  std::size_t n_train = 0;
  std::size_t n_val = 0;
};

/// Per-language embedding sources for mixed-language training sets (each
/// tweet's tokens resolve against its own language's table, e.g. tables
/// already mapped into a common space).
using TableMap = std::map<Lang, const EmbeddingTable*>;

/// Builds the model skeleton: vocabulary from the dataset's tokens that are
/// present in the table, embedding rows copied from the table, the unknown
/// row initialized to the mean of the in-vocabulary rows, filters and dense
/// layer seeded uniform.
CnnModel cnn_init(const Dataset& ds, const EmbeddingTable& table,
                  const TrainConfig& cfg);
CnnModel cnn_init(const Dataset& ds, const TableMap& tables,
                  const TrainConfig& cfg);

/// Index sequence for a tweet, padded/truncated to max_seq_len. Every token
/// participates; tokens without a vocabulary row map to the unknown row.
std::vector<int> cnn_encode(const CnnModel& model, const Tweet& tweet);

/// Forward pass from row indices. Returns the 2-class probability vector
/// (components sum to 1; index 1 is "ironic").
Eigen::Vector2d cnn_forward(const CnnModel& model,
                            const std::vector<int>& rows);

/// Mean cross-entropy over a batch (no dropout), used by training, the
/// gradient computation, and the finite-difference tests.
double cnn_batch_loss(const CnnModel& model,
                      const std::vector<std::vector<int>>& batch,
                      const std::vector<Label>& labels);

/// Exact gradients of cnn_batch_loss for every parameter group. Only the
/// embedding rows present in the batch appear in demb; the padding row is
/// never included. Any non-finite gradient is a hard failure naming the
/// parameter group.
CnnGradients cnn_batch_gradients(const CnnModel& model,
                                 const std::vector<std::vector<int>>& batch,
                                 const std::vector<Label>& labels);

/// Mini-batch Adam with dropout and early stopping on validation macro-F.
/// Deterministic for a fixed config (single-threaded, fixed order).
CnnTrainResult cnn_train(const Dataset& ds, const EmbeddingTable& table,
                         const TrainConfig& cfg);
CnnTrainResult cnn_train(const Dataset& ds, const TableMap& tables,
                         const TrainConfig& cfg);

struct CnnPrediction {
  Label label;
  double p_ironic;
};

/// Lookup order per token: model vocabulary (fine-tuned row), then the
/// optional fallback table (static vector, e.g. the test language's mapped
/// space), then the unknown row.
std::vector<CnnPrediction> cnn_predict(const CnnModel& model,
                                       const Dataset& ds,
                                       const EmbeddingTable* fallback);

std::string cnn_serialize(const CnnModel& model);
CnnModel cnn_deserialize(const std::string& text);

}  // namespace irony
