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

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "core/align.hpp"
#include "core/cnn.hpp"
#include "core/features.hpp"
#include "core/metrics.hpp"
#include "core/rf.hpp"

namespace irony {

enum class ModelFamily { rf_surface, rf_full, cnn_mono, cnn_crosslingual };

ModelFamily family_from_string(const std::string& s);
std::string to_string(ModelFamily f);

/// One train-and-evaluate configuration. Monolingual families require
/// train == test == one language; cross-lingual families keep the test
/// languages out of the training set. Multi-language test sets are
/// evaluated per language and pooled into a single confusion matrix.
struct ExperimentSpec {
  std::string name;
  ModelFamily family = ModelFamily::cnn_mono;
  std::vector<Lang> train_langs;
  std::vector<Lang> test_langs;
  std::uint64_t seed = 42;

  void validate() const;
};

/// The 8 cross-lingual configurations in table order:
/// ar->fr, fr->ar, ar->en, en->ar, fr->en, en->fr, (en,fr)->ar, ar->(en,fr).
std::vector<ExperimentSpec> crosslingual_matrix(ModelFamily family,
                                                std::uint64_t seed);

/// ar, fr, en monolingual rows for one family.
std::vector<ExperimentSpec> monolingual_matrix(ModelFamily family,
                                               std::uint64_t seed);

/// Everything an experiment may read, preloaded and shared (immutable, so
/// specs can run in parallel). Tables: `raw` for monolingual CNNs,
/// `normalized` for the test side of cross-lingual CNNs, `mapped[{src,tgt}]`
/// for training vectors already rotated into the test language's space.
struct PreparedResources {
  std::map<Lang, const Dataset*> train;
  /// Invoked only at evaluation time, once per test language.
  std::function<const Dataset&(Lang)> test_source;
  std::map<Lang, const EmbeddingTable*> raw;
  std::map<Lang, const EmbeddingTable*> normalized;
  std::map<std::pair<Lang, Lang>, const EmbeddingTable*> mapped;
  std::map<Lang, const LexiconSet*> lexicons;
  TrainConfig cnn_cfg;
  RfParams rf_params;
};

struct PredictionRow {
  std::string id;
  Label gold;
  Label pred;
  double p_ironic;
};

struct ExperimentResult {
  ExperimentSpec spec;
  ConfusionMatrix cm;
  Metrics metrics;
  std::vector<PredictionRow> predictions;
  std::vector<std::string> train_log;
};

/// Trains per the spec and evaluates on the untouched test set(s). The test
/// data is requested from resources.test_source only after training, so an
/// access-tracking wrapper can verify the test set is never read early.
ExperimentResult run_experiment(const ExperimentSpec& spec,
                                const PreparedResources& res);

std::string predictions_csv(const std::vector<PredictionRow>& rows);
std::string metrics_json(const ExperimentSpec& spec, const ConfusionMatrix& cm,
                         const Metrics& m);

/// Matrix file: JSON with resource paths and the experiment list (or one of
/// the generator shorthands). See the README for the schema.
struct MatrixConfig {
  std::uint64_t seed = 42;
  std::string lexicon_dir;
  /// empty = builtin defaults; "none" disables preprocessing.
  std::string preprocess;
  struct CorpusRef {
    std::string train_path;  // pre-split form
    std::string test_path;
    std::string file_path;  // single-file form, split by n_train/n_test
    std::int64_t n_train = 0;
    std::int64_t n_test = 0;
  };
  std::map<Lang, CorpusRef> corpora;
  std::map<Lang, std::string> embeddings;
  std::map<std::pair<Lang, Lang>, std::string> maps;
  std::int64_t max_vocab = 0;
  TrainConfig cnn_cfg;
  RfParams rf_params;
  std::vector<ExperimentSpec> specs;

  static MatrixConfig load(const std::string& path);
};

struct MatrixRunSummary {
  std::vector<ExperimentResult> results;  // matrix order
};

/// Loads resources, runs every spec (optionally with a thread pool), and
/// writes out_dir/<name>/{predictions.csv,metrics.json,train_log.txt} plus
/// out_dir/summary.csv. Artifacts are byte-stable for a fixed matrix file.
MatrixRunSummary run_matrix(const MatrixConfig& cfg, const std::string& out_dir,
                            int jobs);

std::string summary_csv(const MatrixRunSummary& summary);

/// Re-renders a results directory (summary.csv) as csv or an aligned text
/// table with A/P/R/F columns per configuration.
std::string render_report(const std::string& results_dir,
                          const std::string& format);

}  // namespace irony
