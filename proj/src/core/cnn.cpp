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
#include "core/cnn.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "core/common.hpp"
#include "core/metrics.hpp"
#include "core/tokenizer.hpp"
#include "core/utf8.hpp"

namespace irony {

void TrainConfig::validate() const {
  if (epochs < 1 || batch_size < 1 || n_filters < 1 || max_seq_len < 1) {
    fail(ErrorCode::invalid_argument, "train config: positive sizes required");
  }
  if (learning_rate <= 0.0) {
    fail(ErrorCode::invalid_argument, "train config: learning_rate must be > 0");
  }
  if (dropout < 0.0 || dropout >= 1.0) {
    fail(ErrorCode::invalid_argument, "train config: dropout must be in [0, 1)");
  }
  if (widths.empty()) {
    fail(ErrorCode::invalid_argument, "train config: at least one filter width");
  }
  for (int w : widths) {
    if (w < 1 || w > max_seq_len) {
      fail(ErrorCode::invalid_argument,
           "train config: filter width " + std::to_string(w) +
               " out of range for max_seq_len " + std::to_string(max_seq_len));
    }
  }
  if (early_stop_patience < 0) {
    fail(ErrorCode::invalid_argument, "train config: negative patience");
  }
  if (val_fraction < 0.0 || val_fraction >= 1.0) {
    fail(ErrorCode::invalid_argument,
         "train config: val_fraction must be in [0, 1)");
  }
  if (val_fraction == 0.0 && early_stop_patience > 0) {
    fail(ErrorCode::invalid_argument,
         "train config: early stopping needs a validation split "
         "(val_fraction > 0)");
  }
}

TrainConfig TrainConfig::from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::format, std::string("train config: ") + e.what());
  }
  TrainConfig cfg;
  cfg.epochs = j.value("epochs", cfg.epochs);
  cfg.batch_size = j.value("batch_size", cfg.batch_size);
  cfg.learning_rate = j.value("learning_rate", cfg.learning_rate);
  cfg.dropout = j.value("dropout", cfg.dropout);
  if (j.contains("widths")) {
    cfg.widths = j["widths"].get<std::vector<int>>();
  }
  cfg.n_filters = j.value("n_filters", cfg.n_filters);
  cfg.max_seq_len = j.value("max_seq_len", cfg.max_seq_len);
  cfg.early_stop_patience = j.value("early_stop_patience", cfg.early_stop_patience);
  cfg.val_fraction = j.value("val_fraction", cfg.val_fraction);
  cfg.stratify_val = j.value("stratify_val", cfg.stratify_val);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.validate();
  return cfg;
}

std::string TrainConfig::to_json() const {
  nlohmann::ordered_json j;
  j["epochs"] = epochs;
  j["batch_size"] = batch_size;
  j["learning_rate"] = learning_rate;
  j["dropout"] = dropout;
  j["widths"] = widths;
  j["n_filters"] = n_filters;
  j["max_seq_len"] = max_seq_len;
  j["early_stop_patience"] = early_stop_patience;
  j["val_fraction"] = val_fraction;
  j["stratify_val"] = stratify_val;
  j["seed"] = seed;
  return j.dump();
}

std::uint64_t CnnModel::vocab_hash() const {
  std::string joined;
  for (const auto& w : vocab) {
    joined += w;
    joined.push_back('\n');
  }
  return fnv1a64(joined.data(), joined.size());
}

namespace {

std::string vocab_key(Lang lang, const std::string& token) {
  return to_string(lang) + ":" + utf8::latin_lower(token);
}

}  // namespace

CnnModel cnn_init(const Dataset& ds, const TableMap& tables,
                  const TrainConfig& cfg) {
  cfg.validate();
  if (ds.tweets.empty()) {
    fail(ErrorCode::invalid_argument, "cnn_init: empty dataset");
  }
  if (tables.empty()) {
    fail(ErrorCode::invalid_argument, "cnn_init: no embedding tables");
  }
  const int dim = tables.begin()->second->dim;
  for (const auto& [lang, table] : tables) {
    if (table->dim != dim) {
      fail(ErrorCode::invalid_argument,
           "cnn_init: embedding dimension mismatch for language '" +
               to_string(lang) + "'");
    }
  }
  if (dim <= 0) {
    fail(ErrorCode::invalid_argument, "cnn_init: embeddings not loaded");
  }
  CnnModel model;
  model.dim = dim;
  model.max_seq_len = cfg.max_seq_len;
  model.widths = cfg.widths;
  model.n_filters = cfg.n_filters;
  model.seed = cfg.seed;

  // Vocabulary: tokens with a table vector, in first-occurrence order.
  std::vector<std::pair<const EmbeddingTable*, int>> table_rows;
  for (const auto& tweet : ds.tweets) {
    const auto table_it = tables.find(tweet.lang);
    if (table_it == tables.end()) {
      fail(ErrorCode::invalid_argument,
           "cnn_init: no embedding table for language '" +
               to_string(tweet.lang) + "'");
    }
    const EmbeddingTable* table = table_it->second;
    for (const auto& tok : tokenize(tweet.text, tweet.lang)) {
      const std::string key = vocab_key(tweet.lang, tok.text);
      if (model.vindex.count(key)) continue;
      const auto row = table->find(tok.text);
      if (!row) continue;
      model.vindex.emplace(key, static_cast<int>(model.vocab.size()) + 1);
      model.vocab.push_back(key);
      table_rows.emplace_back(table, *row);
    }
  }

  const auto v = static_cast<Eigen::Index>(model.vocab.size());
  model.emb = Eigen::MatrixXd::Zero(v + 2, model.dim);
  for (Eigen::Index i = 0; i < v; ++i) {
    model.emb.row(i + 1) =
        table_rows[i].first->vectors.row(table_rows[i].second);
  }
  if (v > 0) {
    model.emb.row(v + 1) = model.emb.middleRows(1, v).colwise().mean();
  }

  Rng rng(cfg.seed);
  auto init_matrix = [&rng](Eigen::MatrixXd& m, double limit) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        m(i, j) = rng.uniform(-limit, limit);
      }
    }
  };
  for (int w : model.widths) {
    const int fan_in = w * model.dim;
    const double limit = std::sqrt(6.0 / (fan_in + model.n_filters));
    Eigen::MatrixXd k(model.n_filters, fan_in);
    init_matrix(k, limit);
    model.kernels.push_back(std::move(k));
    model.kbias.push_back(Eigen::VectorXd::Zero(model.n_filters));
  }
  model.dense_w.resize(2, model.total_filters());
  init_matrix(model.dense_w, std::sqrt(6.0 / (model.total_filters() + 2)));
  model.dense_b.setZero();
  return model;
}

CnnModel cnn_init(const Dataset& ds, const EmbeddingTable& table,
                  const TrainConfig& cfg) {
  TableMap tables = {{Lang::ar, &table}, {Lang::fr, &table}, {Lang::en, &table}};
  return cnn_init(ds, tables, cfg);
}

std::vector<int> cnn_encode(const CnnModel& model, const Tweet& tweet) {
  std::vector<int> rows(model.max_seq_len, model.pad_row());
  TokenList tokens;
  if (!trim(tweet.text).empty()) tokens = tokenize(tweet.text, tweet.lang);
  if (tokens.empty()) {
    log::warn("cnn: tweet '" + tweet.id +
              "' has no tokens, predicting from padding");
    return rows;
  }
  int t = 0;
  for (const auto& tok : tokens) {
    if (t >= model.max_seq_len) break;
    const auto it = model.vindex.find(vocab_key(tweet.lang, tok.text));
    rows[t++] = it != model.vindex.end() ? it->second : model.unk_row();
  }
  return rows;
}

namespace {

struct ForwardCache {
  Eigen::MatrixXd x;                     // L x dim
  std::vector<Eigen::MatrixXd> pre;      // per width: P x F pre-activations
  std::vector<std::vector<int>> argmax;  // per width: argmax position per filter
  Eigen::VectorXd pooled;                // total_filters
  Eigen::VectorXd dropped;               // pooled * mask
  Eigen::Vector2d z;
  Eigen::Vector2d prob;
  double log_py = 0.0;  // log prob of the true class (filled by loss pass)
};

Eigen::MatrixXd rows_to_matrix(const CnnModel& model,
                               const std::vector<int>& rows) {
  Eigen::MatrixXd x(rows.size(), model.dim);
  for (std::size_t t = 0; t < rows.size(); ++t) {
    if (rows[t] < 0 || rows[t] >= model.emb.rows()) {
      fail(ErrorCode::invalid_argument,
           "cnn: row index " + std::to_string(rows[t]) + " out of range");
    }
    x.row(t) = model.emb.row(rows[t]);
  }
  return x;
}

// mask is empty (no dropout) or has total_filters entries.
ForwardCache forward_from_x(const CnnModel& model, Eigen::MatrixXd x,
                            const Eigen::VectorXd& mask) {
  const auto len = static_cast<int>(x.rows());
  if (len != model.max_seq_len) {
    fail(ErrorCode::invalid_argument, "cnn: sequence length mismatch");
  }
  ForwardCache cache;
  cache.x = std::move(x);
  cache.pooled.resize(model.total_filters());
  for (std::size_t wi = 0; wi < model.widths.size(); ++wi) {
    const int w = model.widths[wi];
    const int positions = model.max_seq_len - w + 1;
    // im2col: each row is the flattened window starting at that position
    Eigen::MatrixXd windows(positions, w * model.dim);
    for (int p = 0; p < positions; ++p) {
      for (int off = 0; off < w; ++off) {
        windows.block(p, off * model.dim, 1, model.dim) =
            cache.x.row(p + off);
      }
    }
    Eigen::MatrixXd pre = windows * model.kernels[wi].transpose();
    pre.rowwise() += model.kbias[wi].transpose();
    std::vector<int> arg(model.n_filters, 0);
    for (int f = 0; f < model.n_filters; ++f) {
      double best = -std::numeric_limits<double>::infinity();
      int best_p = 0;
      for (int p = 0; p < positions; ++p) {
        const double a = std::max(0.0, pre(p, f));  // ReLU
        if (a > best) {
          best = a;
          best_p = p;
        }
      }
      arg[f] = best_p;
      cache.pooled(static_cast<Eigen::Index>(wi) * model.n_filters + f) = best;
    }
    cache.pre.push_back(std::move(pre));
    cache.argmax.push_back(std::move(arg));
  }
  cache.dropped =
      mask.size() > 0 ? cache.pooled.cwiseProduct(mask) : cache.pooled;
  cache.z = model.dense_w * cache.dropped + model.dense_b;
  const double zmax = cache.z.maxCoeff();
  const Eigen::Vector2d e = (cache.z.array() - zmax).exp();
  cache.prob = e / e.sum();
  return cache;
}

double loss_of(ForwardCache& cache, Label y) {
  const int yi = y == Label::ironic ? 1 : 0;
  const double zmax = cache.z.maxCoeff();
  const double lse = zmax + std::log((cache.z.array() - zmax).exp().sum());
  cache.log_py = cache.z(yi) - lse;
  return -cache.log_py;
}

void accumulate_backward(const CnnModel& model, const ForwardCache& cache,
                         const std::vector<int>& rows, Label y,
                         const Eigen::VectorXd& mask, double scale,
                         CnnGradients& g) {
  const int yi = y == Label::ironic ? 1 : 0;
  Eigen::Vector2d dz = cache.prob;
  dz(yi) -= 1.0;
  dz *= scale;

  g.ddense_w += dz * cache.dropped.transpose();
  g.ddense_b += dz;
  Eigen::VectorXd dh = model.dense_w.transpose() * dz;
  if (mask.size() > 0) dh = dh.cwiseProduct(mask);

  Eigen::MatrixXd dx = Eigen::MatrixXd::Zero(model.max_seq_len, model.dim);
  for (std::size_t wi = 0; wi < model.widths.size(); ++wi) {
    const int w = model.widths[wi];
    for (int f = 0; f < model.n_filters; ++f) {
      const double grad =
          dh(static_cast<Eigen::Index>(wi) * model.n_filters + f);
      if (grad == 0.0) continue;
      const int p = cache.argmax[wi][f];
      if (cache.pre[wi](p, f) <= 0.0) continue;  // ReLU gate
      // d pre(p, f): kernel row f gets the window, window gets kernel row
      for (int off = 0; off < w; ++off) {
        g.dkernels[wi].block(f, off * model.dim, 1, model.dim) +=
            grad * cache.x.row(p + off);
        dx.row(p + off) +=
            grad * model.kernels[wi].block(f, off * model.dim, 1, model.dim);
      }
      g.dkbias[wi](f) += grad;
    }
  }
  for (int t = 0; t < model.max_seq_len; ++t) {
    const int row = rows[t];
    if (row == model.pad_row()) continue;  // padding embedding is pinned
    auto [it, inserted] =
        g.demb.try_emplace(row, Eigen::RowVectorXd::Zero(model.dim));
    it->second += dx.row(t);
  }
}

CnnGradients zero_gradients(const CnnModel& model) {
  CnnGradients g;
  for (std::size_t wi = 0; wi < model.widths.size(); ++wi) {
    g.dkernels.push_back(Eigen::MatrixXd::Zero(model.kernels[wi].rows(),
                                               model.kernels[wi].cols()));
    g.dkbias.push_back(Eigen::VectorXd::Zero(model.n_filters));
  }
  g.ddense_w = Eigen::MatrixXd::Zero(2, model.total_filters());
  g.ddense_b.setZero();
  return g;
}

void check_gradients_finite(const CnnGradients& g) {
  for (std::size_t i = 0; i < g.dkernels.size(); ++i) {
    if (!g.dkernels[i].allFinite() || !g.dkbias[i].allFinite()) {
      fail(ErrorCode::numeric, "cnn: non-finite gradient in filter bank " +
                                   std::to_string(i));
    }
  }
  if (!g.ddense_w.allFinite() || !g.ddense_b.allFinite()) {
    fail(ErrorCode::numeric, "cnn: non-finite gradient in dense layer");
  }
  for (const auto& [row, grad] : g.demb) {
    if (!grad.allFinite()) {
      fail(ErrorCode::numeric, "cnn: non-finite gradient in embedding row " +
                                   std::to_string(row));
    }
  }
}

}  // namespace

Eigen::Vector2d cnn_forward(const CnnModel& model, const std::vector<int>& rows) {
  const ForwardCache cache =
      forward_from_x(model, rows_to_matrix(model, rows), Eigen::VectorXd());
  return cache.prob;
}

double cnn_batch_loss(const CnnModel& model,
                      const std::vector<std::vector<int>>& batch,
                      const std::vector<Label>& labels) {
  if (batch.empty() || batch.size() != labels.size()) {
    fail(ErrorCode::invalid_argument, "cnn: bad batch");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    ForwardCache cache =
        forward_from_x(model, rows_to_matrix(model, batch[i]), Eigen::VectorXd());
    total += loss_of(cache, labels[i]);
  }
  return total / static_cast<double>(batch.size());
}

CnnGradients cnn_batch_gradients(const CnnModel& model,
                                 const std::vector<std::vector<int>>& batch,
                                 const std::vector<Label>& labels) {
  if (batch.empty() || batch.size() != labels.size()) {
    fail(ErrorCode::invalid_argument, "cnn: bad batch");
  }
  CnnGradients g = zero_gradients(model);
  const double scale = 1.0 / static_cast<double>(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    ForwardCache cache =
        forward_from_x(model, rows_to_matrix(model, batch[i]), Eigen::VectorXd());
    loss_of(cache, labels[i]);
    accumulate_backward(model, cache, batch[i], labels[i], Eigen::VectorXd(),
                        scale, g);
  }
  check_gradients_finite(g);
  return g;
}

namespace {

/// Adam with the usual constants (beta1 = 0.9, beta2 = 0.999, eps = 1e-8)
/// and bias correction on a shared step counter. Embedding rows step lazily:
/// only rows touched by the batch update their moments, which keeps the
/// update cost proportional to the batch.
struct AdamState {
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEps = 1e-8;

  std::vector<Eigen::MatrixXd> mk, vk;
  std::vector<Eigen::VectorXd> mkb, vkb;
  Eigen::MatrixXd mdw, vdw;
  Eigen::Vector2d mdb, vdb;
  Eigen::MatrixXd memb, vemb;
  long t = 0;

  explicit AdamState(const CnnModel& model) {
    for (std::size_t wi = 0; wi < model.kernels.size(); ++wi) {
      mk.push_back(Eigen::MatrixXd::Zero(model.kernels[wi].rows(),
                                         model.kernels[wi].cols()));
      vk.push_back(Eigen::MatrixXd::Zero(model.kernels[wi].rows(),
                                         model.kernels[wi].cols()));
      mkb.push_back(Eigen::VectorXd::Zero(model.n_filters));
      vkb.push_back(Eigen::VectorXd::Zero(model.n_filters));
    }
    mdw = Eigen::MatrixXd::Zero(2, model.total_filters());
    vdw = Eigen::MatrixXd::Zero(2, model.total_filters());
    mdb.setZero();
    vdb.setZero();
    memb = Eigen::MatrixXd::Zero(model.emb.rows(), model.emb.cols());
    vemb = Eigen::MatrixXd::Zero(model.emb.rows(), model.emb.cols());
  }

  template <typename M, typename G>
  void update_dense(M& param, M& m, M& v, const G& grad, double lr) {
    m = kBeta1 * m + (1.0 - kBeta1) * grad;
    v = kBeta2 * v.array().matrix() +
        (1.0 - kBeta2) * grad.array().square().matrix();
    const double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(t));
    const double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(t));
    param.array() -= lr * (m.array() / bc1) /
                     ((v.array() / bc2).sqrt() + kEps);
  }

  void step(CnnModel& model, const CnnGradients& g, double lr) {
    ++t;
    for (std::size_t wi = 0; wi < model.kernels.size(); ++wi) {
      update_dense(model.kernels[wi], mk[wi], vk[wi], g.dkernels[wi], lr);
      update_dense(model.kbias[wi], mkb[wi], vkb[wi], g.dkbias[wi], lr);
    }
    update_dense(model.dense_w, mdw, vdw, g.ddense_w, lr);
    update_dense(model.dense_b, mdb, vdb, g.ddense_b, lr);
    const double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(t));
    const double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(t));
    for (const auto& [row, grad] : g.demb) {
      auto m = memb.row(row);
      auto v = vemb.row(row);
      m = kBeta1 * m + (1.0 - kBeta1) * grad;
      v = kBeta2 * v.array().matrix() +
          (1.0 - kBeta2) * grad.array().square().matrix();
      model.emb.row(row).array() -=
          lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + kEps);
    }
  }
};

void check_model_finite(const CnnModel& model, int epoch) {
  bool ok = model.emb.allFinite() && model.dense_w.allFinite() &&
            model.dense_b.allFinite();
  for (std::size_t wi = 0; ok && wi < model.kernels.size(); ++wi) {
    ok = model.kernels[wi].allFinite() && model.kbias[wi].allFinite();
  }
  if (!ok) {
    fail(ErrorCode::numeric,
         "cnn_train: parameters diverged (non-finite) during epoch " +
             std::to_string(epoch) + "; last stable epoch is " +
             std::to_string(epoch - 1));
  }
}

// Largest-remainder allocation of the per-class validation quota, so the
// overall validation size is round(frac * n) exactly.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> val_split(
    const std::vector<Label>& labels, double frac, bool stratify, Rng& rng) {
  const std::size_t n = labels.size();
  const auto n_val =
      static_cast<std::size_t>(std::llround(frac * static_cast<double>(n)));
  std::vector<std::size_t> train_idx;
  std::vector<std::size_t> val_idx;
  if (n_val == 0) {
    train_idx.resize(n);
    for (std::size_t i = 0; i < n; ++i) train_idx[i] = i;
    return {train_idx, val_idx};
  }
  if (!stratify) {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    rng.shuffle(order);
    val_idx.assign(order.begin(), order.begin() + n_val);
    train_idx.assign(order.begin() + n_val, order.end());
  } else {
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < n; ++i) {
      (labels[i] == Label::ironic ? pos : neg).push_back(i);
    }
    rng.shuffle(pos);
    rng.shuffle(neg);
    const double quota_pos = frac * static_cast<double>(pos.size());
    const double quota_neg = frac * static_cast<double>(neg.size());
    auto take_pos = std::min(pos.size(), static_cast<std::size_t>(quota_pos));
    auto take_neg = std::min(neg.size(), static_cast<std::size_t>(quota_neg));
    // hand out the remainder to the class with the larger fractional part
    while (take_pos + take_neg < n_val) {
      const double rem_pos =
          take_pos < pos.size() ? quota_pos - static_cast<double>(take_pos) : -1.0;
      const double rem_neg =
          take_neg < neg.size() ? quota_neg - static_cast<double>(take_neg) : -1.0;
      if (rem_pos < 0.0 && rem_neg < 0.0) break;
      if (rem_pos >= rem_neg) ++take_pos;
      else ++take_neg;
    }
    val_idx.insert(val_idx.end(), pos.begin(), pos.begin() + take_pos);
    val_idx.insert(val_idx.end(), neg.begin(), neg.begin() + take_neg);
    train_idx.insert(train_idx.end(), pos.begin() + take_pos, pos.end());
    train_idx.insert(train_idx.end(), neg.begin() + take_neg, neg.end());
    std::sort(val_idx.begin(), val_idx.end());
    std::sort(train_idx.begin(), train_idx.end());
  }
  return {train_idx, val_idx};
}

double val_macro_f(const CnnModel& model,
                   const std::vector<std::vector<int>>& seqs,
                   const std::vector<Label>& labels,
                   const std::vector<std::size_t>& idx) {
  std::vector<Label> gold, pred;
  gold.reserve(idx.size());
  pred.reserve(idx.size());
  for (std::size_t i : idx) {
    const Eigen::Vector2d p = cnn_forward(model, seqs[i]);
    gold.push_back(labels[i]);
    pred.push_back(p(1) > 0.5 ? Label::ironic : Label::non_ironic);
  }
  return metrics(confusion(gold, pred)).macro_f1;
}

}  // namespace

CnnTrainResult cnn_train(const Dataset& ds, const EmbeddingTable& table,
                         const TrainConfig& cfg) {
  TableMap tables = {{Lang::ar, &table}, {Lang::fr, &table}, {Lang::en, &table}};
  return cnn_train(ds, tables, cfg);
}

CnnTrainResult cnn_train(const Dataset& ds, const TableMap& tables,
                         const TrainConfig& cfg) {
  cfg.validate();
  CnnTrainResult result;
  result.model = cnn_init(ds, tables, cfg);
  CnnModel& model = result.model;

  std::vector<std::vector<int>> seqs;
  std::vector<Label> labels;
  seqs.reserve(ds.tweets.size());
  for (const auto& tweet : ds.tweets) {
    seqs.push_back(cnn_encode(model, tweet));
    labels.push_back(tweet.label);
  }

  Rng rng(cfg.seed);
  auto [train_idx, val_idx] =
      val_split(labels, cfg.val_fraction, cfg.stratify_val, rng);
  if (train_idx.empty()) {
    fail(ErrorCode::invalid_argument, "cnn_train: empty training split");
  }
  result.n_train = train_idx.size();
  result.n_val = val_idx.size();

  AdamState adam(model);
  const double keep = 1.0 - cfg.dropout;
  bool early_stop = cfg.early_stop_patience > 0;
  if (early_stop && val_idx.empty()) {
    log::warn("cnn_train: validation split is empty at this corpus size; "
              "early stopping disabled");
    early_stop = false;
  }
  CnnModel best = model;
  double best_f = -1.0;
  int patience_left = cfg.early_stop_patience;

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    rng.shuffle(train_idx);
    double epoch_loss = 0.0;
    std::size_t seen = 0;
    for (std::size_t start = 0; start < train_idx.size();
         start += cfg.batch_size) {
      const std::size_t end =
          std::min(train_idx.size(), start + cfg.batch_size);
      CnnGradients g = zero_gradients(model);
      const double scale = 1.0 / static_cast<double>(end - start);
      double batch_loss = 0.0;
      for (std::size_t bi = start; bi < end; ++bi) {
        const std::size_t i = train_idx[bi];
        Eigen::VectorXd mask;
        if (cfg.dropout > 0.0) {
          mask.resize(model.total_filters());
          for (Eigen::Index f = 0; f < mask.size(); ++f) {
            mask(f) = rng.uniform() < keep ? 1.0 / keep : 0.0;
          }
        }
        ForwardCache cache =
            forward_from_x(model, rows_to_matrix(model, seqs[i]), mask);
        batch_loss += loss_of(cache, labels[i]);
        accumulate_backward(model, cache, seqs[i], labels[i], mask, scale, g);
      }
      batch_loss *= scale;
      if (!std::isfinite(batch_loss)) {
        fail(ErrorCode::numeric,
             "cnn_train: loss diverged during epoch " + std::to_string(epoch) +
                 "; last stable epoch is " + std::to_string(epoch - 1));
      }
      check_gradients_finite(g);
      adam.step(model, g, cfg.learning_rate);
      epoch_loss += batch_loss * static_cast<double>(end - start);
      seen += end - start;
    }
    check_model_finite(model, epoch);
    epoch_loss /= static_cast<double>(seen);

    std::string line = "epoch " + std::to_string(epoch) + " loss " +
                       format_double(epoch_loss);
    result.epochs_run = epoch;
    if (!val_idx.empty()) {
      const double f = val_macro_f(model, seqs, labels, val_idx);
      line += " val_macro_f " + format_pct(f);
      if (f > best_f) {
        best_f = f;
        best = model;
        patience_left = cfg.early_stop_patience;
      } else if (early_stop) {
        --patience_left;
        if (patience_left <= 0) {
          result.log.push_back(line + " (early stop)");
          break;
        }
      }
    }
    result.log.push_back(line);
  }

  if (early_stop && best_f >= 0.0) {
    result.model = std::move(best);
    result.best_val_macro_f = best_f;
  } else if (!val_idx.empty()) {
    result.best_val_macro_f = best_f;
  }
  return result;
}

std::vector<CnnPrediction> cnn_predict(const CnnModel& model, const Dataset& ds,
                                       const EmbeddingTable* fallback) {
  if (fallback && fallback->dim != model.dim) {
    fail(ErrorCode::invalid_argument,
         "cnn_predict: fallback table dimension mismatch");
  }
  std::vector<CnnPrediction> out;
  out.reserve(ds.tweets.size());
  for (const auto& tweet : ds.tweets) {
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(model.max_seq_len, model.dim);
    TokenList tokens;
    if (!trim(tweet.text).empty()) tokens = tokenize(tweet.text, tweet.lang);
    if (tokens.empty()) {
      log::warn("cnn: tweet '" + tweet.id +
                "' has no tokens, predicting from padding");
    }
    int t = 0;
    for (const auto& tok : tokens) {
      if (t >= model.max_seq_len) break;
      const auto it = model.vindex.find(vocab_key(tweet.lang, tok.text));
      if (it != model.vindex.end()) {
        x.row(t) = model.emb.row(it->second);
      } else if (fallback) {
        const auto row = fallback->find(tok.text);
        if (row) {
          x.row(t) = fallback->vectors.row(*row);
        } else {
          x.row(t) = model.emb.row(model.unk_row());
        }
      } else {
        x.row(t) = model.emb.row(model.unk_row());
      }
      ++t;
    }
    const ForwardCache cache =
        forward_from_x(model, std::move(x), Eigen::VectorXd());
    CnnPrediction p;
    p.p_ironic = cache.prob(1);
    p.label = p.p_ironic > 0.5 ? Label::ironic : Label::non_ironic;
    out.push_back(p);
  }
  return out;
}

std::string cnn_serialize(const CnnModel& model) {
  std::string out = "ironykit-cnn v1\n";
  out += "seed " + std::to_string(model.seed) + "\n";
  out += "dims " + std::to_string(model.dim) + " " +
         std::to_string(model.max_seq_len) + " " +
         std::to_string(model.n_filters) + "\n";
  out += "widths";
  for (int w : model.widths) out += " " + std::to_string(w);
  out += "\n";
  out += "vocab " + std::to_string(model.vocab.size()) + " " +
         std::to_string(model.vocab_hash()) + "\n";
  for (const auto& w : model.vocab) out += w + "\n";
  auto emit_matrix = [&out](const Eigen::MatrixXd& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        if (j) out.push_back(' ');
        out += format_double(m(i, j));
      }
      out.push_back('\n');
    }
  };
  out += "emb\n";
  emit_matrix(model.emb);
  for (std::size_t wi = 0; wi < model.kernels.size(); ++wi) {
    out += "kernels " + std::to_string(model.widths[wi]) + "\n";
    emit_matrix(model.kernels[wi]);
    emit_matrix(model.kbias[wi].transpose());
  }
  out += "dense\n";
  emit_matrix(model.dense_w);
  emit_matrix(model.dense_b.transpose());
  return out;
}

CnnModel cnn_deserialize(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  auto next_line = [&](const char* what) -> std::string {
    if (!std::getline(in, line)) {
      fail(ErrorCode::format, std::string("cnn model: truncated at ") + what);
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  };
  if (next_line("header") != "ironykit-cnn v1") {
    fail(ErrorCode::format, "cnn model: bad header (expected 'ironykit-cnn v1')");
  }
  CnnModel model;
  {
    std::istringstream ls(next_line("seed"));
    std::string tag;
    if (!(ls >> tag >> model.seed) || tag != "seed") {
      fail(ErrorCode::format, "cnn model: bad seed line");
    }
  }
  {
    std::istringstream ls(next_line("dims"));
    std::string tag;
    if (!(ls >> tag >> model.dim >> model.max_seq_len >> model.n_filters) ||
        tag != "dims") {
      fail(ErrorCode::format, "cnn model: bad dims line");
    }
  }
  {
    std::istringstream ls(next_line("widths"));
    std::string tag;
    ls >> tag;
    if (tag != "widths") fail(ErrorCode::format, "cnn model: bad widths line");
    int w = 0;
    while (ls >> w) model.widths.push_back(w);
    if (model.widths.empty()) {
      fail(ErrorCode::format, "cnn model: no filter widths");
    }
  }
  std::size_t vocab_n = 0;
  std::uint64_t stored_hash = 0;
  {
    std::istringstream ls(next_line("vocab"));
    std::string tag;
    if (!(ls >> tag >> vocab_n >> stored_hash) || tag != "vocab") {
      fail(ErrorCode::format, "cnn model: bad vocab line");
    }
  }
  for (std::size_t i = 0; i < vocab_n; ++i) {
    model.vocab.push_back(next_line("vocab entry"));
    model.vindex.emplace(model.vocab.back(), static_cast<int>(i) + 1);
  }
  if (model.vocab_hash() != stored_hash) {
    fail(ErrorCode::format,
         "cnn model: vocabulary hash mismatch (corrupt or incompatible file)");
  }
  auto read_matrix = [&](Eigen::Index rows, Eigen::Index cols,
                         const char* what) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      std::istringstream ls(next_line(what));
      for (Eigen::Index j = 0; j < cols; ++j) {
        if (!(ls >> m(i, j))) {
          fail(ErrorCode::format,
               std::string("cnn model: truncated matrix in ") + what);
        }
      }
    }
    return m;
  };
  if (next_line("emb tag") != "emb") {
    fail(ErrorCode::format, "cnn model: expected emb section");
  }
  model.emb = read_matrix(static_cast<Eigen::Index>(vocab_n) + 2, model.dim, "emb");
  for (int w : model.widths) {
    if (next_line("kernels tag") != "kernels " + std::to_string(w)) {
      fail(ErrorCode::format, "cnn model: expected kernels section for width " +
                                  std::to_string(w));
    }
    model.kernels.push_back(
        read_matrix(model.n_filters, static_cast<Eigen::Index>(w) * model.dim,
                    "kernels"));
    model.kbias.push_back(
        read_matrix(1, model.n_filters, "kernel bias").transpose());
  }
  if (next_line("dense tag") != "dense") {
    fail(ErrorCode::format, "cnn model: expected dense section");
  }
  model.dense_w = read_matrix(2, model.total_filters(), "dense weights");
  model.dense_b = read_matrix(1, 2, "dense bias").transpose();
  return model;
}

}  // namespace irony
