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
#include "core/align.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <sstream>

#include "core/common.hpp"

namespace irony {

BilingualDictionary BilingualDictionary::load(const std::string& path) {
  const std::string text = read_text_file(path);
  std::istringstream in(text);
  std::string line;
  BilingualDictionary dict;
  std::int64_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      fail(ErrorCode::format, path + ", line " + std::to_string(row) +
                                  ": expected 'source<TAB>target'");
    }
    std::string src = trim(line.substr(0, tab));
    std::string tgt = trim(line.substr(tab + 1));
    if (src.empty() || tgt.empty()) {
      fail(ErrorCode::format,
           path + ", line " + std::to_string(row) + ": empty word in pair");
    }
    dict.pairs.emplace_back(std::move(src), std::move(tgt));
  }
  return dict;
}

double LinearMap::orthogonality_error() const {
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(W.rows(), W.cols());
  return (W * W.transpose() - I).norm();
}

void check_orthogonal(const Eigen::MatrixXd& W) {
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(W.rows(), W.cols());
  const double err = (W * W.transpose() - I).norm();
  if (!(err <= 1e-8)) {
    fail(ErrorCode::numeric,
         "linear map is not orthogonal: ||W W^T - I||_F = " +
             format_double(err));
  }
}

namespace {

LinearMap fit_from_matrices(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) {
  // X, Y are dim x n (columns are paired vectors).
  const Eigen::MatrixXd M = Y * X.transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullU |
                                               Eigen::ComputeFullV);
  LinearMap out;
  out.W = svd.matrixU() * svd.matrixV().transpose();
  out.n_pairs_used = static_cast<int>(X.cols());
  out.residual = (out.W * X - Y).norm();
  check_orthogonal(out.W);
  return out;
}

}  // namespace

LinearMap fit_procrustes(const EmbeddingTable& src, const EmbeddingTable& tgt,
                         const BilingualDictionary& dict) {
  if (src.dim != tgt.dim) {
    fail(ErrorCode::invalid_argument,
         "fit_procrustes: dimension mismatch (" + std::to_string(src.dim) +
             " vs " + std::to_string(tgt.dim) + ")");
  }
  if (!src.normalized || !tgt.normalized) {
    fail(ErrorCode::invalid_argument,
         "fit_procrustes: both tables must be normalized first");
  }
  std::vector<std::pair<int, int>> rows;
  rows.reserve(dict.pairs.size());
  for (const auto& [s, t] : dict.pairs) {
    const auto si = src.find(s);
    const auto ti = tgt.find(t);
    if (si && ti) rows.emplace_back(*si, *ti);
  }
  const std::size_t filtered = dict.pairs.size() - rows.size();
  if (filtered > 0) {
    log::warn("fit_procrustes: filtered " + std::to_string(filtered) +
              " pair(s) with an out-of-vocabulary side (" +
              std::to_string(rows.size()) + " usable)");
  }
  if (rows.empty()) {
    fail(ErrorCode::invalid_argument,
         "fit_procrustes: no usable dictionary pairs");
  }
  if (static_cast<int>(rows.size()) < src.dim) {
    log::warn("fit_procrustes: only " + std::to_string(rows.size()) +
              " usable pairs for dimension " + std::to_string(src.dim) +
              "; the fit may be underdetermined");
  }
  Eigen::MatrixXd X(src.dim, rows.size());
  Eigen::MatrixXd Y(src.dim, rows.size());
  for (std::size_t c = 0; c < rows.size(); ++c) {
    X.col(c) = src.vectors.row(rows[c].first).transpose();
    Y.col(c) = tgt.vectors.row(rows[c].second).transpose();
  }
  return fit_from_matrices(X, Y);
}

EmbeddingTable map_table(const EmbeddingTable& src, const LinearMap& m) {
  if (src.dim != m.dim()) {
    fail(ErrorCode::invalid_argument,
         "map_table: table dim " + std::to_string(src.dim) +
             " does not match map dim " + std::to_string(m.dim()));
  }
  EmbeddingTable out = src;
  out.vectors = src.vectors * m.W.transpose();
  for (Eigen::Index i = 0; i < out.vectors.rows(); ++i) {
    const double norm = out.vectors.row(i).norm();
    if (norm > 0.0) out.vectors.row(i) /= norm;
  }
  out.normalized = true;
  return out;
}

namespace {

// Mean cosine to the k largest entries of sims (the query itself may be one
// of them when it equals a row; both sides of the oracle do the same).
double mean_top_k(const Eigen::VectorXd& sims, int k) {
  const int n = static_cast<int>(sims.size());
  const int kk = std::min(k, n);
  std::vector<double> v(sims.data(), sims.data() + n);
  std::nth_element(v.begin(), v.begin() + (kk - 1), v.end(),
                   std::greater<double>());
  double sum = 0.0;
  for (int i = 0; i < kk; ++i) sum += v[i];
  return sum / kk;
}

}  // namespace

CslsIndex::CslsIndex(const EmbeddingTable& mapped_src, const EmbeddingTable& tgt,
                     CslsConfig cfg)
    : tgt_(tgt), k_(cfg.k) {
  if (tgt.size() == 0) {
    fail(ErrorCode::invalid_argument, "csls: empty target table");
  }
  if (cfg.k < 1) fail(ErrorCode::invalid_argument, "csls: k must be >= 1");
  if (k_ > static_cast<int>(tgt.size()) ||
      k_ > static_cast<int>(mapped_src.size())) {
    const int clamped = static_cast<int>(std::min(tgt.size(), mapped_src.size()));
    log::warn("csls: k=" + std::to_string(k_) + " exceeds vocabulary, clamped to " +
              std::to_string(clamped));
    k_ = clamped;
  }
  std::int64_t sample = cfg.source_sample > 0 ? cfg.source_sample : 50000;
  sample = std::min<std::int64_t>(sample, mapped_src.size());
  const Eigen::MatrixXd src_block = mapped_src.vectors.topRows(sample);
  // r_S(y): mean cosine of each target row to its k nearest mapped sources.
  r_src_.resize(tgt.vectors.rows());
  for (Eigen::Index i = 0; i < tgt.vectors.rows(); ++i) {
    const Eigen::VectorXd sims = src_block * tgt.vectors.row(i).transpose();
    r_src_(i) = mean_top_k(sims, k_);
  }
}

std::vector<std::pair<std::string, double>> CslsIndex::neighbors(
    const Eigen::VectorXd& query, int top_n) const {
  if (query.size() != tgt_.dim) {
    fail(ErrorCode::invalid_argument, "csls: query dimension mismatch");
  }
  if (query.norm() == 0.0) {
    fail(ErrorCode::invalid_argument, "csls: zero query vector");
  }
  const Eigen::VectorXd cos = tgt_.vectors * query;
  const double r_tgt = mean_top_k(cos, k_);
  std::vector<std::pair<std::string, double>> scored(tgt_.size());
  for (std::size_t i = 0; i < tgt_.size(); ++i) {
    const auto idx = static_cast<Eigen::Index>(i);
    scored[i] = {tgt_.words[i], 2.0 * cos(idx) - r_tgt - r_src_(idx)};
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (top_n >= 0 && static_cast<std::size_t>(top_n) < scored.size()) {
    scored.resize(top_n);
  }
  return scored;
}

std::vector<std::pair<std::string, double>> csls_neighbors(
    const Eigen::VectorXd& query, const EmbeddingTable& mapped_src,
    const EmbeddingTable& tgt, const CslsConfig& cfg, int top_n) {
  return CslsIndex(mapped_src, tgt, cfg).neighbors(query, top_n);
}

namespace {

// CSLS argmax of every row of A against rows of B; r_b holds the
// neighborhood term of each B row against A's rows, r_a of each A row
// against B's rows. Ties break toward the lexicographically smaller word.
std::vector<int> csls_argmax(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                             const std::vector<std::string>& b_words,
                             const Eigen::VectorXd& r_a,
                             const Eigen::VectorXd& r_b) {
  std::vector<int> best(A.rows(), -1);
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    const Eigen::VectorXd cos = B * A.row(i).transpose();
    double best_score = -std::numeric_limits<double>::infinity();
    int best_j = -1;
    for (Eigen::Index j = 0; j < B.rows(); ++j) {
      const double score = 2.0 * cos(j) - r_a(i) - r_b(j);
      if (score > best_score ||
          (score == best_score && best_j >= 0 &&
           b_words[j] < b_words[best_j])) {
        best_score = score;
        best_j = static_cast<int>(j);
      }
    }
    best[i] = best_j;
  }
  return best;
}

Eigen::VectorXd neighborhood_means(const Eigen::MatrixXd& A,
                                   const Eigen::MatrixXd& B, int k) {
  // r(i) = mean cosine of A row i to its k nearest B rows.
  Eigen::VectorXd r(A.rows());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    const Eigen::VectorXd sims = B * A.row(i).transpose();
    r(i) = mean_top_k(sims, k);
  }
  return r;
}

}  // namespace

RefineResult refine(const EmbeddingTable& src, const EmbeddingTable& tgt,
                    const LinearMap& start, int rounds, const CslsConfig& cfg,
                    std::int64_t vocab_slice) {
  if (rounds < 1) {
    fail(ErrorCode::invalid_argument, "refine: rounds must be >= 1");
  }
  if (!src.normalized || !tgt.normalized) {
    fail(ErrorCode::invalid_argument, "refine: tables must be normalized");
  }
  const auto n_src = std::min<std::int64_t>(vocab_slice, src.size());
  const auto n_tgt = std::min<std::int64_t>(vocab_slice, tgt.size());
  const Eigen::MatrixXd S = src.vectors.topRows(n_src);
  const Eigen::MatrixXd T = tgt.vectors.topRows(n_tgt);
  const int k = std::max(1, std::min<int>(cfg.k, static_cast<int>(
                                                     std::min(n_src, n_tgt))));

  RefineResult result;
  result.map = start;
  for (int round = 0; round < rounds; ++round) {
    const Eigen::MatrixXd MS = [&] {
      Eigen::MatrixXd m = S * result.map.W.transpose();
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const double norm = m.row(i).norm();
        if (norm > 0.0) m.row(i) /= norm;
      }
      return m;
    }();
    const Eigen::VectorXd r_ms = neighborhood_means(MS, T, k);
    const Eigen::VectorXd r_t = neighborhood_means(T, MS, k);
    const std::vector<int> fwd =
        csls_argmax(MS, T, std::vector<std::string>(tgt.words.begin(),
                                                    tgt.words.begin() + n_tgt),
                    r_ms, r_t);
    const std::vector<int> bwd =
        csls_argmax(T, MS, std::vector<std::string>(src.words.begin(),
                                                    src.words.begin() + n_src),
                    r_t, r_ms);
    // mutual nearest neighbors form the induced dictionary
    std::vector<std::pair<int, int>> induced;
    for (std::int64_t i = 0; i < n_src; ++i) {
      const int j = fwd[i];
      if (j >= 0 && bwd[j] == static_cast<int>(i)) induced.emplace_back(i, j);
    }
    if (induced.empty()) {
      log::warn("refine: induced dictionary empty at round " +
                std::to_string(round + 1) + ", stopping early");
      break;
    }
    Eigen::MatrixXd X(src.dim, induced.size());
    Eigen::MatrixXd Y(src.dim, induced.size());
    for (std::size_t c = 0; c < induced.size(); ++c) {
      X.col(c) = S.row(induced[c].first).transpose();
      Y.col(c) = T.row(induced[c].second).transpose();
    }
    LinearMap refit = fit_from_matrices(X, Y);
    refit.src_lang = start.src_lang;
    refit.tgt_lang = start.tgt_lang;
    result.map = std::move(refit);
    result.induced_pairs.push_back(static_cast<int>(induced.size()));
    // RMS residual so rounds with different dictionary sizes compare
    result.residuals.push_back(result.map.residual /
                               std::sqrt(static_cast<double>(induced.size())));
  }
  return result;
}

void save_map(const LinearMap& m, const std::string& path) {
  std::string out = std::to_string(m.dim()) + "\n";
  for (Eigen::Index i = 0; i < m.W.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.W.cols(); ++j) {
      if (j) out.push_back(' ');
      out += format_double(m.W(i, j));
    }
    out.push_back('\n');
  }
  write_text_file(path, out);
}

LinearMap load_map(const std::string& path) {
  const std::string text = read_text_file(path);
  std::istringstream in(text);
  int dim = 0;
  if (!(in >> dim) || dim <= 0) {
    fail(ErrorCode::format, path + ": bad map header (expected dimension)");
  }
  LinearMap m;
  m.W.resize(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      double v = 0.0;
      if (!(in >> v)) {
        fail(ErrorCode::format, path + ": truncated matrix at row " +
                                    std::to_string(i + 1));
      }
      m.W(i, j) = v;
    }
  }
  check_orthogonal(m.W);
  return m;
}

}  // namespace irony
