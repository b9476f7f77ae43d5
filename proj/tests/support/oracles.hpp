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

// Test-only reference implementations. Everything here is written with
// naive loops, independent of the library code paths it checks.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "core/common.hpp"
#include "core/embeddings.hpp"

namespace oracle {

// Random orthogonal matrix via QR of a Gaussian matrix with the sign fix
// that makes R's diagonal positive (Haar-ish; good enough for tests).
inline Eigen::MatrixXd random_orthogonal(int dim, irony::Rng& rng) {
  Eigen::MatrixXd g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) g(i, j) = rng.normal();
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  }
  return q;
}

// 2D rotation by theta.
inline Eigen::Matrix2d rotation(double theta) {
  Eigen::Matrix2d r;
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

// Procrustes oracle for 2D instances: scan theta over [0, 2pi) at the given
// resolution and return the rotation minimizing ||R X - Y||_F.
inline Eigen::Matrix2d best_rotation_scan(const Eigen::Matrix2Xd& x,
                                          const Eigen::Matrix2Xd& y,
                                          double step = 1e-6) {
  double best_theta = 0.0;
  double best_residual = std::numeric_limits<double>::infinity();
  for (double theta = 0.0; theta < 2.0 * M_PI; theta += step) {
    const double residual = (rotation(theta) * x - y).squaredNorm();
    if (residual < best_residual) {
      best_residual = residual;
      best_theta = theta;
    }
  }
  return rotation(best_theta);
}

inline double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

// Brute-force CSLS over plain vectors: score(q, y) = 2 cos(q, y) - rT(q)
// - rS(y), rT from q's k nearest targets, rS(y) from y's k nearest sources.
// Returns (word, score) sorted by score desc, ties lexicographic.
inline std::vector<std::pair<std::string, double>> csls_brute_force(
    const std::vector<double>& query,
    const std::vector<std::vector<double>>& sources,
    const std::vector<std::vector<double>>& targets,
    const std::vector<std::string>& target_words, int k) {
  const int kk = std::min<int>(k, static_cast<int>(
                                      std::min(sources.size(), targets.size())));
  auto mean_top = [kk](std::vector<double> sims) {
    std::sort(sims.begin(), sims.end(), std::greater<double>());
    double sum = 0.0;
    for (int i = 0; i < kk; ++i) sum += sims[i];
    return sum / kk;
  };

  std::vector<double> q_sims;
  for (const auto& t : targets) q_sims.push_back(cosine(query, t));
  const double r_t = mean_top(q_sims);

  std::vector<std::pair<std::string, double>> out;
  for (std::size_t yi = 0; yi < targets.size(); ++yi) {
    std::vector<double> y_sims;
    for (const auto& s : sources) y_sims.push_back(cosine(targets[yi], s));
    const double r_s = mean_top(y_sims);
    out.emplace_back(target_words[yi],
                     2.0 * cosine(query, targets[yi]) - r_t - r_s);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return out;
}

// Builds an EmbeddingTable directly from rows (unit-normalized on request).
inline irony::EmbeddingTable make_table(const std::vector<std::string>& words,
                                        const Eigen::MatrixXd& rows,
                                        bool normalized) {
  irony::EmbeddingTable t;
  t.dim = static_cast<int>(rows.cols());
  t.words = words;
  for (std::size_t i = 0; i < words.size(); ++i) {
    t.index.emplace(words[i], static_cast<int>(i));
  }
  t.vectors = rows;
  if (normalized) {
    for (Eigen::Index i = 0; i < t.vectors.rows(); ++i) {
      t.vectors.row(i) /= t.vectors.row(i).norm();
    }
    t.normalized = true;
  }
  return t;
}

// Central finite difference d loss / d theta for one scalar parameter,
// mutated in place through the pointer.
template <typename LossFn>
double central_difference(double* param, LossFn&& loss, double eps = 1e-5) {
  const double original = *param;
  *param = original + eps;
  const double up = loss();
  *param = original - eps;
  const double down = loss();
  *param = original;
  return (up - down) / (2.0 * eps);
}

}  // namespace oracle
