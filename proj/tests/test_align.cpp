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
#include <doctest.h>

#include "core/align.hpp"
#include "core/common.hpp"
#include "support/helpers.hpp"
#include "support/oracles.hpp"

using namespace irony;

namespace {

BilingualDictionary identity_dict(const std::vector<std::string>& words) {
  BilingualDictionary d;
  for (const auto& w : words) d.pairs.emplace_back(w, w);
  return d;
}

EmbeddingTable random_table(int n, int dim, Rng& rng, const std::string& prefix) {
  Eigen::MatrixXd rows(n, dim);
  std::vector<std::string> words;
  for (int i = 0; i < n; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%03d", prefix.c_str(), i);
    words.emplace_back(buf);
    for (int j = 0; j < dim; ++j) rows(i, j) = rng.normal();
  }
  return oracle::make_table(words, rows, true);
}

}  // namespace

TEST_CASE("fit_procrustes recovers the identity for identical tables") {
  Rng rng(101);
  const EmbeddingTable t = random_table(12, 4, rng, "w");
  const LinearMap m = fit_procrustes(t, t, identity_dict(t.words));
  CHECK((m.W - Eigen::MatrixXd::Identity(4, 4)).norm() <= 1e-10);
  CHECK(m.n_pairs_used == 12);
  CHECK(m.residual <= 1e-10);
}

TEST_CASE("fit_procrustes matches the brute-force rotation scan in 2D") {
  // basis vectors rotated by 90 degrees: e1 -> (0,1), e2 -> (-1,0)
  const EmbeddingTable src = oracle::make_table(
      {"e1", "e2"}, (Eigen::MatrixXd(2, 2) << 1, 0, 0, 1).finished(), true);
  const EmbeddingTable tgt = oracle::make_table(
      {"e1", "e2"}, (Eigen::MatrixXd(2, 2) << 0, 1, -1, 0).finished(), true);
  const LinearMap m = fit_procrustes(src, tgt, identity_dict({"e1", "e2"}));

  Eigen::Matrix2d expected;
  expected << 0, -1, 1, 0;
  CHECK((m.W - expected).norm() <= 1e-10);

  // independent check: scan rotation angles at 1e-6 resolution
  Eigen::Matrix2Xd x(2, 2), y(2, 2);
  x << 1, 0, 0, 1;
  y << 0, -1, 1, 0;
  const Eigen::Matrix2d scanned = oracle::best_rotation_scan(x, y);
  CHECK((m.W - scanned).norm() <= 1e-5);
}

TEST_CASE("fit_procrustes recovers a planted orthogonal map exactly") {
  Rng rng(7);
  const int dim = 20;
  const Eigen::MatrixXd q = oracle::random_orthogonal(dim, rng);
  const EmbeddingTable src = random_table(3 * dim, dim, rng, "s");
  EmbeddingTable tgt = src;
  tgt.vectors = src.vectors * q.transpose();
  const LinearMap m = fit_procrustes(src, tgt, identity_dict(src.words));
  CHECK((m.W - q).norm() <= 1e-8);
}

TEST_CASE("fit_procrustes preconditions and filtering") {
  Rng rng(23);
  const EmbeddingTable t = random_table(6, 3, rng, "w");

  SUBCASE("unnormalized tables are rejected") {
    EmbeddingTable raw = t;
    raw.normalized = false;
    CHECK_THROWS_AS(fit_procrustes(raw, t, identity_dict(t.words)), Error);
  }
  SUBCASE("oov pairs are filtered with a warning") {
    testutil::WarningCapture capture;
    BilingualDictionary d = identity_dict(t.words);
    d.pairs.emplace_back("ghost", "w000");
    const LinearMap m = fit_procrustes(t, t, d);
    CHECK(m.n_pairs_used == 6);
    CHECK(capture.any_contains("filtered 1"));
  }
  SUBCASE("zero usable pairs is an error") {
    BilingualDictionary d;
    d.pairs.emplace_back("ghost", "spook");
    CHECK_THROWS_AS(fit_procrustes(t, t, d), Error);
  }
  SUBCASE("dimension mismatch") {
    const EmbeddingTable other = random_table(6, 4, rng, "w");
    CHECK_THROWS_AS(fit_procrustes(t, other, identity_dict(t.words)), Error);
  }
  SUBCASE("duplicate source words are all kept") {
    BilingualDictionary d = identity_dict(t.words);
    d.pairs.emplace_back("w000", "w001");
    const LinearMap m = fit_procrustes(t, t, d);
    CHECK(m.n_pairs_used == 7);
  }
}

TEST_CASE("orthogonality and isometry invariants hold for fitted maps") {
  Rng rng(31);
  for (const int dim : {2, 3, 5, 8}) {
    const EmbeddingTable src = random_table(4 * dim, dim, rng, "s");
    EmbeddingTable tgt = random_table(4 * dim, dim, rng, "s");
    const LinearMap m = fit_procrustes(src, tgt, identity_dict(src.words));
    CHECK(m.orthogonality_error() <= 1e-8);
    CHECK(std::abs(std::abs(m.W.determinant()) - 1.0) <= 1e-6);

    // isometry: pairwise cosines survive the mapping
    const EmbeddingTable mapped = map_table(src, m);
    for (int a = 0; a < 5; ++a) {
      for (int b = a + 1; b < 5; ++b) {
        const double before = src.vectors.row(a).dot(src.vectors.row(b));
        const double after = mapped.vectors.row(a).dot(mapped.vectors.row(b));
        CHECK(std::abs(before - after) <= 1e-10);
      }
    }
  }
}

TEST_CASE("procrustes residual beats 10000 random orthogonal matrices") {
  Rng rng(37);
  for (const int dim : {2, 3}) {
    const int n_pairs = 6;
    const EmbeddingTable src = random_table(n_pairs, dim, rng, "s");
    const EmbeddingTable tgt = random_table(n_pairs, dim, rng, "t");
    BilingualDictionary d;
    for (int i = 0; i < n_pairs; ++i) d.pairs.emplace_back(src.words[i], tgt.words[i]);
    const LinearMap m = fit_procrustes(src, tgt, d);

    Eigen::MatrixXd x(dim, n_pairs), y(dim, n_pairs);
    for (int i = 0; i < n_pairs; ++i) {
      x.col(i) = src.vectors.row(i).transpose();
      y.col(i) = tgt.vectors.row(i).transpose();
    }
    const double fitted = (m.W * x - y).norm();
    for (int k = 0; k < 10000; ++k) {
      const Eigen::MatrixXd r = oracle::random_orthogonal(dim, rng);
      CHECK(fitted <= (r * x - y).norm() + 1e-12);
    }
  }
}

TEST_CASE("map_table applies W and re-normalizes") {
  Rng rng(41);
  const EmbeddingTable t = random_table(5, 3, rng, "w");

  SUBCASE("identity map leaves the table unchanged") {
    LinearMap id;
    id.W = Eigen::MatrixXd::Identity(3, 3);
    const EmbeddingTable out = map_table(t, id);
    CHECK((out.vectors - t.vectors).norm() <= 1e-12);
  }
  SUBCASE("2-word table through the 90-degree rotation") {
    const EmbeddingTable basis = oracle::make_table(
        {"e1", "e2"}, (Eigen::MatrixXd(2, 2) << 1, 0, 0, 1).finished(), true);
    LinearMap rot;
    rot.W.resize(2, 2);
    rot.W << 0, -1, 1, 0;
    const EmbeddingTable out = map_table(basis, rot);
    CHECK((out.vectors.row(0) - Eigen::RowVector2d(0, 1)).norm() <= 1e-12);
    CHECK((out.vectors.row(1) - Eigen::RowVector2d(-1, 0)).norm() <= 1e-12);
  }
  SUBCASE("mapped rows have unit norm") {
    Rng rng2(43);
    LinearMap m;
    m.W = oracle::random_orthogonal(3, rng2);
    const EmbeddingTable out = map_table(t, m);
    for (Eigen::Index i = 0; i < out.vectors.rows(); ++i) {
      CHECK(out.vectors.row(i).norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(out.normalized);
  }
  SUBCASE("dimension mismatch") {
    LinearMap m;
    m.W = Eigen::MatrixXd::Identity(4, 4);
    CHECK_THROWS_AS(map_table(t, m), Error);
  }
}

TEST_CASE("csls ranks an exact target match first") {
  Rng rng(47);
  const EmbeddingTable tgt = random_table(10, 4, rng, "t");
  const EmbeddingTable src = random_table(10, 4, rng, "s");
  CslsConfig cfg;
  cfg.k = 1;
  const auto ranked =
      csls_neighbors(tgt.vectors.row(3).transpose(), src, tgt, cfg, 3);
  REQUIRE_FALSE(ranked.empty());
  CHECK(ranked[0].first == "t003");
}

TEST_CASE("csls matches the brute-force oracle on random toy tables") {
  Rng rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 2 + static_cast<int>(rng.index(9));       // <= 10
    const int n_tgt = 3 + static_cast<int>(rng.index(48));    // <= 50
    const int n_src = 3 + static_cast<int>(rng.index(48));
    EmbeddingTable tgt = random_table(n_tgt, dim, rng, "t");
    const EmbeddingTable src = random_table(n_src, dim, rng, "s");
    // duplicate a vector so exact score ties exercise the word tie-break
    if (n_tgt >= 2) tgt.vectors.row(1) = tgt.vectors.row(0);

    CslsConfig cfg;
    cfg.k = 1 + static_cast<int>(rng.index(5));
    Eigen::VectorXd query(dim);
    for (int j = 0; j < dim; ++j) query(j) = rng.normal();
    query /= query.norm();

    const auto ranked = csls_neighbors(query, src, tgt, cfg, -1);

    std::vector<std::vector<double>> src_rows, tgt_rows;
    for (int i = 0; i < n_src; ++i) {
      src_rows.emplace_back();
      for (int j = 0; j < dim; ++j) src_rows.back().push_back(src.vectors(i, j));
    }
    for (int i = 0; i < n_tgt; ++i) {
      tgt_rows.emplace_back();
      for (int j = 0; j < dim; ++j) tgt_rows.back().push_back(tgt.vectors(i, j));
    }
    const std::vector<double> q(query.data(), query.data() + dim);
    const auto expected =
        oracle::csls_brute_force(q, src_rows, tgt_rows, tgt.words, cfg.k);

    REQUIRE(ranked.size() == expected.size());
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      CAPTURE(trial);
      CAPTURE(i);
      CHECK(ranked[i].first == expected[i].first);
      CHECK(ranked[i].second == doctest::Approx(expected[i].second).epsilon(1e-9));
    }
  }
}

TEST_CASE("csls clamps oversized k with a warning") {
  testutil::WarningCapture capture;
  Rng rng(59);
  const EmbeddingTable tgt = random_table(4, 3, rng, "t");
  const EmbeddingTable src = random_table(4, 3, rng, "s");
  CslsConfig cfg;
  cfg.k = 99;
  const auto ranked =
      csls_neighbors(tgt.vectors.row(0).transpose(), src, tgt, cfg, -1);
  CHECK(ranked.size() == 4);
  CHECK(capture.any_contains("clamped"));
}

TEST_CASE("csls argmax equals cosine argmax when all r-terms are equal") {
  // Targets on a ring all at the same distance structure: every target has
  // an identical source neighborhood because sources == targets.
  Rng rng(61);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 6;
    EmbeddingTable tgt;
    tgt.dim = 2;
    tgt.vectors.resize(n, 2);
    for (int i = 0; i < n; ++i) {
      const double a = 2.0 * M_PI * i / n;
      tgt.vectors(i, 0) = std::cos(a);
      tgt.vectors(i, 1) = std::sin(a);
      tgt.words.push_back("t" + std::to_string(i));
      tgt.index.emplace(tgt.words.back(), i);
    }
    tgt.normalized = true;
    CslsConfig cfg;
    cfg.k = n;  // mean over the whole table: r-terms identical by symmetry
    Eigen::VectorXd query(2);
    const double a = 2.0 * M_PI * rng.uniform();
    query << std::cos(a), std::sin(a);
    const auto ranked = csls_neighbors(query, tgt, tgt, cfg, 1);
    int best = 0;
    double best_cos = -2.0;
    for (int i = 0; i < n; ++i) {
      const double c = tgt.vectors.row(i).dot(query);
      if (c > best_cos) {
        best_cos = c;
        best = i;
      }
    }
    CHECK(ranked[0].first == "t" + std::to_string(best));
  }
}

TEST_CASE("refine keeps an exact planted map fixed") {
  Rng rng(67);
  const int dim = 6;
  const Eigen::MatrixXd q = oracle::random_orthogonal(dim, rng);
  const EmbeddingTable src = random_table(30, dim, rng, "s");
  EmbeddingTable tgt = src;
  tgt.vectors = src.vectors * q.transpose();
  LinearMap start;
  start.W = q;
  const RefineResult r = refine(src, tgt, start, 1);
  CHECK((r.map.W - q).norm() <= 1e-8);
  REQUIRE(r.induced_pairs.size() == 1);
  CHECK(r.induced_pairs[0] == 30);
}

TEST_CASE("refine rejects zero rounds") {
  Rng rng(71);
  const EmbeddingTable t = random_table(5, 3, rng, "w");
  LinearMap id;
  id.W = Eigen::MatrixXd::Identity(3, 3);
  CHECK_THROWS_AS(refine(t, t, id, 0), Error);
}

TEST_CASE("refine residual is non-increasing on the noisy planted map") {
  Rng rng(73);
  const int dim = 8;
  const Eigen::MatrixXd q = oracle::random_orthogonal(dim, rng);
  const EmbeddingTable src = random_table(60, dim, rng, "s");
  EmbeddingTable tgt = src;
  tgt.vectors = src.vectors * q.transpose();
  for (Eigen::Index i = 0; i < tgt.vectors.rows(); ++i) {
    for (int j = 0; j < dim; ++j) tgt.vectors(i, j) += 0.01 * rng.normal();
    tgt.vectors.row(i) /= tgt.vectors.row(i).norm();
  }
  // seed the refinement with a slightly perturbed start
  LinearMap start;
  start.W = q;
  const RefineResult r = refine(src, tgt, start, 4);
  REQUIRE(r.residuals.size() >= 2);
  for (std::size_t i = 1; i < r.residuals.size(); ++i) {
    CHECK(r.residuals[i] <= r.residuals[i - 1] + 1e-12);
  }
}

TEST_CASE("map save/load round trip re-checks orthogonality") {
  testutil::TempDir dir("map");
  Rng rng(79);
  LinearMap m;
  m.W = oracle::random_orthogonal(5, rng);
  const std::string p = dir.file("w.map");
  save_map(m, p);
  const LinearMap back = load_map(p);
  CHECK((back.W - m.W).norm() == 0.0);  // exact through shortest round trip

  write_text_file(p, "2\n1 1\n0 1\n");  // shear: not orthogonal
  CHECK_THROWS_AS(load_map(p), Error);
}

TEST_CASE("dictionary file parsing") {
  testutil::TempDir dir("dict");
  const std::string p = dir.file("d.tsv");
  write_text_file(p, "chat\tcat\nchien\tdog\n\n");
  const BilingualDictionary d = BilingualDictionary::load(p);
  REQUIRE(d.pairs.size() == 2);
  CHECK(d.pairs[0] == std::pair<std::string, std::string>{"chat", "cat"});

  write_text_file(p, "missing_tab\n");
  CHECK_THROWS_AS(BilingualDictionary::load(p), Error);
}
