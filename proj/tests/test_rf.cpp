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

#include "core/common.hpp"
#include "core/rf.hpp"
#include "support/helpers.hpp"

using namespace irony;

namespace {

// XOR replicated x25: a depth-2 tree over both features can shatter it,
// which a quick enumeration confirms: split on x0 at 0.5, then each child
// splits on x1 at 0.5, giving four pure leaves.
struct XorData {
  std::vector<std::vector<double>> x;
  std::vector<Label> y;
};

XorData xor_data(int replicas = 25) {
  XorData d;
  const std::vector<std::pair<std::vector<double>, Label>> base = {
      {{0, 0}, Label::non_ironic},
      {{0, 1}, Label::ironic},
      {{1, 0}, Label::ironic},
      {{1, 1}, Label::non_ironic},
  };
  for (int r = 0; r < replicas; ++r) {
    for (const auto& [vec, lab] : base) {
      d.x.push_back(vec);
      d.y.push_back(lab);
    }
  }
  return d;
}

// Linearly separable set with a margin around the plane w.x = b.
struct LinsepData {
  std::vector<std::vector<double>> x;
  std::vector<Label> y;
};

LinsepData linsep(int n, int dim, Rng& rng) {
  LinsepData d;
  std::vector<double> w(dim);
  for (int j = 0; j < dim; ++j) w[j] = rng.normal();
  const double b = 0.0;
  while (static_cast<int>(d.x.size()) < n) {
    std::vector<double> v(dim);
    double dot = 0.0;
    for (int j = 0; j < dim; ++j) {
      v[j] = rng.normal();
      dot += w[j] * v[j];
    }
    if (std::abs(dot - b) < 0.3) continue;  // keep a clean margin
    d.x.push_back(v);
    d.y.push_back(dot > b ? Label::ironic : Label::non_ironic);
  }
  return d;
}

}  // namespace

TEST_CASE("rf shatters replicated XOR at depth >= 2") {
  const XorData d = xor_data();
  RfParams params;
  params.n_trees = 50;
  params.max_depth = 4;
  const RandomForestModel model = rf_train(d.x, d.y, params, 42, {});
  const auto preds = rf_predict(model, d.x, {});
  int correct = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    correct += preds[i].label == d.y[i];
  }
  CHECK(correct == static_cast<int>(d.y.size()));
}

TEST_CASE("rf on a seeded linearly separable set generalizes") {
  // one pool, one separating plane; first 500 rows train, last 200 test
  Rng rng(7);
  const LinsepData pool = linsep(700, 6, rng);
  std::vector<std::vector<double>> train_x(pool.x.begin(), pool.x.begin() + 500);
  std::vector<Label> train_y(pool.y.begin(), pool.y.begin() + 500);
  std::vector<std::vector<double>> test_x(pool.x.begin() + 500, pool.x.end());
  std::vector<Label> test_y(pool.y.begin() + 500, pool.y.end());

  RfParams params;
  params.n_trees = 200;
  const RandomForestModel model = rf_train(train_x, train_y, params, 42, {});
  const auto preds = rf_predict(model, test_x, {});
  int correct = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    correct += preds[i].label == test_y[i];
  }
  CHECK(correct >= 190);  // >= 95%
}

TEST_CASE("rf degenerate and error cases") {
  SUBCASE("single-class input yields a constant predictor with warning") {
    testutil::WarningCapture capture;
    const std::vector<std::vector<double>> x = {{0.0}, {1.0}, {2.0}};
    const std::vector<Label> y(3, Label::ironic);
    const RandomForestModel model = rf_train(x, y, RfParams{.n_trees = 5}, 1, {});
    CHECK(capture.any_contains("single-class"));
    const auto preds = rf_predict(model, {{5.0}}, {});
    CHECK(preds[0].label == Label::ironic);
    CHECK(preds[0].p_ironic == 1.0);
  }
  SUBCASE("empty input") {
    CHECK_THROWS_AS(rf_train({}, {}, RfParams{}, 1, {}), Error);
  }
  SUBCASE("slot name mismatch at predict time") {
    const std::vector<std::vector<double>> x = {{0, 1}, {1, 0}};
    const std::vector<Label> y = {Label::ironic, Label::non_ironic};
    const RandomForestModel model =
        rf_train(x, y, RfParams{.n_trees = 3}, 1, {"a", "b"});
    CHECK_THROWS_WITH_AS(rf_predict(model, x, {"b", "a"}),
                         doctest::Contains("slots"), Error);
  }
  SUBCASE("wrong dimensionality at predict time") {
    const std::vector<std::vector<double>> x = {{0, 1}, {1, 0}};
    const std::vector<Label> y = {Label::ironic, Label::non_ironic};
    const RandomForestModel model =
        rf_train(x, y, RfParams{.n_trees = 3}, 1, {"a", "b"});
    CHECK_THROWS_AS(rf_predict(model, {{1.0}}, {"a", "b"}), Error);
  }
}

TEST_CASE("rf is deterministic: identical serialization for identical runs") {
  const XorData d = xor_data(10);
  RfParams params;
  params.n_trees = 20;
  const RandomForestModel a = rf_train(d.x, d.y, params, 99, {"x0", "x1"});
  const RandomForestModel b = rf_train(d.x, d.y, params, 99, {"x0", "x1"});
  CHECK(rf_serialize(a) == rf_serialize(b));

  const RandomForestModel other = rf_train(d.x, d.y, params, 100, {"x0", "x1"});
  CHECK(rf_serialize(a) != rf_serialize(other));
}

TEST_CASE("rf serialization round trips through text") {
  const XorData d = xor_data(5);
  RfParams params;
  params.n_trees = 7;
  params.max_depth = 3;
  const RandomForestModel model = rf_train(d.x, d.y, params, 5, {"x0", "x1"});
  const std::string text = rf_serialize(model);
  const RandomForestModel back = rf_deserialize(text);
  CHECK(rf_serialize(back) == text);
  const auto p1 = rf_predict(model, d.x, {"x0", "x1"});
  const auto p2 = rf_predict(back, d.x, {"x0", "x1"});
  for (std::size_t i = 0; i < p1.size(); ++i) {
    CHECK(p1[i].label == p2[i].label);
    CHECK(p1[i].p_ironic == p2[i].p_ironic);
  }
  CHECK_THROWS_AS(rf_deserialize("not a model"), Error);
}

TEST_CASE("rf forest prefix is stable as n_trees grows") {
  Rng rng(3);
  const LinsepData pool = linsep(120, 4, rng);
  RfParams small;
  small.n_trees = 10;
  RfParams large;
  large.n_trees = 40;
  const RandomForestModel a = rf_train(pool.x, pool.y, small, 11, {});
  const RandomForestModel b = rf_train(pool.x, pool.y, large, 11, {});

  // per-tree seeds derive from (seed + index): the first 10 trees agree
  for (int t = 0; t < small.n_trees; ++t) {
    REQUIRE(a.trees[t].nodes.size() == b.trees[t].nodes.size());
    for (std::size_t k = 0; k < a.trees[t].nodes.size(); ++k) {
      CHECK(a.trees[t].nodes[k].feature == b.trees[t].nodes[k].feature);
      CHECK(a.trees[t].nodes[k].threshold == b.trees[t].nodes[k].threshold);
      CHECK(a.trees[t].nodes[k].count_pos == b.trees[t].nodes[k].count_pos);
    }
  }

  // where every tree of the larger forest agrees, the smaller forest (its
  // prefix) must predict the same class
  const auto pa = rf_predict(a, pool.x, {});
  const auto pb = rf_predict(b, pool.x, {});
  for (std::size_t i = 0; i < pool.x.size(); ++i) {
    if (pb[i].p_ironic == 0.0 || pb[i].p_ironic == 1.0) {
      CHECK(pa[i].label == pb[i].label);
      CHECK(pa[i].p_ironic == pb[i].p_ironic);
    }
  }
}
