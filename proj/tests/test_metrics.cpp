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
#include "core/metrics.hpp"

using namespace irony;

namespace {

std::vector<Label> labels(const std::string& pattern) {
  std::vector<Label> out;
  for (char c : pattern) {
    out.push_back(c == 'I' ? Label::ironic : Label::non_ironic);
  }
  return out;
}

}  // namespace

TEST_CASE("confusion counts with ironic as the positive class") {
  SUBCASE("perfect agreement") {
    const auto g = labels("IIIIIINNNN");
    const ConfusionMatrix cm = confusion(g, g);
    CHECK(cm.tp == 6);
    CHECK(cm.tn == 4);
    CHECK(cm.fp == 0);
    CHECK(cm.fn == 0);
  }
  SUBCASE("all predicted ironic on a balanced set") {
    const ConfusionMatrix cm =
        confusion(labels("IIIIINNNNN"), labels("IIIIIIIIII"));
    CHECK(cm.tp == 5);
    CHECK(cm.fp == 5);
    CHECK(cm.fn == 0);
    CHECK(cm.tn == 0);
  }
  SUBCASE("length mismatch is an error") {
    CHECK_THROWS_AS(confusion(labels("II"), labels("I")), Error);
  }
}

TEST_CASE("metrics formulas on the hand-derived example") {
  // tp=50 fp=10 fn=20 tn=20, worked by hand from the standard definitions:
  // P+ = 50/60, R+ = 50/70, F+ = 76.92; P- = 20/40, R- = 20/30, F- = 57.14;
  // macro-F = 67.0.
  const Metrics m = metrics(ConfusionMatrix{50, 10, 20, 20});
  CHECK(m.precision_pos == doctest::Approx(83.3).epsilon(0.001));
  CHECK(m.recall_pos == doctest::Approx(71.4).epsilon(0.001));
  CHECK(m.f1_pos == doctest::Approx(76.9).epsilon(0.001));
  CHECK(m.precision_neg == doctest::Approx(50.0).epsilon(0.001));
  CHECK(m.recall_neg == doctest::Approx(66.7).epsilon(0.001));
  CHECK(m.f1_neg == doctest::Approx(57.1).epsilon(0.001));
  CHECK(m.macro_f1 == doctest::Approx(67.0).epsilon(0.0015));
  CHECK(m.accuracy == doctest::Approx(70.0));
}

TEST_CASE("metrics boundary cases") {
  SUBCASE("perfect predictions give 100 everywhere") {
    const Metrics m = metrics(ConfusionMatrix{6, 0, 0, 4});
    CHECK(m.accuracy == 100.0);
    CHECK(m.precision_pos == 100.0);
    CHECK(m.recall_pos == 100.0);
    CHECK(m.f1_pos == 100.0);
    CHECK(m.precision_neg == 100.0);
    CHECK(m.recall_neg == 100.0);
    CHECK(m.f1_neg == 100.0);
    CHECK(m.macro_f1 == 100.0);
  }
  SUBCASE("all-positive predictions on a balanced set") {
    // F+ = 2 * 0.5 * 1 / 1.5 = 66.7; negative side has zero denominators.
    const Metrics m = metrics(ConfusionMatrix{5, 5, 0, 0});
    CHECK(m.f1_pos == doctest::Approx(66.7).epsilon(0.001));
    CHECK(m.f1_neg == 0.0);
    CHECK(m.macro_f1 == doctest::Approx(33.3).epsilon(0.001));
  }
  SUBCASE("an empty matrix violates the precondition") {
    CHECK_THROWS_AS(metrics(ConfusionMatrix{}), Error);
  }
}

TEST_CASE("accuracy is exactly (tp+tn)/total and fields recompute from cm") {
  Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    ConfusionMatrix cm;
    cm.tp = static_cast<std::int64_t>(rng.index(50));
    cm.fp = static_cast<std::int64_t>(rng.index(50));
    cm.fn = static_cast<std::int64_t>(rng.index(50));
    cm.tn = static_cast<std::int64_t>(rng.index(50));
    if (cm.total() == 0) continue;
    const Metrics m = metrics(cm);
    CHECK(m.accuracy == 100.0 * (static_cast<double>(cm.tp + cm.tn) /
                                 static_cast<double>(cm.total())));
    CHECK(m.macro_f1 == (m.f1_pos + m.f1_neg) / 2.0);
    CHECK(m.macro_precision == (m.precision_pos + m.precision_neg) / 2.0);
    // same counts, same metrics: no hidden state
    const Metrics again = metrics(cm);
    CHECK(again.macro_f1 == m.macro_f1);
  }
}

TEST_CASE("property: joint shuffling leaves the confusion matrix unchanged") {
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.index(40);
    std::vector<Label> gold, pred;
    for (std::size_t i = 0; i < n; ++i) {
      gold.push_back(rng.uniform() < 0.5 ? Label::ironic : Label::non_ironic);
      pred.push_back(rng.uniform() < 0.5 ? Label::ironic : Label::non_ironic);
    }
    const ConfusionMatrix before = confusion(gold, pred);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    rng.shuffle(order);
    std::vector<Label> gold2, pred2;
    for (std::size_t i : order) {
      gold2.push_back(gold[i]);
      pred2.push_back(pred[i]);
    }
    const ConfusionMatrix after = confusion(gold2, pred2);
    CHECK(before.tp == after.tp);
    CHECK(before.fp == after.fp);
    CHECK(before.fn == after.fn);
    CHECK(before.tn == after.tn);
  }
}

TEST_CASE("property: swapping the positive class swaps pos/neg fields") {
  Rng rng(19);
  for (int trial = 0; trial < 50; ++trial) {
    ConfusionMatrix cm;
    cm.tp = 1 + static_cast<std::int64_t>(rng.index(30));
    cm.fp = static_cast<std::int64_t>(rng.index(30));
    cm.fn = static_cast<std::int64_t>(rng.index(30));
    cm.tn = 1 + static_cast<std::int64_t>(rng.index(30));
    // swapping the class convention transposes the matrix roles
    const ConfusionMatrix swapped{cm.tn, cm.fn, cm.fp, cm.tp};
    const Metrics m = metrics(cm);
    const Metrics s = metrics(swapped);
    CHECK(m.precision_pos == s.precision_neg);
    CHECK(m.recall_pos == s.recall_neg);
    CHECK(m.f1_pos == s.f1_neg);
    CHECK(m.accuracy == s.accuracy);
    CHECK(m.macro_f1 == doctest::Approx(s.macro_f1).epsilon(1e-12));
    CHECK(m.macro_precision == doctest::Approx(s.macro_precision).epsilon(1e-12));
  }
}
