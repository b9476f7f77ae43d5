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
#include "core/metrics.hpp"

#include "core/common.hpp"

namespace irony {

ConfusionMatrix confusion(const std::vector<Label>& gold,
                          const std::vector<Label>& pred) {
  if (gold.size() != pred.size()) {
    fail(ErrorCode::invalid_argument,
         "confusion: gold has " + std::to_string(gold.size()) +
             " labels, pred has " + std::to_string(pred.size()));
  }
  if (gold.empty()) {
    fail(ErrorCode::invalid_argument, "confusion: empty label lists");
  }
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const bool g = gold[i] == Label::ironic;
    const bool p = pred[i] == Label::ironic;
    if (g && p) ++cm.tp;
    else if (!g && p) ++cm.fp;
    else if (g && !p) ++cm.fn;
    else ++cm.tn;
  }
  return cm;
}

namespace {

double ratio(std::int64_t num, std::int64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double f1(double p, double r) { return p + r == 0.0 ? 0.0 : 2 * p * r / (p + r); }

}  // namespace

Metrics metrics(const ConfusionMatrix& cm) {
  if (cm.total() <= 0) {
    fail(ErrorCode::invalid_argument, "metrics: empty confusion matrix");
  }
  const double p_pos = ratio(cm.tp, cm.tp + cm.fp);
  const double r_pos = ratio(cm.tp, cm.tp + cm.fn);
  const double p_neg = ratio(cm.tn, cm.tn + cm.fn);
  const double r_neg = ratio(cm.tn, cm.tn + cm.fp);
  Metrics m;
  m.accuracy = 100.0 * ratio(cm.tp + cm.tn, cm.total());
  m.precision_pos = 100.0 * p_pos;
  m.recall_pos = 100.0 * r_pos;
  m.f1_pos = 100.0 * f1(p_pos, r_pos);
  m.precision_neg = 100.0 * p_neg;
  m.recall_neg = 100.0 * r_neg;
  m.f1_neg = 100.0 * f1(p_neg, r_neg);
  m.macro_precision = (m.precision_pos + m.precision_neg) / 2.0;
  m.macro_recall = (m.recall_pos + m.recall_neg) / 2.0;
  m.macro_f1 = (m.f1_pos + m.f1_neg) / 2.0;
  return m;
}

}  // namespace irony
