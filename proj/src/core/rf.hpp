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

#include <cstdint>
#include <string>
#include <vector>

#include "core/corpus.hpp"

namespace irony {

struct RfParams {
  int n_trees = 200;
  int max_depth = 0;  // 0 = unlimited
  int min_leaf = 1;
  /// 0 = ceil(sqrt(d)) features per split.
  int features_per_split = 0;
};

/// Binary decision tree stored as a flat node array (root at 0). Leaves
/// carry per-class training counts so the forest can vote with fractions.
struct TreeNode {
  bool leaf = false;
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  std::int64_t count_neg = 0;  // non_ironic
  std::int64_t count_pos = 0;  // ironic
};

struct Tree {
  std::vector<TreeNode> nodes;
  Label predict(const std::vector<double>& x) const;
};

struct RandomForestModel {
  RfParams params;
  std::uint64_t seed = 0;
  std::vector<std::string> feature_slot_names;
  std::vector<Tree> trees;
};

struct RfPrediction {
  Label label;
  double p_ironic;  // fraction of trees voting ironic
};

/// Grows n_trees trees, each on a bootstrap sample of the same size, with
/// Gini splits over a random ceil(sqrt(d)) feature subset per node. Tree i
/// uses the derived seed (seed + i), so the forest prefix is independent of
/// n_trees. A split is taken whenever the node is impure and any candidate
/// exists, even at zero gain; ties prefer the earlier sampled feature and
/// the lower threshold.
RandomForestModel rf_train(const std::vector<std::vector<double>>& X,
                           const std::vector<Label>& y, const RfParams& params,
                           std::uint64_t seed,
                           std::vector<std::string> slot_names);

/// Majority vote; exact ties resolve to non_ironic. The caller's slot names
/// must equal the ones the model was trained with.
std::vector<RfPrediction> rf_predict(
    const RandomForestModel& model, const std::vector<std::vector<double>>& X,
    const std::vector<std::string>& slot_names);

std::string rf_serialize(const RandomForestModel& model);
RandomForestModel rf_deserialize(const std::string& text);

}  // namespace irony
