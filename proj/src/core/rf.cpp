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
#include "core/rf.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "core/common.hpp"

namespace irony {

Label Tree::predict(const std::vector<double>& x) const {
  int i = 0;
  while (!nodes[i].leaf) {
    i = x[nodes[i].feature] <= nodes[i].threshold ? nodes[i].left
                                                  : nodes[i].right;
  }
  return nodes[i].count_pos > nodes[i].count_neg ? Label::ironic
                                                 : Label::non_ironic;
}

namespace {

struct SplitChoice {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double impurity = 0.0;  // weighted child Gini
};

double gini(std::int64_t pos, std::int64_t neg) {
  const double n = static_cast<double>(pos + neg);
  if (n == 0.0) return 0.0;
  const double p = pos / n;
  const double q = neg / n;
  return 1.0 - p * p - q * q;
}

class TreeGrower {
 public:
  TreeGrower(const std::vector<std::vector<double>>& X,
             const std::vector<Label>& y, const RfParams& params,
             std::uint64_t seed)
      : X_(X), y_(y), params_(params), rng_(seed) {}

  Tree grow() {
    const std::size_t n = X_.size();
    std::vector<std::size_t> sample(n);
    for (std::size_t i = 0; i < n; ++i) sample[i] = rng_.index(n);
    Tree tree;
    build(tree, std::move(sample), 0);
    return tree;
  }

 private:
  int build(Tree& tree, std::vector<std::size_t> rows, int depth) {
    std::int64_t pos = 0;
    std::int64_t neg = 0;
    for (std::size_t r : rows) {
      if (y_[r] == Label::ironic) ++pos;
      else ++neg;
    }
    const int node_idx = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();

    const bool pure = pos == 0 || neg == 0;
    const bool depth_ok = params_.max_depth == 0 || depth < params_.max_depth;
    SplitChoice choice;
    if (!pure && depth_ok &&
        rows.size() >= static_cast<std::size_t>(2 * params_.min_leaf)) {
      choice = best_split(rows);
    }
    if (!choice.found) {
      auto& node = tree.nodes[node_idx];
      node.leaf = true;
      node.count_pos = pos;
      node.count_neg = neg;
      return node_idx;
    }

    std::vector<std::size_t> left_rows;
    std::vector<std::size_t> right_rows;
    for (std::size_t r : rows) {
      (X_[r][choice.feature] <= choice.threshold ? left_rows : right_rows)
          .push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    const int left = build(tree, std::move(left_rows), depth + 1);
    const int right = build(tree, std::move(right_rows), depth + 1);
    auto& node = tree.nodes[node_idx];
    node.leaf = false;
    node.feature = choice.feature;
    node.threshold = choice.threshold;
    node.left = left;
    node.right = right;
    node.count_pos = pos;
    node.count_neg = neg;
    return node_idx;
  }

  SplitChoice best_split(const std::vector<std::size_t>& rows) {
    const int d = static_cast<int>(X_[0].size());
    int m = params_.features_per_split;
    if (m <= 0) m = static_cast<int>(std::ceil(std::sqrt(d)));
    m = std::min(m, d);

    // partial Fisher-Yates draw of m distinct feature indices
    std::vector<int> feats(d);
    for (int i = 0; i < d; ++i) feats[i] = i;
    for (int i = 0; i < m; ++i) {
      const std::size_t j = i + rng_.index(d - i);
      std::swap(feats[i], feats[j]);
    }

    SplitChoice best;
    std::vector<std::pair<double, Label>> vals;
    vals.reserve(rows.size());
    for (int fi = 0; fi < m; ++fi) {
      const int f = feats[fi];
      vals.clear();
      for (std::size_t r : rows) vals.emplace_back(X_[r][f], y_[r]);
      std::sort(vals.begin(), vals.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      if (vals.front().first == vals.back().first) continue;

      std::int64_t total_pos = 0;
      for (const auto& [v, lab] : vals) total_pos += lab == Label::ironic;
      const auto total = static_cast<std::int64_t>(vals.size());

      std::int64_t left_pos = 0;
      for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
        left_pos += vals[i].second == Label::ironic;
        if (vals[i].first == vals[i + 1].first) continue;
        const auto left_n = static_cast<std::int64_t>(i + 1);
        const auto right_n = total - left_n;
        if (left_n < params_.min_leaf || right_n < params_.min_leaf) continue;
        const double w_impurity =
            (left_n * gini(left_pos, left_n - left_pos) +
             right_n * gini(total_pos - left_pos, right_n - (total_pos - left_pos))) /
            static_cast<double>(total);
        const double threshold = vals[i].first / 2.0 + vals[i + 1].first / 2.0;
        if (!best.found || w_impurity < best.impurity ||
            (w_impurity == best.impurity && f == best.feature &&
             threshold < best.threshold)) {
          best.found = true;
          best.feature = f;
          best.threshold = threshold;
          best.impurity = w_impurity;
        }
      }
    }
    return best;
  }

  const std::vector<std::vector<double>>& X_;
  const std::vector<Label>& y_;
  const RfParams& params_;
  Rng rng_;
};

}  // namespace

RandomForestModel rf_train(const std::vector<std::vector<double>>& X,
                           const std::vector<Label>& y, const RfParams& params,
                           std::uint64_t seed,
                           std::vector<std::string> slot_names) {
  if (X.empty() || X.size() != y.size()) {
    fail(ErrorCode::invalid_argument,
         "rf_train: need non-empty X with matching labels");
  }
  const std::size_t d = X[0].size();
  if (d == 0) fail(ErrorCode::invalid_argument, "rf_train: zero-dim features");
  for (const auto& row : X) {
    if (row.size() != d) {
      fail(ErrorCode::invalid_argument, "rf_train: ragged feature matrix");
    }
  }
  if (!slot_names.empty() && slot_names.size() != d) {
    fail(ErrorCode::invalid_argument,
         "rf_train: slot names do not match feature dimension");
  }
  if (params.n_trees < 1 || params.min_leaf < 1 || params.max_depth < 0) {
    fail(ErrorCode::invalid_argument, "rf_train: bad parameters");
  }
  const bool single_class =
      std::all_of(y.begin(), y.end(), [&](Label l) { return l == y[0]; });
  if (single_class) {
    log::warn("rf_train: single-class input, model will always predict '" +
              to_string(y[0]) + "'");
  }

  RandomForestModel model;
  model.params = params;
  model.seed = seed;
  model.feature_slot_names = std::move(slot_names);
  model.trees.reserve(params.n_trees);
  for (int t = 0; t < params.n_trees; ++t) {
    TreeGrower grower(X, y, params, seed + static_cast<std::uint64_t>(t));
    model.trees.push_back(grower.grow());
  }
  return model;
}

std::vector<RfPrediction> rf_predict(
    const RandomForestModel& model, const std::vector<std::vector<double>>& X,
    const std::vector<std::string>& slot_names) {
  if (!model.feature_slot_names.empty() &&
      slot_names != model.feature_slot_names) {
    fail(ErrorCode::invalid_argument,
         "rf_predict: feature slots do not match the trained model "
         "(never silently reorder features)");
  }
  std::vector<RfPrediction> out;
  out.reserve(X.size());
  const auto n_trees = static_cast<double>(model.trees.size());
  for (const auto& x : X) {
    if (!model.feature_slot_names.empty() &&
        x.size() != model.feature_slot_names.size()) {
      fail(ErrorCode::invalid_argument,
           "rf_predict: feature vector has " + std::to_string(x.size()) +
               " slots, model expects " +
               std::to_string(model.feature_slot_names.size()));
    }
    int votes_pos = 0;
    for (const auto& tree : model.trees) {
      votes_pos += tree.predict(x) == Label::ironic;
    }
    RfPrediction p;
    p.p_ironic = votes_pos / n_trees;
    // exact tie goes to non_ironic
    p.label = 2 * votes_pos > static_cast<int>(model.trees.size())
                  ? Label::ironic
                  : Label::non_ironic;
    out.push_back(p);
  }
  return out;
}

std::string rf_serialize(const RandomForestModel& model) {
  std::string out = "ironykit-rf v1\n";
  out += "seed " + std::to_string(model.seed) + "\n";
  out += "params " + std::to_string(model.params.n_trees) + " " +
         std::to_string(model.params.max_depth) + " " +
         std::to_string(model.params.min_leaf) + " " +
         std::to_string(model.params.features_per_split) + "\n";
  out += "slots " + std::to_string(model.feature_slot_names.size());
  for (const auto& s : model.feature_slot_names) out += " " + s;
  out += "\n";
  out += "trees " + std::to_string(model.trees.size()) + "\n";
  for (const auto& tree : model.trees) {
    out += "tree " + std::to_string(tree.nodes.size()) + "\n";
    for (const auto& n : tree.nodes) {
      if (n.leaf) {
        out += "L " + std::to_string(n.count_neg) + " " +
               std::to_string(n.count_pos) + "\n";
      } else {
        out += "N " + std::to_string(n.feature) + " " +
               format_double(n.threshold) + " " + std::to_string(n.left) + " " +
               std::to_string(n.right) + "\n";
      }
    }
  }
  return out;
}

RandomForestModel rf_deserialize(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  auto next_line = [&](const char* what) -> std::string {
    if (!std::getline(in, line)) {
      fail(ErrorCode::format, std::string("rf model: truncated at ") + what);
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  };
  if (next_line("header") != "ironykit-rf v1") {
    fail(ErrorCode::format, "rf model: bad header (expected 'ironykit-rf v1')");
  }
  RandomForestModel model;
  {
    std::istringstream ls(next_line("seed"));
    std::string tag;
    if (!(ls >> tag >> model.seed) || tag != "seed") {
      fail(ErrorCode::format, "rf model: bad seed line");
    }
  }
  {
    std::istringstream ls(next_line("params"));
    std::string tag;
    if (!(ls >> tag >> model.params.n_trees >> model.params.max_depth >>
          model.params.min_leaf >> model.params.features_per_split) ||
        tag != "params") {
      fail(ErrorCode::format, "rf model: bad params line");
    }
  }
  {
    std::istringstream ls(next_line("slots"));
    std::string tag;
    std::size_t n = 0;
    if (!(ls >> tag >> n) || tag != "slots") {
      fail(ErrorCode::format, "rf model: bad slots line");
    }
    std::string s;
    while (ls >> s) model.feature_slot_names.push_back(s);
    if (model.feature_slot_names.size() != n) {
      fail(ErrorCode::format, "rf model: slot count mismatch");
    }
  }
  std::size_t n_trees = 0;
  {
    std::istringstream ls(next_line("trees"));
    std::string tag;
    if (!(ls >> tag >> n_trees) || tag != "trees") {
      fail(ErrorCode::format, "rf model: bad trees line");
    }
  }
  for (std::size_t t = 0; t < n_trees; ++t) {
    std::istringstream ls(next_line("tree header"));
    std::string tag;
    std::size_t n_nodes = 0;
    if (!(ls >> tag >> n_nodes) || tag != "tree") {
      fail(ErrorCode::format, "rf model: bad tree header");
    }
    Tree tree;
    tree.nodes.reserve(n_nodes);
    for (std::size_t k = 0; k < n_nodes; ++k) {
      std::istringstream ns(next_line("node"));
      std::string kind;
      ns >> kind;
      TreeNode node;
      if (kind == "L") {
        node.leaf = true;
        if (!(ns >> node.count_neg >> node.count_pos)) {
          fail(ErrorCode::format, "rf model: bad leaf node");
        }
      } else if (kind == "N") {
        if (!(ns >> node.feature >> node.threshold >> node.left >> node.right)) {
          fail(ErrorCode::format, "rf model: bad split node");
        }
      } else {
        fail(ErrorCode::format, "rf model: unknown node kind '" + kind + "'");
      }
      tree.nodes.push_back(node);
    }
    model.trees.push_back(std::move(tree));
  }
  return model;
}

}  // namespace irony
