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
#include "core/tune.hpp"

#include <cmath>

#include <json.hpp>

#include "core/common.hpp"
#include "core/csv.hpp"

namespace irony {

std::string default_search_space() {
  return R"({
  "learning_rate": {"log_uniform": [1e-4, 1e-2]},
  "dropout": {"uniform": [0.1, 0.6]},
  "n_filters": {"choice": [50, 100, 150]},
  "batch_size": {"choice": [16, 32, 64]},
  "widths": {"choice": [[3, 4, 5], [2, 3, 4], [3, 4]]}
})";
}

namespace {

nlohmann::json sample_value(const nlohmann::json& rule, Rng& rng,
                            const std::string& field) {
  if (rule.contains("choice")) {
    const auto& options = rule["choice"];
    if (!options.is_array() || options.empty()) {
      fail(ErrorCode::format, "search space: empty choice for " + field);
    }
    return options[rng.index(options.size())];
  }
  if (rule.contains("uniform")) {
    const auto lo = rule["uniform"][0].get<double>();
    const auto hi = rule["uniform"][1].get<double>();
    return rng.uniform(lo, hi);
  }
  if (rule.contains("log_uniform")) {
    const auto lo = rule["log_uniform"][0].get<double>();
    const auto hi = rule["log_uniform"][1].get<double>();
    if (lo <= 0.0 || hi <= lo) {
      fail(ErrorCode::format, "search space: bad log_uniform bounds for " + field);
    }
    return std::exp(rng.uniform(std::log(lo), std::log(hi)));
  }
  fail(ErrorCode::format, "search space: unknown rule for " + field +
                              " (want choice/uniform/log_uniform)");
}

TrainConfig apply_sample(const TrainConfig& base, const nlohmann::json& space,
                         Rng& rng) {
  // Start from the base config's JSON and overwrite the sampled fields, so
  // unknown keys are rejected by the config parser, not silently dropped.
  nlohmann::json cfg = nlohmann::json::parse(base.to_json());
  for (const auto& [field, rule] : space.items()) {
    if (!cfg.contains(field)) {
      fail(ErrorCode::format, "search space: unknown config field '" + field + "'");
    }
    cfg[field] = sample_value(rule, rng, field);
  }
  return TrainConfig::from_json(cfg.dump());
}

}  // namespace

TuneResult tune_random_search(const Dataset& ds, const EmbeddingTable& table,
                              const TrainConfig& base,
                              const std::string& space_json, int budget,
                              std::uint64_t seed) {
  if (budget < 1) {
    fail(ErrorCode::invalid_argument, "tune: budget must be >= 1");
  }
  nlohmann::json space;
  try {
    space = nlohmann::json::parse(space_json.empty() ? default_search_space()
                                                     : space_json);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::format, std::string("search space: ") + e.what());
  }
  if (!space.is_object()) {
    fail(ErrorCode::format, "search space: expected a JSON object");
  }

  // Draw every trial configuration up front from the single seed.
  Rng rng(seed);
  std::vector<TrainConfig> configs;
  configs.reserve(budget);
  for (int i = 0; i < budget; ++i) {
    configs.push_back(apply_sample(base, space, rng));
  }

  TuneResult result;
  for (int i = 0; i < budget; ++i) {
    TuneTrial trial;
    trial.index = i;
    trial.config = configs[i];
    try {
      const CnnTrainResult r = cnn_train(ds, table, configs[i]);
      trial.val_macro_f = r.best_val_macro_f;
      trial.epochs_run = r.epochs_run;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::numeric) throw;
      trial.diverged = true;
      log::warn("tune: trial " + std::to_string(i) + " diverged: " + e.what());
    }
    if (!trial.diverged &&
        (result.best_trial < 0 || trial.val_macro_f > result.best_val_macro_f)) {
      result.best_trial = i;
      result.best_val_macro_f = trial.val_macro_f;
      result.best = configs[i];
    }
    result.trials.push_back(std::move(trial));
  }
  if (result.best_trial < 0) {
    fail(ErrorCode::numeric, "tune: all " + std::to_string(budget) +
                                 " trial(s) diverged");
  }
  return result;
}

std::string TuneResult::trials_csv() const {
  std::string out = "trial,val_macro_f,epochs_run,diverged,config\n";
  for (const auto& t : trials) {
    out += csv::join_row({std::to_string(t.index), format_pct(t.val_macro_f),
                          std::to_string(t.epochs_run),
                          t.diverged ? "true" : "false", t.config.to_json()});
    out += "\n";
  }
  return out;
}

}  // namespace irony
