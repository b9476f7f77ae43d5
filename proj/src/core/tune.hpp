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

#include "core/cnn.hpp"

namespace irony {

struct TuneTrial {
  int index = 0;
  TrainConfig config;
  double val_macro_f = 0.0;
  int epochs_run = 0;
  bool diverged = false;
};

struct TuneResult {
  TrainConfig best;
  double best_val_macro_f = 0.0;
  int best_trial = -1;
  std::vector<TuneTrial> trials;

  std::string trials_csv() const;
};

/// Seeded random search over CNN hyperparameters. The search space is a
/// JSON object whose keys are config fields and whose values are one of
/// {"choice": [...]}, {"uniform": [lo, hi]}, {"log_uniform": [lo, hi]}.
/// All trial configurations are drawn up front from the seed, so the trial
/// sequence is reproducible; every trial trains with early stopping and the
/// best validation macro-F wins (ties go to the earlier trial).
TuneResult tune_random_search(const Dataset& ds, const EmbeddingTable& table,
                              const TrainConfig& base,
                              const std::string& space_json, int budget,
                              std::uint64_t seed);

/// The documented default search space.
std::string default_search_space();

}  // namespace irony
