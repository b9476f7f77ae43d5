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

#include <array>
#include <set>
#include <string>
#include <vector>

#include "core/corpus.hpp"

namespace irony {

/// Per-language closed-class word lists. Latin-script entries are lowercase
/// normalized at load; a word may appear in several sets at once.
struct LexiconSet {
  Lang lang = Lang::en;
  std::set<std::string> negation;
  std::set<std::string> opinion_positive;
  std::set<std::string> opinion_negative;
  std::set<std::string> opposition;
  std::set<std::string> personal_pronouns;
  std::set<std::string> interjections;
  std::set<std::string> emoticons_positive;
  std::set<std::string> emoticons_negative;
};

/// Feature slots in their fixed, versioned order. Models persist the slot
/// names they were trained with so a reordering is caught at predict time.
enum FeatureSlot : int {
  kExclamationCount = 0,
  kQuestionCount,
  kEllipsisCount,
  kOtherPunctCount,
  kQuotationCount,
  kPosEmoticonCount,
  kNegEmoticonCount,
  kPersonalPronounCount,
  kInterjectionCount,
  kLengthTokens,
  kLengthChars,
  kNamedEntityCount,
  kNegationCount,
  kOpinionPosCount,
  kOpinionNegCount,
  kOppositionCount,
  kNumFeatureSlots
};

struct FeatureVector {
  std::array<double, kNumFeatureSlots> values{};
  bool surface_only = false;

  double operator[](FeatureSlot s) const { return values[s]; }
};

/// All slot names, index-aligned with FeatureSlot.
const std::vector<std::string>& feature_slot_names();

/// Surface slots: everything up to and including named_entity_count.
/// The lexicon-backed slots (negation, opinion, opposition) follow.
bool is_surface_slot(int slot);

/// Surface features only: punctuation, quotations, emoticons, pronouns,
/// interjections, lengths, and the named-entity heuristic. Lexicon slots
/// stay zero and surface_only is set.
FeatureVector extract_surface(const Tweet& tweet, const LexiconSet& lex);

/// Surface features plus the language-dependent lexicon counts.
FeatureVector extract_full(const Tweet& tweet, const LexiconSet& lex);

/// Reads the eight per-category word-list files under <dir>/<lang>/; a
/// missing file yields an empty set and a warning.
LexiconSet load_lexicons(const std::string& dir, Lang lang);

/// Classifier-ready feature matrix. Surface mode keeps the slots the
/// cross-lingual setup relies on (everything before the named-entity
/// heuristic); full mode uses all slots. Each tweet's features come from
/// its own language's lexicons.
struct FeatureMatrix {
  std::vector<std::vector<double>> x;
  std::vector<Label> y;
  std::vector<std::string> ids;
  std::vector<std::string> slot_names;
};

std::vector<std::string> classifier_slot_names(bool surface_only);

FeatureMatrix build_feature_matrix(
    const Dataset& ds, const std::map<Lang, const LexiconSet*>& lexicons,
    bool surface_only);

}  // namespace irony
