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
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace irony {

enum class Lang { ar, fr, en };
enum class Label { non_ironic = 0, ironic = 1 };

/// "mixed" is a dataset-level tag for multi-language training sets; a single
/// tweet always carries a concrete language.
struct DatasetLang {
  bool mixed = false;
  Lang lang = Lang::ar;

  static DatasetLang of(Lang l) { return {false, l}; }
  static DatasetLang mixed_tag() { return {true, Lang::ar}; }
};

Lang lang_from_string(const std::string& s);
std::string to_string(Lang l);
Label label_from_string(const std::string& s);
std::string to_string(Label l);

struct Tweet {
  std::string id;
  std::string text;  // non-empty after trimming
  Lang lang = Lang::en;
  Label label = Label::non_ironic;
};

struct Dataset {
  std::vector<Tweet> tweets;
  DatasetLang lang;
};

struct Split {
  Dataset train;
  Dataset test;
  std::uint64_t seed = 0;
};

struct CorpusStats {
  std::int64_t n_ironic = 0;
  std::int64_t n_non_ironic = 0;
  std::int64_t n_total = 0;
  std::map<std::string, std::int64_t> per_lang_total;
  std::map<std::string, std::int64_t> per_lang_ironic;
};

struct PreprocessConfig {
  /// Per-language ironic hashtag sets, entries stored with leading '#'.
  std::map<Lang, std::set<std::string>> irony_hashtags;
  bool strip_mentions = true;
  bool strip_urls = true;
  bool strip_foreign_chars = true;
  /// Lowercasing is applied at feature-extraction and embedding-lookup time,
  /// never to the stored tweet text; the flag is carried here so pipelines
  /// can switch it off in one place.
  bool lowercase_latin = true;

  static PreprocessConfig defaults();
  static PreprocessConfig from_json_file(const std::string& path);
};

/// Loads a UTF-8 CSV corpus (header "id,lang,label,text"). expected_lang of
/// nullopt accepts any mix of languages. Errors carry the 1-based file row.
Dataset load_corpus(const std::string& path, std::optional<Lang> expected_lang);

void save_corpus(const Dataset& ds, const std::string& path);

/// Removes URLs, @-mentions, the configured ironic hashtags, and (optionally)
/// foreign-script tokens; keeps other hashtags' text with '#' stripped;
/// collapses whitespace. Returns nullopt when nothing is left, so the caller
/// decides whether to drop. Idempotent.
std::optional<Tweet> preprocess(const Tweet& tweet, const PreprocessConfig& cfg);

/// Applies preprocess to every tweet, dropping the ones that come back
/// empty; *dropped (optional) receives the drop count.
Dataset preprocess_dataset(const Dataset& ds, const PreprocessConfig& cfg,
                           std::int64_t* dropped = nullptr);

/// Seeded uniform shuffle, then the first n_train rows become train and the
/// next n_test rows test. No stratification.
Split split(const Dataset& ds, std::int64_t n_train, std::int64_t n_test,
            std::uint64_t seed);

CorpusStats stats(const Dataset& ds);

Dataset concat(const std::vector<const Dataset*>& parts);

}  // namespace irony
