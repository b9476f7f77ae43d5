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
#include "core/corpus.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include <json.hpp>

#include "core/common.hpp"
#include "core/csv.hpp"
#include "core/utf8.hpp"

namespace irony {

Lang lang_from_string(const std::string& s) {
  if (s == "ar") return Lang::ar;
  if (s == "fr") return Lang::fr;
  if (s == "en") return Lang::en;
  fail(ErrorCode::format, "unknown language: '" + s + "'");
}

std::string to_string(Lang l) {
  switch (l) {
    case Lang::ar: return "ar";
    case Lang::fr: return "fr";
    case Lang::en: return "en";
  }
  return "?";
}

Label label_from_string(const std::string& s) {
  if (s == "ironic") return Label::ironic;
  if (s == "non_ironic") return Label::non_ironic;
  fail(ErrorCode::format, "unknown label: '" + s + "'");
}

std::string to_string(Label l) {
  return l == Label::ironic ? "ironic" : "non_ironic";
}

PreprocessConfig PreprocessConfig::defaults() {
  PreprocessConfig cfg;
  cfg.irony_hashtags[Lang::ar] = {"#سخرية", "#مسخرة", "#تهكم", "#استهزاء"};
  cfg.irony_hashtags[Lang::fr] = {"#ironie", "#sarcasme"};
  cfg.irony_hashtags[Lang::en] = {"#irony", "#sarcasm"};
  return cfg;
}

PreprocessConfig PreprocessConfig::from_json_file(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::format, "preprocess config " + path + ": " + e.what());
  }
  PreprocessConfig cfg;
  if (!j.contains("irony_hashtags") || !j["irony_hashtags"].is_object()) {
    fail(ErrorCode::format,
         "preprocess config " + path + ": missing irony_hashtags object");
  }
  for (auto& [lang_str, arr] : j["irony_hashtags"].items()) {
    Lang lang = lang_from_string(lang_str);
    std::set<std::string> tags;
    for (auto& v : arr) {
      std::string tag = v.get<std::string>();
      if (tag.empty()) continue;
      if (tag[0] != '#') tag = "#" + tag;
      tags.insert(tag);
    }
    if (tags.empty()) {
      fail(ErrorCode::format, "preprocess config " + path +
                                  ": empty hashtag set for " + lang_str);
    }
    cfg.irony_hashtags[lang] = std::move(tags);
  }
  cfg.strip_mentions = j.value("strip_mentions", true);
  cfg.strip_urls = j.value("strip_urls", true);
  cfg.strip_foreign_chars = j.value("strip_foreign_chars", true);
  cfg.lowercase_latin = j.value("lowercase_latin", true);
  return cfg;
}

Dataset load_corpus(const std::string& path, std::optional<Lang> expected_lang) {
  const std::string text = read_text_file(path);
  auto rows = csv::parse(text);
  if (rows.empty()) fail(ErrorCode::format, path + ": empty corpus");
  const std::vector<std::string> header = {"id", "lang", "label", "text"};
  if (rows[0] != header) {
    fail(ErrorCode::format,
         path + ": bad header, expected 'id,lang,label,text'");
  }
  if (rows.size() == 1) fail(ErrorCode::format, path + ": empty corpus");

  Dataset ds;
  ds.tweets.reserve(rows.size() - 1);
  std::unordered_set<std::string> seen_ids;
  bool first = true;
  Lang common = Lang::ar;
  bool mixed = false;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::string where = path + ", row " + std::to_string(r + 1);
    if (row.size() != 4) {
      fail(ErrorCode::format, where + ": expected 4 columns, got " +
                                  std::to_string(row.size()));
    }
    Tweet t;
    t.id = row[0];
    try {
      t.lang = lang_from_string(row[1]);
      t.label = label_from_string(row[2]);
    } catch (const Error& e) {
      fail(ErrorCode::format, where + ": " + e.what());
    }
    t.text = row[3];
    if (trim(t.text).empty()) fail(ErrorCode::format, where + ": empty text");
    if (expected_lang && t.lang != *expected_lang) {
      fail(ErrorCode::format, where + ": language '" + row[1] +
                                  "' does not match expected '" +
                                  to_string(*expected_lang) + "'");
    }
    if (!seen_ids.insert(t.id).second) {
      fail(ErrorCode::format, where + ": duplicate id '" + t.id + "'");
    }
    if (first) {
      common = t.lang;
      first = false;
    } else if (t.lang != common) {
      mixed = true;
    }
    ds.tweets.push_back(std::move(t));
  }
  ds.lang = mixed ? DatasetLang::mixed_tag() : DatasetLang::of(common);
  return ds;
}

void save_corpus(const Dataset& ds, const std::string& path) {
  std::string out = "id,lang,label,text\n";
  for (const auto& t : ds.tweets) {
    out += csv::join_row({t.id, to_string(t.lang), to_string(t.label), t.text});
    out += "\n";
  }
  write_text_file(path, out);
}

namespace {

bool is_url_chunk(const std::string& chunk) {
  if (chunk.find("://") != std::string::npos) return true;
  const std::string lower = utf8::latin_lower(chunk);
  return lower.rfind("www.", 0) == 0;
}

// A chunk is foreign when it has at least one letter and every letter
// belongs to the out-of-language script. Digits, punctuation, and emoticons
// never make a chunk foreign.
bool is_foreign_chunk(const std::string& chunk, Lang lang) {
  bool has_letter = false;
  for (char32_t cp : utf8::decode(chunk)) {
    if (!utf8::is_letter(cp)) continue;
    has_letter = true;
    const bool foreign = lang == Lang::ar
                             ? utf8::is_latin_letter(cp)
                             : (utf8::is_arabic_letter(cp) || utf8::is_cjk(cp));
    if (!foreign) return false;
  }
  return has_letter;
}

std::string strip_leading_hashes(const std::string& chunk) {
  std::size_t i = 0;
  while (i < chunk.size() && chunk[i] == '#') ++i;
  return chunk.substr(i);
}

}  // namespace

std::optional<Tweet> preprocess(const Tweet& tweet, const PreprocessConfig& cfg) {
  auto tags_it = cfg.irony_hashtags.find(tweet.lang);
  if (tags_it == cfg.irony_hashtags.end() || tags_it->second.empty()) {
    fail(ErrorCode::invalid_argument,
         "preprocess: no ironic hashtag set configured for language '" +
             to_string(tweet.lang) + "'");
  }
  // Hashtag comparison is case-insensitive for Latin scripts.
  std::set<std::string> tags;
  for (const auto& t : tags_it->second) tags.insert(utf8::latin_lower(t));

  // Split on Unicode whitespace into chunks, filter, and re-join.
  std::vector<std::string> chunks;
  {
    std::string current;
    for (char32_t cp : utf8::decode(tweet.text)) {
      if (utf8::is_space(cp)) {
        if (!current.empty()) chunks.push_back(std::move(current));
        current.clear();
      } else {
        current += utf8::encode(cp);
      }
    }
    if (!current.empty()) chunks.push_back(std::move(current));
  }

  std::vector<std::string> kept;
  for (std::string chunk : chunks) {
    if (cfg.strip_urls && is_url_chunk(chunk)) continue;
    if (cfg.strip_mentions && chunk.size() > 1 && chunk[0] == '@') continue;
    if (chunk[0] == '#') {
      if (tags.count(utf8::latin_lower(chunk))) continue;  // ironic hashtag
      chunk = strip_leading_hashes(chunk);
      if (chunk.empty()) continue;
    }
    if (cfg.strip_foreign_chars && is_foreign_chunk(chunk, tweet.lang)) continue;
    kept.push_back(chunk);
  }

  std::string text;
  for (std::size_t k = 0; k < kept.size(); ++k) {
    if (k) text.push_back(' ');
    text += kept[k];
  }
  if (text.empty()) return std::nullopt;
  Tweet out = tweet;
  out.text = std::move(text);
  return out;
}

Dataset preprocess_dataset(const Dataset& ds, const PreprocessConfig& cfg,
                           std::int64_t* dropped) {
  Dataset out;
  out.lang = ds.lang;
  std::int64_t n_dropped = 0;
  for (const auto& t : ds.tweets) {
    auto cleaned = preprocess(t, cfg);
    if (cleaned) {
      out.tweets.push_back(std::move(*cleaned));
    } else {
      ++n_dropped;
    }
  }
  if (n_dropped > 0) {
    log::warn("preprocess: dropped " + std::to_string(n_dropped) +
              " empty-after-preprocess tweet(s)");
  }
  if (dropped) *dropped = n_dropped;
  return out;
}

Split split(const Dataset& ds, std::int64_t n_train, std::int64_t n_test,
            std::uint64_t seed) {
  if (n_train < 0 || n_test < 0) {
    fail(ErrorCode::invalid_argument, "split: negative sizes");
  }
  const std::int64_t total = static_cast<std::int64_t>(ds.tweets.size());
  if (n_train + n_test > total) {
    fail(ErrorCode::invalid_argument,
         "split: n_train + n_test = " + std::to_string(n_train + n_test) +
             " exceeds dataset size " + std::to_string(total));
  }
  std::vector<std::size_t> order(ds.tweets.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);

  Split out;
  out.seed = seed;
  out.train.lang = ds.lang;
  out.test.lang = ds.lang;
  for (std::int64_t k = 0; k < n_train; ++k) {
    out.train.tweets.push_back(ds.tweets[order[k]]);
  }
  for (std::int64_t k = 0; k < n_test; ++k) {
    out.test.tweets.push_back(ds.tweets[order[n_train + k]]);
  }
  return out;
}

CorpusStats stats(const Dataset& ds) {
  CorpusStats st;
  for (const auto& t : ds.tweets) {
    ++st.n_total;
    if (t.label == Label::ironic) {
      ++st.n_ironic;
      ++st.per_lang_ironic[to_string(t.lang)];
    } else {
      ++st.n_non_ironic;
    }
    ++st.per_lang_total[to_string(t.lang)];
  }
  return st;
}

Dataset concat(const std::vector<const Dataset*>& parts) {
  Dataset out;
  bool first = true;
  bool mixed = false;
  Lang common = Lang::ar;
  std::unordered_set<std::string> ids;
  for (const Dataset* p : parts) {
    for (const auto& t : p->tweets) {
      if (!ids.insert(to_string(t.lang) + ":" + t.id).second) {
        fail(ErrorCode::invalid_argument,
             "concat: duplicate id '" + t.id + "' for language " +
                 to_string(t.lang));
      }
      if (first) {
        common = t.lang;
        first = false;
      } else if (t.lang != common) {
        mixed = true;
      }
      out.tweets.push_back(t);
    }
  }
  out.lang = mixed ? DatasetLang::mixed_tag() : DatasetLang::of(common);
  return out;
}

}  // namespace irony
