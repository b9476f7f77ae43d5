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
#include "core/features.hpp"

#include <filesystem>
#include <fstream>

#include "core/common.hpp"
#include "core/tokenizer.hpp"
#include "core/utf8.hpp"

namespace irony {

const std::vector<std::string>& feature_slot_names() {
  static const std::vector<std::string> kNames = {
      "exclamation_count",      "question_count",
      "ellipsis_count",         "other_punct_count",
      "quotation_count",        "pos_emoticon_count",
      "neg_emoticon_count",     "personal_pronoun_count",
      "interjection_count",     "length_tokens",
      "length_chars",           "named_entity_count",
      "negation_count",         "opinion_pos_count",
      "opinion_neg_count",      "opposition_count",
  };
  return kNames;
}

bool is_surface_slot(int slot) { return slot <= kNamedEntityCount; }

namespace {

constexpr char32_t kEllipsisCp = 0x2026;

bool is_quote_open(char32_t cp) {
  return cp == 0x00AB || cp == 0x201C || cp == 0x2018;
}
char32_t matching_close(char32_t open) {
  switch (open) {
    case 0x00AB: return 0x00BB;  // « »
    case 0x201C: return 0x201D;  // " "
    case 0x2018: return 0x2019;  // ' '
  }
  return 0;
}

bool is_sentence_final(char32_t cp) {
  return cp == U'.' || cp == U'!' || cp == U'?' || cp == kEllipsisCp ||
         cp == 0x061F;
}

// Balanced-quote spans over the raw text. Straight quotes pair up
// sequentially; «», curly doubles and curly singles nest via a stack.
// Word-internal apostrophes are invisible here. Unmatched quote characters
// are reported so they can be counted as other punctuation.
struct QuoteCounts {
  int spans = 0;
  int unbalanced = 0;
};

QuoteCounts count_quotes(const std::vector<char32_t>& cps) {
  QuoteCounts qc;
  std::vector<char32_t> stack;  // pending paired-delimiter opens
  bool straight_double_open = false;
  bool straight_single_open = false;

  auto word_internal = [&](std::size_t i) {
    if (i == 0 || i + 1 >= cps.size()) return false;
    auto wordish = [](char32_t c) {
      return utf8::is_letter(c) || utf8::is_digit(c);
    };
    return wordish(cps[i - 1]) && wordish(cps[i + 1]);
  };

  for (std::size_t i = 0; i < cps.size(); ++i) {
    const char32_t cp = cps[i];
    if (is_quote_open(cp)) {
      stack.push_back(cp);
    } else if (cp == 0x00BB || cp == 0x201D) {
      if (!stack.empty() && matching_close(stack.back()) == cp) {
        stack.pop_back();
        ++qc.spans;
      } else {
        ++qc.unbalanced;
      }
    } else if (cp == 0x2019) {
      // Curly right single quote doubles as an apostrophe.
      if (word_internal(i)) continue;
      if (!stack.empty() && matching_close(stack.back()) == cp) {
        stack.pop_back();
        ++qc.spans;
      } else {
        ++qc.unbalanced;
      }
    } else if (cp == U'"') {
      if (straight_double_open) ++qc.spans;
      straight_double_open = !straight_double_open;
    } else if (cp == U'\'') {
      if (word_internal(i)) continue;
      if (straight_single_open) ++qc.spans;
      straight_single_open = !straight_single_open;
    }
  }
  qc.unbalanced += static_cast<int>(stack.size());
  if (straight_double_open) ++qc.unbalanced;
  if (straight_single_open) ++qc.unbalanced;
  return qc;
}

bool is_any_quote(char32_t cp) {
  return cp == U'"' || cp == U'\'' || cp == 0x00AB || cp == 0x00BB ||
         cp == 0x2018 || cp == 0x2019 || cp == 0x201C || cp == 0x201D;
}

std::string strip_variation_selectors(const std::string& s) {
  std::string out;
  for (char32_t cp : utf8::decode(s)) {
    if (cp == 0xFE0F || cp == 0xFE0E) continue;
    out += utf8::encode(cp);
  }
  return out;
}

bool in_set(const std::set<std::string>& set, const std::string& word) {
  return set.count(utf8::latin_lower(word)) > 0;
}

// Capitalized Latin word tokens that neither start the tweet nor follow
// sentence-final punctuation. Always 0 for Arabic.
int count_named_entities(const TokenList& tokens, Lang lang) {
  if (lang == Lang::ar) return 0;
  int count = 0;
  bool first_word = true;
  bool after_sentence_end = false;
  for (const auto& tok : tokens) {
    if (tok.kind == TokenKind::punctuation) {
      for (char32_t cp : utf8::decode(tok.text)) {
        if (is_sentence_final(cp)) after_sentence_end = true;
      }
      continue;
    }
    if (!is_word_like(tok.kind)) continue;
    const char32_t first_cp = utf8::decode(tok.text).front();
    const bool capitalized = utf8::is_latin_letter(first_cp) &&
                             utf8::latin_lower(first_cp) != first_cp;
    if (capitalized && !first_word && !after_sentence_end) ++count;
    first_word = false;
    after_sentence_end = false;
  }
  return count;
}

FeatureVector extract(const Tweet& tweet, const LexiconSet& lex, bool full) {
  if (lex.lang != tweet.lang) {
    fail(ErrorCode::invalid_argument,
         "feature extraction: lexicon language '" + to_string(lex.lang) +
             "' does not match tweet language '" + to_string(tweet.lang) + "'");
  }
  FeatureVector fv;
  fv.surface_only = !full;
  auto& v = fv.values;

  const TokenList tokens = tokenize(tweet.text, tweet.lang);
  const auto cps = utf8::decode(tweet.text);

  v[kLengthTokens] = static_cast<double>(tokens.size());
  v[kLengthChars] = static_cast<double>(cps.size());

  const QuoteCounts qc = count_quotes(cps);
  v[kQuotationCount] = qc.spans;
  v[kOtherPunctCount] = qc.unbalanced;

  for (const auto& tok : tokens) {
    if (tok.kind == TokenKind::punctuation) {
      const auto pc = utf8::decode(tok.text);
      std::size_t i = 0;
      while (i < pc.size()) {
        const char32_t cp = pc[i];
        if (cp == U'.') {
          std::size_t run = 0;
          while (i + run < pc.size() && pc[i + run] == U'.') ++run;
          if (run >= 3) {
            v[kEllipsisCount] += 1;
          } else {
            v[kOtherPunctCount] += static_cast<double>(run);
          }
          i += run;
          continue;
        }
        if (cp == U'!') ++v[kExclamationCount];
        else if (cp == U'?' || cp == 0x061F) ++v[kQuestionCount];
        else if (cp == kEllipsisCp) ++v[kEllipsisCount];
        else if (!is_any_quote(cp)) ++v[kOtherPunctCount];
        ++i;
      }
      continue;
    }
    if (tok.kind == TokenKind::emoticon) {
      const std::string bare = strip_variation_selectors(tok.text);
      if (lex.emoticons_positive.count(bare)) ++v[kPosEmoticonCount];
      else if (lex.emoticons_negative.count(bare)) ++v[kNegEmoticonCount];
      continue;
    }
    if (!is_word_like(tok.kind)) continue;
    // Custom text emoticons from the lexicon may tokenize as words.
    const std::string bare = strip_variation_selectors(tok.text);
    if (lex.emoticons_positive.count(bare)) {
      ++v[kPosEmoticonCount];
      continue;
    }
    if (lex.emoticons_negative.count(bare)) {
      ++v[kNegEmoticonCount];
      continue;
    }
    if (in_set(lex.personal_pronouns, tok.text)) ++v[kPersonalPronounCount];
    if (in_set(lex.interjections, tok.text)) ++v[kInterjectionCount];
    if (full) {
      if (in_set(lex.negation, tok.text)) ++v[kNegationCount];
      if (in_set(lex.opinion_positive, tok.text)) ++v[kOpinionPosCount];
      if (in_set(lex.opinion_negative, tok.text)) ++v[kOpinionNegCount];
      if (in_set(lex.opposition, tok.text)) ++v[kOppositionCount];
    }
  }

  v[kNamedEntityCount] = count_named_entities(tokens, tweet.lang);
  return fv;
}

std::set<std::string> load_word_list(const std::filesystem::path& file,
                                     bool latin_lower) {
  std::set<std::string> out;
  std::ifstream in(file);
  if (!in) return out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    line = trim(line);
    if (line.empty()) continue;
    out.insert(latin_lower ? utf8::latin_lower(line) : line);
  }
  return out;
}

}  // namespace

FeatureVector extract_surface(const Tweet& tweet, const LexiconSet& lex) {
  return extract(tweet, lex, false);
}

FeatureVector extract_full(const Tweet& tweet, const LexiconSet& lex) {
  return extract(tweet, lex, true);
}

LexiconSet load_lexicons(const std::string& dir, Lang lang) {
  namespace fs = std::filesystem;
  const fs::path root = fs::path(dir) / to_string(lang);
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    fail(ErrorCode::io, "lexicon directory not found: " + root.string());
  }
  LexiconSet lex;
  lex.lang = lang;
  struct Entry {
    const char* file;
    std::set<std::string>* target;
    bool lower;
  };
  const Entry entries[] = {
      {"negation.txt", &lex.negation, true},
      {"opinion_pos.txt", &lex.opinion_positive, true},
      {"opinion_neg.txt", &lex.opinion_negative, true},
      {"opposition.txt", &lex.opposition, true},
      {"pronouns.txt", &lex.personal_pronouns, true},
      {"interjections.txt", &lex.interjections, true},
      {"emoticons_pos.txt", &lex.emoticons_positive, false},
      {"emoticons_neg.txt", &lex.emoticons_negative, false},
  };
  for (const auto& e : entries) {
    const fs::path file = root / e.file;
    if (!fs::exists(file, ec)) {
      log::warn("lexicons: missing " + file.string() + ", using empty set");
      continue;
    }
    *e.target = load_word_list(file, e.lower);
  }
  return lex;
}

}  // namespace irony
