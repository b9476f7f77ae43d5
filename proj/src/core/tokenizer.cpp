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
#include "core/tokenizer.hpp"

#include <algorithm>

#include "core/common.hpp"
#include "core/utf8.hpp"

namespace irony {

const std::vector<std::string>& builtin_emoticons() {
  static const std::vector<std::string> kEmoticons = [] {
    std::vector<std::string> v = {
        ":-)",  ":)",  ":-D", ":D",  "=)",  "=D",  ";-)", ";)",  ":-P",
        ":P",   ":-p", ":p",  "xD",  "XD",  ":3",  "^^",  "^_^", "<3",
        ":')",  ":-(", ":(",  ":'(", ";(",  ":-/", ":/",  ":-\\", ":\\",
        "D:",   ">:(", "</3", ":|",  ":-|", ":o",  ":O",  ":-o", ":-O",
    };
    // longest-first so matching at a position is a simple linear scan
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
      return a.size() != b.size() ? a.size() > b.size() : a < b;
    });
    return v;
  }();
  return kEmoticons;
}

bool is_word_like(TokenKind k) {
  return k == TokenKind::word || k == TokenKind::number ||
         k == TokenKind::hashtag_residue;
}

namespace {

struct Cp {
  char32_t cp;
  std::size_t byte;  // offset of this codepoint in the chunk
  std::size_t len;   // encoded length
};

std::vector<Cp> decode_positions(const std::string& s) {
  std::vector<Cp> out;
  std::size_t i = 0;
  for (char32_t cp : utf8::decode(s)) {
    std::size_t len = utf8::encode(cp).size();
    out.push_back({cp, i, len});
    i += len;
  }
  return out;
}

bool is_word_cp(char32_t cp) {
  return utf8::is_letter(cp) || utf8::is_digit(cp) || cp == U'_';
}

// Longest builtin emoticon starting at codepoint index i; empty if none.
// A letter-edged emoticon (xD, :P, D:) only matches at a word boundary, so
// it never fires inside an ordinary word.
std::string match_emoticon(const std::string& chunk, const std::vector<Cp>& cps,
                           std::size_t i) {
  const std::size_t at = cps[i].byte;
  for (const auto& e : builtin_emoticons()) {
    if (chunk.compare(at, e.size(), e) != 0) continue;
    const char32_t first = utf8::decode(e).front();
    const char32_t last = utf8::decode(e).back();
    if (is_word_cp(first) && i > 0 && is_word_cp(cps[i - 1].cp)) continue;
    std::size_t j = i;
    const std::size_t end = at + e.size();
    while (j < cps.size() && cps[j].byte < end) ++j;
    if (is_word_cp(last) && j < cps.size() && is_word_cp(cps[j].cp)) continue;
    return e;
  }
  return {};
}

// Apostrophes and hyphens between two word codepoints stay in the word.
bool is_word_internal(const std::vector<Cp>& cps, std::size_t idx) {
  char32_t cp = cps[idx].cp;
  if (cp != U'\'' && cp != 0x2019 && cp != U'-') return false;
  if (idx == 0 || idx + 1 >= cps.size()) return false;
  return is_word_cp(cps[idx - 1].cp) && is_word_cp(cps[idx + 1].cp);
}

TokenKind classify_word_run(const std::string& text) {
  bool has_digit = false;
  for (char32_t cp : utf8::decode(text)) {
    if (utf8::is_digit(cp)) {
      has_digit = true;
    } else if (cp != U'.' && cp != U',' && cp != U'%') {
      return TokenKind::word;
    }
  }
  return has_digit ? TokenKind::number : TokenKind::word;
}

void tokenize_chunk(const std::string& chunk, TokenList& out) {
  const auto cps = decode_positions(chunk);
  std::size_t i = 0;  // index into cps
  while (i < cps.size()) {
    const std::size_t at = cps[i].byte;

    std::string emo = match_emoticon(chunk, cps, i);
    if (!emo.empty()) {
      out.push_back({emo, TokenKind::emoticon});
      const std::size_t end = at + emo.size();
      while (i < cps.size() && cps[i].byte < end) ++i;
      continue;
    }

    const char32_t cp = cps[i].cp;

    if (utf8::is_emoji(cp)) {
      std::string text = utf8::encode(cp);
      ++i;
      if (i < cps.size() && cps[i].cp == 0xFE0F) {  // variation selector
        text += utf8::encode(cps[i].cp);
        ++i;
      }
      out.push_back({text, TokenKind::emoticon});
      continue;
    }

    if (cp == U'#' && i + 1 < cps.size() && is_word_cp(cps[i + 1].cp)) {
      ++i;
      while (i < cps.size() && cps[i].cp == U'#') ++i;
      std::string text;
      while (i < cps.size() && (is_word_cp(cps[i].cp) || is_word_internal(cps, i))) {
        text += utf8::encode(cps[i].cp);
        ++i;
      }
      out.push_back({text, TokenKind::hashtag_residue});
      continue;
    }

    if (utf8::is_punct(cp) && !is_word_internal(cps, i)) {
      std::string text;
      while (i < cps.size() && utf8::is_punct(cps[i].cp) &&
             !is_word_internal(cps, i)) {
        if (!match_emoticon(chunk, cps, i).empty()) break;
        if (cps[i].cp == U'#' && i + 1 < cps.size() && is_word_cp(cps[i + 1].cp))
          break;
        text += utf8::encode(cps[i].cp);
        ++i;
      }
      if (!text.empty()) out.push_back({text, TokenKind::punctuation});
      continue;
    }

    // word / number run
    std::string text;
    while (i < cps.size() && !utf8::is_emoji(cps[i].cp) &&
           (!utf8::is_punct(cps[i].cp) || is_word_internal(cps, i)) &&
           match_emoticon(chunk, cps, i).empty()) {
      text += utf8::encode(cps[i].cp);
      ++i;
    }
    if (!text.empty()) out.push_back({text, classify_word_run(text)});
  }
}

}  // namespace

TokenList tokenize(const std::string& text, Lang lang) {
  (void)lang;  // same whitespace+punctuation rules for all three languages
  if (trim(text).empty()) {
    fail(ErrorCode::invalid_argument, "tokenize: empty text");
  }
  TokenList out;
  std::string chunk;
  for (char32_t cp : utf8::decode(text)) {
    if (utf8::is_space(cp)) {
      if (!chunk.empty()) {
        tokenize_chunk(chunk, out);
        chunk.clear();
      }
    } else {
      chunk += utf8::encode(cp);
    }
  }
  if (!chunk.empty()) tokenize_chunk(chunk, out);
  return out;
}

}  // namespace irony
