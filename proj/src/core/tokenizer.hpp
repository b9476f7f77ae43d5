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

#include <string>
#include <vector>

#include "core/corpus.hpp"

namespace irony {

enum class TokenKind { word, punctuation, emoticon, hashtag_residue, number };

struct Token {
  std::string text;
  TokenKind kind;
};

using TokenList = std::vector<Token>;

/// Whitespace-and-punctuation tokenizer. Emoticons (ASCII inventory plus
/// emoji codepoints) are recognized as single tokens before punctuation
/// runs are split off; word-internal apostrophes and hyphens stay inside
/// word tokens. Arabic text gets no morphological treatment.
TokenList tokenize(const std::string& text, Lang lang);

/// The ASCII emoticon inventory the tokenizer recognizes (longest-match).
const std::vector<std::string>& builtin_emoticons();

bool is_word_like(TokenKind k);  // word, number, hashtag_residue

}  // namespace irony
