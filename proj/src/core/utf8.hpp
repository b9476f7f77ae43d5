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
#include <string_view>
#include <vector>

namespace irony::utf8 {

/// Decodes the whole string; invalid byte sequences become U+FFFD.
std::vector<char32_t> decode(std::string_view s);

std::string encode(char32_t cp);
std::string encode(const std::vector<char32_t>& cps);

std::size_t count_codepoints(std::string_view s);

bool is_space(char32_t cp);
bool is_digit(char32_t cp);

/// Script tests cover the ranges that occur in the three supported
/// languages' tweets; they are lookup heuristics, not full Unicode tables.
bool is_latin_letter(char32_t cp);
bool is_arabic_letter(char32_t cp);
bool is_cjk(char32_t cp);
bool is_letter(char32_t cp);
bool is_punct(char32_t cp);
bool is_emoji(char32_t cp);

/// Lowercases Latin-script codepoints only (ASCII A-Z and the Latin-1
/// accented uppercase block); everything else passes through unchanged.
char32_t latin_lower(char32_t cp);
std::string latin_lower(std::string_view s);

}  // namespace irony::utf8
