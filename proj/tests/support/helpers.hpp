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

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <string>
#include <vector>

#include "core/common.hpp"
#include "core/corpus.hpp"
#include "core/features.hpp"

namespace testutil {

/// Captures log::warn messages for the lifetime of the object.
class WarningCapture {
 public:
  WarningCapture() {
    irony::log::set_handler([this](const std::string& msg) {
      messages.push_back(msg);
    });
  }
  ~WarningCapture() { irony::log::reset_handler(); }
  bool any_contains(const std::string& needle) const {
    for (const auto& m : messages) {
      if (m.find(needle) != std::string::npos) return true;
    }
    return false;
  }
  std::vector<std::string> messages;
};

/// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path = std::filesystem::temp_directory_path() /
           ("ironykit_" + tag + "_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
  std::filesystem::path path;
};

inline irony::Tweet tweet(const std::string& id, const std::string& text,
                          irony::Lang lang = irony::Lang::en,
                          irony::Label label = irony::Label::non_ironic) {
  return irony::Tweet{id, text, lang, label};
}

inline irony::LexiconSet english_lexicons() {
  irony::LexiconSet lex;
  lex.lang = irony::Lang::en;
  lex.negation = {"not", "no", "never"};
  lex.opinion_positive = {"good", "great", "nice"};
  lex.opinion_negative = {"bad", "awful"};
  lex.opposition = {"but", "although"};
  lex.personal_pronouns = {"i", "you", "he", "she", "we", "they"};
  lex.interjections = {"oh", "wow", "ugh"};
  lex.emoticons_positive = {":)", ":-)", ":D", "<3"};
  lex.emoticons_negative = {":(", ":-(", ":/"};
  return lex;
}

/// Repo root so tests can reach the bundled data/ directory. Injected by
/// the build; falls back to the working directory.
#ifndef IRONYKIT_SOURCE_DIR
#define IRONYKIT_SOURCE_DIR "."
#endif
inline std::string source_dir() { return IRONYKIT_SOURCE_DIR; }

}  // namespace testutil
