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
#include "core/embeddings.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <sstream>

#include "core/common.hpp"
#include "core/csv.hpp"
#include "core/tokenizer.hpp"
#include "core/utf8.hpp"

namespace irony {

std::optional<int> EmbeddingTable::find(const std::string& word) const {
  auto it = index.find(word);
  if (it != index.end()) return it->second;
  const std::string lower = utf8::latin_lower(word);
  if (lower != word) {
    it = index.find(lower);
    if (it != index.end()) return it->second;
  }
  return std::nullopt;
}

EmbeddingTable load_embeddings(const std::string& path, std::int64_t max_vocab) {
  const std::string text = read_text_file(path);
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::format, path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::int64_t declared_count = 0;
  int dim = 0;
  {
    std::istringstream header(line);
    if (!(header >> declared_count >> dim)) {
      fail(ErrorCode::format, path + ": bad header, expected '<count> <dim>'");
    }
  }
  if (dim <= 0) {
    fail(ErrorCode::format,
         path + ": declared dimension must be positive, got " +
             std::to_string(dim));
  }

  EmbeddingTable table;
  table.dim = dim;
  std::vector<double> flat;
  std::int64_t row_no = 1;
  std::int64_t duplicates = 0;
  while (std::getline(in, line)) {
    ++row_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (max_vocab > 0 &&
        static_cast<std::int64_t>(table.words.size()) >= max_vocab) {
      break;
    }
    const std::size_t sp = line.find(' ');
    if (sp == std::string::npos) {
      fail(ErrorCode::format,
           path + ", line " + std::to_string(row_no) + ": no vector data");
    }
    std::string word = line.substr(0, sp);
    if (word.empty()) {
      fail(ErrorCode::format,
           path + ", line " + std::to_string(row_no) + ": empty word");
    }
    const char* p = line.c_str() + sp;
    int got = 0;
    std::vector<double> vec(dim);
    while (*p != '\0') {
      while (*p == ' ') ++p;
      if (*p == '\0') break;
      char* end = nullptr;
      const double v = std::strtod(p, &end);
      if (end == p || (*end != '\0' && *end != ' ')) {
        fail(ErrorCode::format, path + ", line " + std::to_string(row_no) +
                                    ": non-numeric component for word '" +
                                    word + "'");
      }
      if (got < dim) vec[got] = v;
      ++got;
      p = end;
    }
    if (got != dim) {
      fail(ErrorCode::format, path + ", line " + std::to_string(row_no) +
                                  ": word '" + word + "' has " +
                                  std::to_string(got) + " components, expected " +
                                  std::to_string(dim));
    }
    if (table.index.count(word)) {
      ++duplicates;
      continue;  // first occurrence wins
    }
    table.index.emplace(word, static_cast<int>(table.words.size()));
    table.words.push_back(std::move(word));
    flat.insert(flat.end(), vec.begin(), vec.end());
  }
  if (duplicates > 0) {
    log::warn(path + ": " + std::to_string(duplicates) +
              " duplicate word(s), kept first occurrence");
  }
  if (max_vocab == 0 &&
      declared_count != static_cast<std::int64_t>(table.words.size()) + duplicates) {
    log::warn(path + ": header declares " + std::to_string(declared_count) +
              " vectors, found " +
              std::to_string(table.words.size() + duplicates));
  }
  const auto n = static_cast<Eigen::Index>(table.words.size());
  table.vectors = Eigen::Map<
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      flat.data(), n, dim);
  return table;
}

void save_embeddings(const EmbeddingTable& table, const std::string& path) {
  std::string out = std::to_string(table.size()) + " " +
                    std::to_string(table.dim) + "\n";
  for (std::size_t i = 0; i < table.size(); ++i) {
    out += table.words[i];
    for (int j = 0; j < table.dim; ++j) {
      out.push_back(' ');
      out += format_double(table.vectors(static_cast<Eigen::Index>(i), j));
    }
    out.push_back('\n');
  }
  write_text_file(path, out);
}

EmbeddingTable normalize(const EmbeddingTable& table) {
  EmbeddingTable out = table;
  for (Eigen::Index i = 0; i < out.vectors.rows(); ++i) {
    const double norm = out.vectors.row(i).norm();
    if (norm == 0.0) {
      fail(ErrorCode::numeric,
           "normalize: zero vector for word '" + out.words[i] + "'");
    }
    out.vectors.row(i) /= norm;
  }
  out.normalized = true;
  return out;
}

CoverageReport coverage(const Dataset& ds, const EmbeddingTable& table) {
  if (ds.tweets.empty()) {
    fail(ErrorCode::invalid_argument, "coverage: empty dataset");
  }
  std::int64_t tokens_total = 0;
  std::int64_t tokens_in = 0;
  // Types are keyed on the Latin-lowercased form; a type counts as in-vocab
  // when any of its surface forms resolved. Ordered map for determinism.
  std::map<std::string, std::pair<std::int64_t, bool>> type_freq;
  for (const auto& tweet : ds.tweets) {
    for (const auto& tok : tokenize(tweet.text, tweet.lang)) {
      if (!is_word_like(tok.kind)) continue;
      ++tokens_total;
      const bool found = table.find(tok.text).has_value();
      if (found) ++tokens_in;
      auto& entry = type_freq[utf8::latin_lower(tok.text)];
      ++entry.first;
      entry.second = entry.second || found;
    }
  }
  if (tokens_total == 0) {
    fail(ErrorCode::invalid_argument, "coverage: dataset has no word tokens");
  }
  CoverageReport report;
  report.n_tokens = tokens_total;
  report.n_types = static_cast<std::int64_t>(type_freq.size());
  std::int64_t types_in = 0;
  for (const auto& [word, entry] : type_freq) {
    if (entry.second) {
      ++types_in;
    } else {
      report.oov_types.emplace_back(word, entry.first);
    }
  }
  std::stable_sort(report.oov_types.begin(), report.oov_types.end(),
                   [](const auto& a, const auto& b) {
                     if (a.second != b.second) return a.second > b.second;
                     return a.first < b.first;
                   });
  report.token_coverage =
      static_cast<double>(tokens_in) / static_cast<double>(tokens_total);
  report.type_coverage =
      static_cast<double>(types_in) / static_cast<double>(report.n_types);
  return report;
}

std::string coverage_csv(const CoverageReport& report) {
  std::string out = "oov_word,frequency\n";
  for (const auto& [word, freq] : report.oov_types) {
    out += csv::join_row({word, std::to_string(freq)});
    out += "\n";
  }
  return out;
}

}  // namespace irony
