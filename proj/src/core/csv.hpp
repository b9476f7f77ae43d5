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

namespace irony::csv {

/// RFC-4180 parse of a whole document. Quoted fields may contain commas,
/// doubled quotes, and newlines. Both \n and \r\n row separators accepted.
/// Rows are returned in file order; a trailing newline does not produce an
/// empty row.
std::vector<std::vector<std::string>> parse(const std::string& text);

/// Quotes a field only when it contains a comma, quote, or newline.
std::string escape_field(const std::string& field);

std::string join_row(const std::vector<std::string>& fields);

}  // namespace irony::csv
