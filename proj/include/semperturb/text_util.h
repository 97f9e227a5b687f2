// Copyright 2026 The semperturb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SEMPERTURB_TEXT_UTIL_H_
#define SEMPERTURB_TEXT_UTIL_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace semperturb {

std::vector<std::string> split(std::string_view text, char delim);
std::vector<std::string> split_whitespace(std::string_view text);
std::string_view trim(std::string_view text);
std::string to_lower_ascii(std::string_view text);

// Splits UTF-8 text into one string per code point. Invalid lead bytes are
// emitted as single-byte strings so no input byte is lost.
std::vector<std::string> utf8_code_points(std::string_view text);

// Strict numeric parsing: the whole field must be consumed. Throws
// Error(kMalformedFile) naming `what` on failure.
double parse_double(std::string_view field, std::string_view what);
std::int64_t parse_int(std::string_view field, std::string_view what);

// Reads a text file into lines, stripping a trailing '\r'. Throws Error(kIo)
// when the file cannot be opened.
std::vector<std::string> read_lines(const std::filesystem::path& path);

// Shortest decimal text that parses back to the identical double.
std::string format_double(double value);

}  // namespace semperturb

#endif  // SEMPERTURB_TEXT_UTIL_H_
