// Copyright (c) 2026 The fgtts Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FGTTS_COMMON_STRINGS_H_
#define FGTTS_COMMON_STRINGS_H_

#include <string>
#include <vector>

namespace fgtts {

std::string Trim(const std::string& s);

// Splits on any character in `delims`, keeping empty fields.
std::vector<std::string> Split(const std::string& s, const std::string& delims);

// Splits on runs of whitespace, dropping empty fields.
std::vector<std::string> SplitWhitespace(const std::string& s);

std::string Join(const std::vector<std::string>& parts, const std::string& sep);

// Formats a double with enough digits to round-trip.
std::string FormatDouble(double x);

// Parses a whole string as a double; throws InvalidInput otherwise.
double ParseDouble(const std::string& s);

}  // namespace fgtts

#endif  // FGTTS_COMMON_STRINGS_H_
