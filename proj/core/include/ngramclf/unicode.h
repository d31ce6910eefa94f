// Copyright 2026 The ngramclf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// UTF-8 helpers shared by the corpus and feature code.

#ifndef NGRAMCLF_UNICODE_H_
#define NGRAMCLF_UNICODE_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ngramclf::unicode {

// Number of Unicode scalar values; ill-formed sequences count as one each.
std::size_t length(std::string_view utf8);

// Full Unicode lowercase mapping (root locale). Ill-formed input sequences
// are replaced by U+FFFD.
std::string to_lower(std::string_view utf8);

// Byte offsets of every scalar boundary, including the final end offset, so
// scalar i spans [offsets[i], offsets[i + 1]). Input must be well-formed.
std::vector<std::size_t> boundaries(std::string_view utf8);

}  // namespace ngramclf::unicode

#endif  // NGRAMCLF_UNICODE_H_
