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

#include "ngramclf/unicode.h"

#include <unicode/ucasemap.h>
#include <unicode/ustring.h>
#include <unicode/utf8.h>

#include <memory>
#include <stdexcept>

namespace ngramclf::unicode {
namespace {

bool is_continuation(unsigned char c) { return (c & 0xC0) == 0x80; }

struct CaseMapCloser {
  void operator()(UCaseMap* map) const { ucasemap_close(map); }
};

// Replaces ill-formed sequences with U+FFFD.
std::string well_formed(std::string_view in) {
  std::string out;
  out.reserve(in.size());
  const auto* bytes = reinterpret_cast<const uint8_t*>(in.data());
  const auto n = static_cast<int32_t>(in.size());
  int32_t i = 0;
  while (i < n) {
    const int32_t start = i;
    UChar32 c;
    U8_NEXT(bytes, i, n, c);
    if (c < 0) {
      out += "\xEF\xBF\xBD";
    } else {
      out.append(in.substr(start, i - start));
    }
  }
  return out;
}

}  // namespace

std::size_t length(std::string_view utf8) {
  std::size_t n = 0;
  for (unsigned char c : utf8) n += is_continuation(c) ? 0 : 1;
  return n;
}

std::string to_lower(std::string_view utf8) {
  const std::string src = well_formed(utf8);
  if (src.empty()) return src;

  UErrorCode status = U_ZERO_ERROR;
  std::unique_ptr<UCaseMap, CaseMapCloser> map(
      ucasemap_open("", 0, &status));
  if (U_FAILURE(status)) throw std::runtime_error("ucasemap_open failed");

  // Full lowercase mapping can grow a string (e.g. U+0130 becomes two
  // scalars), so retry once with the size ICU reports.
  std::string dst(src.size() + 16, '\0');
  int32_t written = ucasemap_utf8ToLower(
      map.get(), dst.data(), static_cast<int32_t>(dst.size()), src.data(),
      static_cast<int32_t>(src.size()), &status);
  if (status == U_BUFFER_OVERFLOW_ERROR) {
    status = U_ZERO_ERROR;
    dst.assign(static_cast<std::size_t>(written), '\0');
    written = ucasemap_utf8ToLower(
        map.get(), dst.data(), static_cast<int32_t>(dst.size()), src.data(),
        static_cast<int32_t>(src.size()), &status);
  }
  if (U_FAILURE(status)) throw std::runtime_error("ucasemap_utf8ToLower failed");
  dst.resize(static_cast<std::size_t>(written));
  return dst;
}

std::vector<std::size_t> boundaries(std::string_view utf8) {
  std::vector<std::size_t> offsets;
  offsets.reserve(utf8.size() + 1);
  for (std::size_t i = 0; i < utf8.size(); ++i) {
    if (!is_continuation(static_cast<unsigned char>(utf8[i]))) {
      offsets.push_back(i);
    }
  }
  offsets.push_back(utf8.size());
  return offsets;
}

}  // namespace ngramclf::unicode
