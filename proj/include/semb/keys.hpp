// Copyright 2026 The semb Authors. All Rights Reserved.
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

// Key grammar shared by the trainers and vector files:
//
//   plain   surface
//   tagged  surface|TAG
//   sense   surface#k            (k = 0-based sense index)
//
// A literal '\', '#' or '|' inside a surface or tag is written with a
// leading backslash.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace semb::keys {

enum class KeyKind : std::uint8_t { plain = 0, tagged = 1, sense = 2 };

inline constexpr char kSenseSeparator = '#';
inline constexpr char kTagSeparator = '|';

struct KeyParts {
  std::string surface;
  std::string tag;  // empty for plain and sense keys
  int sense = -1;   // -1 unless a sense key

  bool is_tagged() const noexcept { return !tag.empty(); }
  bool is_sense() const noexcept { return sense >= 0; }
};

inline std::string escape(std::string_view raw, char extra = kTagSeparator) {
  std::string out;
  out.reserve(raw.size());
  for (char ch : raw) {
    if (ch == '\\' || ch == kSenseSeparator || ch == kTagSeparator ||
        ch == extra)
      out.push_back('\\');
    out.push_back(ch);
  }
  return out;
}

inline std::string word_key(std::string_view token) { return escape(token); }

inline std::string tagged_key(std::string_view surface, std::string_view tag,
                              char separator = kTagSeparator) {
  std::string key = escape(surface, separator);
  key.push_back(separator);
  key += escape(tag, separator);
  return key;
}

inline std::string sense_key(std::string_view surface, int sense) {
  return escape(surface) + kSenseSeparator + std::to_string(sense);
}

/// Splits an encoded key. Unescaped '#' followed only by digits marks a
/// sense index; the last unescaped '|' separates the tag.
KeyParts parse(std::string_view key);

/// Surface form with escapes removed.
inline std::string surface_of(std::string_view key) {
  return parse(key).surface;
}

}  // namespace semb::keys
