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

// Corpus preprocessing: text normalization, tokenization, PoS-tagged line
// parsing and lazy sentence streams over files.
//
// Normalization grammar (applied in this order):
//   URL    a maximal non-space run starting at a word boundary with either
//          "www." (any case) or a scheme [A-Za-z][A-Za-z0-9+.-]* followed
//          by "://". Trailing .,;:!?)]}'" are left outside the match.
//   EMAIL  local@domain where local is [A-Za-z0-9._%+-]+, domain is
//          [A-Za-z0-9.-]+ with at least one dot and no empty label. The
//          characters immediately around the match may not be '@' or
//          another local-part character.
//   digits every ASCII digit becomes '0' (run lengths are preserved).
//   case   lowercasing of ASCII and Latin-1/Latin Extended-A letters,
//          except ASCII letter runs spelling exactly URL or EMAIL.

#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace semb::corpus {

enum class HyphenPolicy { keep, split };
enum class Encoding { utf8, latin1 };
enum class Mode { raw, tagged };

struct NormalizationRules {
  bool map_digits_to_zero = true;
  bool map_urls = true;
  bool map_emails = true;
  bool lowercase = true;
  HyphenPolicy hyphen_policy = HyphenPolicy::keep;
  Encoding encoding = Encoding::utf8;
};

inline constexpr std::string_view kUrlToken = "URL";
inline constexpr std::string_view kEmailToken = "EMAIL";

struct TaggedToken {
  std::string surface;
  std::string tag;

  friend bool operator==(const TaggedToken&, const TaggedToken&) = default;
};

/// Throws DecodeError with the offending byte offset.
void validate_utf8(std::string_view text);

/// Latin-1 bytes to UTF-8.
std::string latin1_to_utf8(std::string_view text);

std::string normalize_text(std::string_view text,
                           const NormalizationRules& rules = {});

std::vector<std::string> tokenize(std::string_view line,
                                  const NormalizationRules& rules = {});

struct TagParseOptions {
  char delimiter = '/';
  bool strict = true;
  /// 1-based line number used in error messages.
  std::size_t line_number = 1;
};

/// Splits every whitespace token at its last delimiter. In lenient mode a
/// token with no delimiter gets tag "X" and bumps `*lenient_events`.
std::vector<TaggedToken> read_tagged_line(std::string_view line,
                                          const TagParseOptions& options = {},
                                          std::size_t* lenient_events = nullptr);

std::string serialize_tagged(const std::vector<TaggedToken>& tokens,
                             char delimiter = '/');

/// Corpus location and interpretation, shared by the vocabulary builder and
/// the trainers.
struct CorpusSource {
  std::string path;
  Mode mode = Mode::raw;
  NormalizationRules rules;
  char tag_delimiter = '/';
  bool strict_tags = true;
  /// Separator between surface and tag in tagged keys.
  char key_separator = '|';
};

/// Single-consumer, line-at-a-time reader. Memory use is bounded by the
/// longest line, never by the file size. Raw mode yields tokenized
/// normalized words; tagged mode yields tagged keys (surface|TAG).
class SentenceStream {
 public:
  explicit SentenceStream(const CorpusSource& source);
  /// Restricts reading to the byte range [begin, end). A range not starting
  /// at 0 skips the partial line it lands in; a line straddling `end` is
  /// read to completion.
  SentenceStream(const CorpusSource& source, std::uint64_t begin,
                 std::uint64_t end);

  /// Returns false at end of input. Empty lines yield empty sentences.
  bool next(std::vector<std::string>& tokens);

  std::size_t line_number() const noexcept { return line_number_; }
  std::size_t lenient_events() const noexcept { return lenient_events_; }

 private:
  CorpusSource source_;
  std::ifstream in_;
  std::uint64_t position_ = 0;
  std::uint64_t end_ = 0;
  std::size_t line_number_ = 0;
  std::size_t lenient_events_ = 0;
  std::string line_;
};

/// Byte offsets splitting `path` into `parts` newline-aligned ranges.
std::vector<std::uint64_t> partition_file(const std::string& path,
                                          std::size_t parts);

std::string tagged_key(std::string_view surface, std::string_view tag,
                       char separator = '|');

}  // namespace semb::corpus
