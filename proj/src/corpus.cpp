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

#include "semb/corpus.hpp"

#include <algorithm>
#include <filesystem>

#include "semb/error.hpp"
#include "semb/keys.hpp"

namespace semb::corpus {
namespace {

bool is_ascii_alpha(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}
bool is_ascii_digit(char c) { return c >= '0' && c <= '9'; }
bool is_ascii_alnum(char c) { return is_ascii_alpha(c) || is_ascii_digit(c); }
bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
         c == '\f';
}
bool is_scheme_char(char c) {
  return is_ascii_alnum(c) || c == '+' || c == '.' || c == '-';
}
bool is_local_char(char c) {
  return is_ascii_alnum(c) || c == '.' || c == '_' || c == '%' || c == '+' ||
         c == '-';
}
bool is_domain_char(char c) { return is_ascii_alnum(c) || c == '.' || c == '-'; }
bool is_url_trailer(char c) {
  return c == '.' || c == ',' || c == ';' || c == ':' || c == '!' ||
         c == '?' || c == ')' || c == ']' || c == '}' || c == '\'' ||
         c == '"';
}

bool iequals_prefix(std::string_view text, std::size_t at,
                    std::string_view prefix) {
  if (text.size() - at < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    char c = text[at + i];
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (c != prefix[i]) return false;
  }
  return true;
}

// Length of the URL starting at `i`, or 0.
std::size_t match_url(std::string_view s, std::size_t i) {
  if (i > 0 && is_ascii_alnum(s[i - 1])) return 0;
  std::size_t body_start = 0;
  if (iequals_prefix(s, i, "www.")) {
    body_start = i + 4;
  } else {
    if (!is_ascii_alpha(s[i])) return 0;
    std::size_t j = i;
    while (j < s.size() && is_scheme_char(s[j])) ++j;
    if (s.substr(j, 3) != "://") return 0;
    body_start = j + 3;
  }
  std::size_t end = body_start;
  while (end < s.size() && !is_ascii_space(s[end])) ++end;
  while (end > body_start && is_url_trailer(s[end - 1])) --end;
  if (end == body_start) return 0;
  return end - i;
}

std::string replace_urls(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (std::size_t len = match_url(s, i); len > 0) {
      out += kUrlToken;
      i += len;
    } else {
      out.push_back(s[i++]);
    }
  }
  return out;
}

bool valid_domain(std::string_view d) {
  if (d.find('.') == std::string_view::npos) return false;
  std::size_t start = 0;
  while (true) {
    std::size_t dot = d.find('.', start);
    std::size_t len = (dot == std::string_view::npos ? d.size() : dot) - start;
    if (len == 0) return false;
    if (dot == std::string_view::npos) return true;
    start = dot + 1;
  }
}

std::string replace_emails(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t copied = 0;  // s[0, copied) already emitted
  std::size_t at = 0;
  while ((at = s.find('@', at)) != std::string_view::npos) {
    std::size_t lo = at;
    while (lo > copied && is_local_char(s[lo - 1])) --lo;
    std::size_t hi = at + 1;
    while (hi < s.size() && is_domain_char(s[hi])) ++hi;
    bool ok = lo < at && hi > at + 1;
    // Left-maximality must hold in the full string, not just past `copied`.
    if (ok && lo > 0 && (is_local_char(s[lo - 1]) || s[lo - 1] == '@'))
      ok = false;
    if (ok && hi < s.size() && (is_local_char(s[hi]) || s[hi] == '@'))
      ok = false;
    std::size_t dom_end = hi;
    while (dom_end > at + 1 && (s[dom_end - 1] == '.' || s[dom_end - 1] == '-'))
      --dom_end;
    if (ok && !valid_domain(s.substr(at + 1, dom_end - at - 1))) ok = false;
    if (ok) {
      out.append(s.substr(copied, lo - copied));
      out += kEmailToken;
      copied = dom_end;
      at = dom_end;
    } else {
      ++at;
    }
  }
  out.append(s.substr(copied));
  return out;
}

// --- minimal UTF-8 codec -------------------------------------------------

struct Decoded {
  char32_t cp;
  std::size_t len;
};

Decoded decode_at(std::string_view s, std::size_t i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) return {b0, 1};
  std::size_t len = b0 >= 0xF0 ? 4 : b0 >= 0xE0 ? 3 : 2;
  char32_t cp = b0 & (len == 2 ? 0x1F : len == 3 ? 0x0F : 0x07);
  for (std::size_t k = 1; k < len; ++k)
    cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
  return {cp, len};
}

void encode(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

char32_t to_lower(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp < 0xC0) return cp;
  if (cp <= 0xDE) return cp == 0xD7 ? cp : cp + 0x20;
  if (cp >= 0x100 && cp <= 0x137) return cp | 1;
  if (cp >= 0x139 && cp <= 0x148) return (cp & 1) ? cp + 1 : cp;
  if (cp >= 0x14A && cp <= 0x177) return cp | 1;
  if (cp == 0x178) return 0xFF;
  if (cp >= 0x179 && cp <= 0x17E) return (cp & 1) ? cp + 1 : cp;
  if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) return cp + 0x20;
  if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
  if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;
  return cp;
}

std::string lowercase_except_sentinels(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (is_ascii_alpha(s[i])) {
      std::size_t j = i;
      while (j < s.size() && is_ascii_alpha(s[j])) ++j;
      std::string_view run = s.substr(i, j - i);
      if (run == kUrlToken || run == kEmailToken) {
        out.append(run);
      } else {
        for (char c : run)
          out.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c + 0x20) : c);
      }
      i = j;
      continue;
    }
    const auto d = decode_at(s, i);
    encode(to_lower(d.cp), out);
    i += d.len;
  }
  return out;
}

bool is_space_cp(char32_t cp) {
  return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\v' ||
         cp == '\f' || cp == 0xA0;
}

bool is_punct_cp(char32_t cp) {
  if (cp < 0x80) {
    const char c = static_cast<char>(cp);
    return (c >= '!' && c <= '/' ) || (c >= ':' && c <= '@') ||
           (c >= '[' && c <= '`' && c != '_') || (c >= '{' && c <= '~');
  }
  switch (cp) {
    case 0xA1: case 0xAB: case 0xB7: case 0xBB: case 0xBF:
    case 0x2013: case 0x2014: case 0x2018: case 0x2019: case 0x201C:
    case 0x201D: case 0x201E: case 0x2022: case 0x2026:
      return true;
    default:
      return false;
  }
}

bool is_letter_cp(char32_t cp) {
  if (cp < 0x80) return is_ascii_alpha(static_cast<char>(cp));
  return !is_punct_cp(cp) && !is_space_cp(cp) && cp != 0xD7 && cp != 0xF7;
}

bool is_digit_cp(char32_t cp) { return cp >= '0' && cp <= '9'; }

}  // namespace

void validate_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    std::size_t len;
    char32_t min_cp;
    if (b0 < 0x80) {
      ++i;
      continue;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      min_cp = 0x80;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      min_cp = 0x800;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      min_cp = 0x10000;
    } else {
      throw DecodeError(i);
    }
    if (i + len > s.size()) throw DecodeError(i);
    for (std::size_t k = 1; k < len; ++k)
      if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80)
        throw DecodeError(i);  // offset of the malformed sequence's lead byte
    const char32_t cp = decode_at(s, i).cp;
    if (cp < min_cp || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))
      throw DecodeError(i);
    i += len;
  }
}

std::string latin1_to_utf8(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) encode(static_cast<unsigned char>(c), out);
  return out;
}

std::string normalize_text(std::string_view text,
                           const NormalizationRules& rules) {
  std::string s;
  if (rules.encoding == Encoding::latin1) {
    s = latin1_to_utf8(text);
  } else {
    validate_utf8(text);
    s.assign(text);
  }
  if (rules.map_urls) s = replace_urls(s);
  if (rules.map_emails) s = replace_emails(s);
  if (rules.map_digits_to_zero)
    std::replace_if(s.begin(), s.end(), is_ascii_digit, '0');
  if (rules.lowercase) s = lowercase_except_sentinels(s);
  return s;
}

std::vector<std::string> tokenize(std::string_view line,
                                  const NormalizationRules& rules) {
  struct Cp {
    char32_t cp;
    std::size_t at, len;
  };
  std::vector<Cp> cps;
  for (std::size_t i = 0; i < line.size();) {
    const auto d = decode_at(line, i);
    cps.push_back({d.cp, i, d.len});
    i += d.len;
  }

  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  auto text_of = [&](const Cp& c) { return line.substr(c.at, c.len); };

  for (std::size_t k = 0; k < cps.size(); ++k) {
    const char32_t cp = cps[k].cp;
    if (is_space_cp(cp)) {
      flush();
      continue;
    }
    if (!is_punct_cp(cp)) {
      current += text_of(cps[k]);
      continue;
    }
    const bool has_prev = !current.empty() && k > 0;
    const bool has_next = k + 1 < cps.size();
    const char32_t prev = has_prev ? cps[k - 1].cp : 0;
    const char32_t next = has_next ? cps[k + 1].cp : 0;
    bool internal = false;
    if (cp == '-' && rules.hyphen_policy == HyphenPolicy::keep)
      internal = has_prev && has_next && is_letter_cp(prev) &&
                 is_letter_cp(next);
    else if (cp == '\'' || cp == 0x2019)
      internal = has_prev && has_next && is_letter_cp(prev) &&
                 is_letter_cp(next);
    else if (cp == '.' || cp == ',')
      internal = has_prev && has_next && is_digit_cp(prev) &&
                 is_digit_cp(next);
    if (internal) {
      current += text_of(cps[k]);
    } else {
      flush();
      tokens.emplace_back(text_of(cps[k]));
    }
  }
  flush();
  return tokens;
}

std::vector<TaggedToken> read_tagged_line(std::string_view line,
                                          const TagParseOptions& options,
                                          std::size_t* lenient_events) {
  std::vector<TaggedToken> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_ascii_space(line[i])) ++i;
    if (i == line.size()) break;
    std::size_t j = i;
    while (j < line.size() && !is_ascii_space(line[j])) ++j;
    const std::string_view token = line.substr(i, j - i);
    const std::size_t cut = token.rfind(options.delimiter);
    if (cut == std::string_view::npos || cut == 0 ||
        cut + 1 == token.size()) {
      if (options.strict) {
        throw ParseError(cut == std::string_view::npos
                             ? "token without tag delimiter: '" +
                                   std::string(token) + "'"
                             : "empty surface or tag in '" +
                                   std::string(token) + "'",
                         options.line_number, i + 1);
      }
      if (lenient_events) ++*lenient_events;
      std::string_view surface =
          cut == std::string_view::npos || cut == 0 ? token
                                                    : token.substr(0, cut);
      out.push_back({std::string(surface), "X"});
    } else {
      out.push_back({std::string(token.substr(0, cut)),
                     std::string(token.substr(cut + 1))});
    }
    i = j;
  }
  return out;
}

std::string serialize_tagged(const std::vector<TaggedToken>& tokens,
                             char delimiter) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i].surface;
    out.push_back(delimiter);
    out += tokens[i].tag;
  }
  return out;
}

std::string tagged_key(std::string_view surface, std::string_view tag,
                       char separator) {
  return keys::tagged_key(surface, tag, separator);
}

SentenceStream::SentenceStream(const CorpusSource& source)
    : SentenceStream(source, 0, UINT64_MAX) {}

SentenceStream::SentenceStream(const CorpusSource& source, std::uint64_t begin,
                               std::uint64_t end)
    : source_(source), in_(source.path, std::ios::binary), end_(end) {
  if (!in_) throw StreamError(source.path, "cannot open for reading");
  if (begin > 0) {
    in_.seekg(static_cast<std::streamoff>(begin - 1));
    // Byte before `begin` tells whether `begin` already starts a line.
    char prev = 0;
    if (!in_.get(prev)) {
      position_ = end_;
      return;
    }
    position_ = begin;
    if (prev != '\n') {
      std::getline(in_, line_);
      position_ += line_.size() + (in_.eof() ? 0 : 1);
    }
  }
}

bool SentenceStream::next(std::vector<std::string>& tokens) {
  tokens.clear();
  if (position_ >= end_) return false;
  if (!std::getline(in_, line_)) {
    if (in_.bad()) throw StreamError(source_.path, "read failure");
    return false;
  }
  position_ += line_.size() + (in_.eof() ? 0 : 1);
  ++line_number_;
  if (!line_.empty() && line_.back() == '\r') line_.pop_back();

  if (source_.mode == Mode::raw) {
    tokens = tokenize(normalize_text(line_, source_.rules), source_.rules);
    return true;
  }
  TagParseOptions opts{source_.tag_delimiter, source_.strict_tags,
                       line_number_};
  for (auto& tok : read_tagged_line(line_, opts, &lenient_events_)) {
    tokens.push_back(keys::tagged_key(normalize_text(tok.surface, source_.rules),
                                      tok.tag, source_.key_separator));
  }
  return true;
}

std::vector<std::uint64_t> partition_file(const std::string& path,
                                          std::size_t parts) {
  std::error_code ec;
  const auto size = std::filesystem::file_size(path, ec);
  if (ec) throw StreamError(path, ec.message());
  parts = std::max<std::size_t>(parts, 1);
  std::vector<std::uint64_t> bounds;
  for (std::size_t p = 0; p <= parts; ++p)
    bounds.push_back(size * p / parts);
  return bounds;
}

}  // namespace semb::corpus
