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

#include "semb/vecio.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include "semb/error.hpp"

namespace semb::vecio {
namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw StreamError(path, "cannot open for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StreamError(path, "cannot open for reading");
  return in;
}

// Splits on single spaces/tabs, skipping runs.
std::vector<std::string_view> fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i == line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view s, T& value) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  return ec == std::errc() && ptr == s.data() + s.size();
}

template <typename T>
void put_le(std::ostream& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  std::array<char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    std::reverse(bytes.begin(), bytes.end());
  out.write(bytes.data(), sizeof(T));
}

class BinaryReader {
 public:
  BinaryReader(std::ifstream& in, std::string path, std::uint64_t size)
      : in_(in), path_(std::move(path)), size_(size) {}

  void read(char* dst, std::size_t n) {
    if (offset_ + n > size_) {
      throw DataError(path_ + ": truncated file: expected at least " +
                      std::to_string(offset_ + n) + " bytes, found " +
                      std::to_string(size_));
    }
    in_.read(dst, static_cast<std::streamsize>(n));
    if (!in_) throw StreamError(path_, "read failure");
    offset_ += n;
  }

  template <typename T>
  T get_le() {
    std::array<char, sizeof(T)> bytes;
    read(bytes.data(), sizeof(T));
    if constexpr (std::endian::native == std::endian::big)
      std::reverse(bytes.begin(), bytes.end());
    T value;
    std::memcpy(&value, bytes.data(), sizeof(T));
    return value;
  }

  std::uint64_t offset() const { return offset_; }

 private:
  std::ifstream& in_;
  std::string path_;
  std::uint64_t size_;
  std::uint64_t offset_ = 0;
};

}  // namespace

void save_text(const KeyedVectors& model, const std::string& path,
               int precision) {
  auto out = open_out(path);
  out << model.size() << ' ' << model.dim() << '\n';
  std::array<char, 64> buf;
  std::string line;
  for (KeyedVectors::Index r = 0; r < model.size(); ++r) {
    line = model.key(r);
    for (KeyedVectors::Index c = 0; c < model.dim(); ++c) {
      auto [end, ec] =
          std::to_chars(buf.data(), buf.data() + buf.size(),
                        model.matrix()(r, c), std::chars_format::general,
                        precision);
      line.push_back(' ');
      line.append(buf.data(), end);
    }
    line.push_back('\n');
    out << line;
  }
  if (!out) throw StreamError(path, "write failure");
}

KeyedVectors load_text(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing header", 1);
  const auto header = fields(line);
  long long rows = 0, dim = 0;
  if (header.size() != 2 || !parse_number(header[0], rows) ||
      !parse_number(header[1], dim) || rows < 0 || dim < 1)
    throw ParseError("malformed header, expected \"V d\"", 1);

  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(rows));
  std::unordered_set<std::string> seen;
  RowMatrix<float> m(rows, dim);
  std::size_t line_no = 1;
  for (long long r = 0; r < rows; ++r) {
    ++line_no;
    if (!std::getline(in, line))
      throw ParseError("expected " + std::to_string(rows) + " rows, found " +
                           std::to_string(r),
                       line_no);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto f = fields(line);
    if (f.size() != static_cast<std::size_t>(dim) + 1)
      throw ParseError("row has " +
                           std::to_string(f.empty() ? 0 : f.size() - 1) +
                           " values, expected " + std::to_string(dim),
                       line_no);
    std::string key(f[0]);
    if (!seen.insert(key).second)
      throw ParseError("duplicate key '" + key + "'", line_no);
    for (long long c = 0; c < dim; ++c) {
      float v;
      if (!parse_number(f[static_cast<std::size_t>(c) + 1], v) ||
          !std::isfinite(v))
        throw ParseError("bad number '" +
                             std::string(f[static_cast<std::size_t>(c) + 1]) +
                             "'",
                         line_no, static_cast<std::size_t>(c) + 2);
      m(r, c) = v;
    }
    names.push_back(std::move(key));
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (!fields(line).empty())
      throw ParseError("extra row beyond declared count", line_no);
  }
  auto kind = infer_kind(names);
  return KeyedVectors(std::move(names), std::move(m), kind);
}

void save_binary(const KeyedVectors& model, const std::string& path) {
  auto out = open_out(path);
  out.write(kMagic, 5);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(model.size()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(model.dim()));
  put_le<std::uint8_t>(out, static_cast<std::uint8_t>(model.kind()));
  for (KeyedVectors::Index r = 0; r < model.size(); ++r) {
    const auto& key = model.key(r);
    if (key.size() > UINT16_MAX) throw DataError("key too long: " + key);
    put_le<std::uint16_t>(out, static_cast<std::uint16_t>(key.size()));
    out.write(key.data(), static_cast<std::streamsize>(key.size()));
    for (KeyedVectors::Index c = 0; c < model.dim(); ++c)
      put_le<float>(out, model.matrix()(r, c));
  }
  if (!out) throw StreamError(path, "write failure");
}

KeyedVectors load_binary(const std::string& path) {
  auto in = open_in(path);
  std::error_code ec;
  const auto size = std::filesystem::file_size(path, ec);
  if (ec) throw StreamError(path, ec.message());
  BinaryReader reader(in, path, size);

  char magic[5];
  if (size < 5 || (reader.read(magic, 5), std::memcmp(magic, kMagic, 5) != 0))
    throw DataError(path + ": magic number mismatch (not a SEMB1 file)");
  const auto rows = reader.get_le<std::uint32_t>();
  const auto dim = reader.get_le<std::uint32_t>();
  const auto kind_byte = reader.get_le<std::uint8_t>();
  if (kind_byte > 2) throw DataError(path + ": unknown key kind");

  std::vector<std::string> names;
  names.reserve(rows);
  RowMatrix<float> m(static_cast<Eigen::Index>(rows),
                     static_cast<Eigen::Index>(dim));
  std::unordered_set<std::string> seen;
  for (std::uint32_t r = 0; r < rows; ++r) {
    const auto len = reader.get_le<std::uint16_t>();
    std::string key(len, '\0');
    reader.read(key.data(), len);
    if (!seen.insert(key).second)
      throw DataError(path + ": duplicate key '" + key + "'");
    for (std::uint32_t c = 0; c < dim; ++c) m(r, c) = reader.get_le<float>();
    names.push_back(std::move(key));
  }
  return KeyedVectors(std::move(names), std::move(m),
                      static_cast<keys::KeyKind>(kind_byte));
}

bool is_binary(const std::string& path) {
  auto in = open_in(path);
  char magic[5] = {};
  in.read(magic, 5);
  return in.gcount() == 5 && std::memcmp(magic, kMagic, 5) == 0;
}

KeyedVectors load(const std::string& path) {
  return is_binary(path) ? load_binary(path) : load_text(path);
}

void save_counts(const KeyedVectors& model, const std::string& path) {
  auto out = open_out(path);
  const auto& counts = model.counts();
  for (KeyedVectors::Index r = 0; r < model.size(); ++r)
    out << model.key(r) << '\t'
        << (counts.empty() ? 0 : counts[static_cast<std::size_t>(r)]) << '\n';
  if (!out) throw StreamError(path, "write failure");
}

void load_counts(KeyedVectors& model, const std::string& path) {
  auto in = open_in(path);
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(model.size()), 0);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    std::uint64_t n = 0;
    if (tab == std::string::npos ||
        !parse_number(std::string_view(line).substr(tab + 1), n))
      throw ParseError("expected \"key<TAB>count\"", line_no);
    const auto row = model.find(std::string_view(line).substr(0, tab));
    if (!row)
      throw ParseError("count for unknown key '" + line.substr(0, tab) + "'",
                       line_no);
    counts[static_cast<std::size_t>(*row)] = n;
  }
  model.set_counts(std::move(counts));
}

void save_sense_vectors(const SenseVectors& model, const std::string& path,
                        bool binary, int precision) {
  auto save = [&](const KeyedVectors& table, const std::string& p) {
    if (binary)
      save_binary(table, p);
    else
      save_text(table, p, precision);
  };
  save(model.senses, path);
  if (model.context) save(*model.context, context_path(path));
  save_counts(model.senses, counts_path(path));
}

SenseVectors load_sense_vectors(const std::string& path) {
  SenseVectors out{load(path), std::nullopt};
  if (std::filesystem::exists(context_path(path)))
    out.context = load(context_path(path));
  if (std::filesystem::exists(counts_path(path)))
    load_counts(out.senses, counts_path(path));
  return out;
}

}  // namespace semb::vecio
