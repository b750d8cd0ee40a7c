// Copyright 2026 The mlcompat Authors
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

// Gray image files: PGM (P2 ascii, P5 binary, maxval up to 65535) and CSV
// matrices of reals.

#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mlcompat/error.hpp"
#include "mlcompat/file_io.hpp"
#include "mlcompat/image_tools.hpp"
#include "mlcompat/matrix.hpp"

namespace mlcompat {

enum class ImageFormat { PGM, CSV };

inline ImageFormat image_format_from_name(std::string_view name) {
  if (name == "pgm" || name == "PGM") return ImageFormat::PGM;
  if (name == "csv" || name == "CSV") return ImageFormat::CSV;
  throw InvalidArgument("unknown image format: " + std::string(name));
}

/// Guesses from the extension; anything but .csv is read as PGM.
inline ImageFormat image_format_from_path(const std::filesystem::path& p) {
  auto ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".csv" ? ImageFormat::CSV : ImageFormat::PGM;
}

namespace detail {

class PgmReader {
 public:
  explicit PgmReader(std::string_view data) : data_(data) {}

  GrayImage read() {
    const auto magic = token("magic number");
    if (magic != "P2" && magic != "P5") fail("unsupported magic " + std::string(magic));
    const auto width = number("width");
    const auto height = number("height");
    const auto maxval = number("maxval");
    if (width == 0 || height == 0) fail("image dimensions must be positive");
    if (maxval == 0 || maxval > 65535) fail("maxval must be in 1..65535");
    const std::size_t count = width * height;
    std::vector<double> px;
    px.reserve(count);
    const double scale = static_cast<double>(maxval);

    if (magic == "P2") {
      for (std::size_t i = 0; i < count; ++i) {
        const auto v = number("pixel value");
        if (v > maxval) fail("pixel value exceeds maxval");
        px.push_back(static_cast<double>(v) / scale);
      }
    } else {
      // Exactly one whitespace byte separates the header from the raster.
      if (pos_ >= data_.size() || !std::isspace(static_cast<unsigned char>(data_[pos_])))
        fail("missing raster separator");
      if (data_[pos_] == '\n') ++line_;
      ++pos_;
      const std::size_t bytes_per = maxval < 256 ? 1 : 2;
      if (data_.size() - pos_ < count * bytes_per) fail("truncated raster");
      for (std::size_t i = 0; i < count; ++i) {
        std::uint32_t v = static_cast<unsigned char>(data_[pos_++]);
        if (bytes_per == 2) v = (v << 8) | static_cast<unsigned char>(data_[pos_++]);
        if (v > maxval) fail("pixel value exceeds maxval");
        px.push_back(static_cast<double>(v) / scale);
      }
    }
    return GrayImage(height, width, std::move(px));
  }

 private:
  [[noreturn]] void fail(const std::string& reason) const { throw MalformedFile(reason, line_); }

  void skip_space_and_comments() {
    while (pos_ < data_.size()) {
      const char c = data_[pos_];
      if (c == '#') {
        while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        if (c == '\n') ++line_;
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view token(const char* what) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    while (pos_ < data_.size() && !std::isspace(static_cast<unsigned char>(data_[pos_])) &&
           data_[pos_] != '#')
      ++pos_;
    if (start == pos_) fail(std::string("unexpected end of file reading ") + what);
    return data_.substr(start, pos_ - start);
  }

  std::size_t number(const char* what) {
    const auto t = token(what);
    std::size_t v = 0;
    const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || end != t.data() + t.size())
      fail(std::string("bad ") + what + " '" + std::string(t) + "'");
    return v;
  }

  std::string_view data_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace detail

inline GrayImage parse_pgm(std::string_view data) { return detail::PgmReader(data).read(); }

/// Comma-separated reals, one matrix row per line. Blank lines are skipped.
inline Matrix parse_csv_matrix(std::string_view data) {
  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= data.size()) {
    std::size_t end = data.find('\n', pos);
    if (end == std::string_view::npos) end = data.size();
    ++line_no;
    const auto line = detail::trim(data.substr(pos, end - pos));
    pos = end + 1;
    if (line.empty()) continue;
    std::size_t n = 0;
    std::size_t field_start = 0;
    for (;;) {
      const auto comma = line.find(',', field_start);
      const auto field = detail::trim(
          line.substr(field_start, comma == std::string_view::npos ? std::string_view::npos
                                                                    : comma - field_start));
      double v = 0.0;
      const auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (field.empty() || ec != std::errc() || p != field.data() + field.size())
        throw MalformedFile("bad number '" + std::string(field) + "'", line_no);
      values.push_back(v);
      ++n;
      if (comma == std::string_view::npos) break;
      field_start = comma + 1;
    }
    if (rows == 0) cols = n;
    else if (n != cols)
      throw MalformedFile("expected " + std::to_string(cols) + " columns, found " +
                              std::to_string(n),
                          line_no);
    ++rows;
  }
  if (rows == 0) throw MalformedFile("no data", line_no);
  return Matrix(rows, cols, std::move(values));
}

/// PGM is normalized by maxval; CSV goes through mat2gray.
inline GrayImage load_gray(const std::filesystem::path& path, ImageFormat format) {
  const auto data = read_file(path);
  if (format == ImageFormat::PGM) return parse_pgm(data);
  return mat2gray(parse_csv_matrix(data));
}

/// MATLAB `imread` for gray images, format chosen by extension.
inline GrayImage imread(const std::filesystem::path& path) {
  return load_gray(path, image_format_from_path(path));
}

inline std::string encode_pgm(const GrayImage& img, std::uint32_t maxval = 255, bool binary = true) {
  if (maxval == 0 || maxval > 65535) throw InvalidArgument("maxval must be in 1..65535");
  std::string out = (binary ? "P5\n" : "P2\n") + std::to_string(img.cols()) + " " +
                    std::to_string(img.rows()) + "\n" + std::to_string(maxval) + "\n";
  std::size_t i = 0;
  for (double p : img.pixels()) {
    const auto v = static_cast<std::uint32_t>(std::lround(p * maxval));
    if (binary) {
      if (maxval > 255) out += static_cast<char>(v >> 8);
      out += static_cast<char>(v & 0xFF);
    } else {
      out += std::to_string(v);
      out += (++i % img.cols() == 0) ? '\n' : ' ';
    }
  }
  return out;
}

inline void save_pgm(const std::filesystem::path& path, const GrayImage& img,
                     std::uint32_t maxval = 255, bool binary = true) {
  write_file_atomic(path, encode_pgm(img, maxval, binary));
}

}  // namespace mlcompat
