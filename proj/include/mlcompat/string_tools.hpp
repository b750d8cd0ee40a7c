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

#pragma once

#include <cmath>
#include <cctype>
#include <cstdio>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mlcompat/error.hpp"

namespace mlcompat {

namespace detail {

inline std::string c_format(const std::string& spec, double v) {
  char buf[512];
  const int n = std::snprintf(buf, sizeof buf, spec.c_str(), v);
  if (n < 0) throw InvalidArgument("bad format specifier " + spec);
  if (static_cast<std::size_t>(n) < sizeof buf) return std::string(buf, static_cast<std::size_t>(n));
  std::string big(static_cast<std::size_t>(n) + 1, '\0');
  std::snprintf(big.data(), big.size(), spec.c_str(), v);
  big.resize(static_cast<std::size_t>(n));
  return big;
}

inline std::string c_format_str(const std::string& spec, const std::string& v) {
  const int n = std::snprintf(nullptr, 0, spec.c_str(), v.c_str());
  if (n < 0) throw InvalidArgument("bad format specifier " + spec);
  std::string out(static_cast<std::size_t>(n) + 1, '\0');
  std::snprintf(out.data(), out.size(), spec.c_str(), v.c_str());
  out.resize(static_cast<std::size_t>(n));
  return out;
}

inline std::string nonfinite(double x) {
  if (std::isnan(x)) return "NaN";
  return x > 0 ? "Inf" : "-Inf";
}

inline void append_utf8(std::string& out, unsigned long cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

}  // namespace detail

/// MATLAB `num2str`. Integers print without a decimal point; other values
/// use `significant_digits` significant digits (5 when not given).
inline std::string num2str(double x, std::optional<int> significant_digits = std::nullopt) {
  if (!std::isfinite(x)) return detail::nonfinite(x);
  if (significant_digits && *significant_digits < 1)
    throw InvalidArgument("num2str precision must be positive");
  if (!significant_digits && x == std::trunc(x)) {
    if (x == 0.0) return "0";
    return detail::c_format("%.0f", x);
  }
  return detail::c_format("%." + std::to_string(significant_digits.value_or(5)) + "g", x);
}

inline std::string strcat(std::span<const std::string> parts) {
  std::string out;
  for (const auto& p : parts) out += p;
  return out;
}

inline std::string strcat(std::initializer_list<std::string_view> parts) {
  std::string out;
  for (auto p : parts) out += p;
  return out;
}

using FormatArg = std::variant<double, std::string>;

/// MATLAB `sprintf` for the %d %i %u %f %e %g %x %o %c %s conversions.
///
/// The format is reused while arguments remain and output stops at the first
/// conversion with no argument left. Backslash escapes in the format are
/// expanded. A non-integer passed to an integer conversion prints as %e, and
/// an integer passed to %s or %c prints as the character with that code.
inline std::string mx_sprintf(std::string_view format, std::span<const FormatArg> args) {
  std::string out;
  std::size_t next_arg = 0;
  bool any_conversion = false;

  for (;;) {
    for (std::size_t i = 0; i < format.size(); ++i) {
      const char c = format[i];
      if (c == '\\' && i + 1 < format.size()) {
        const char e = format[++i];
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case 'r': out += '\r'; break;
          case 'a': out += '\a'; break;
          case 'b': out += '\b'; break;
          case 'f': out += '\f'; break;
          case 'v': out += '\v'; break;
          case '\\': out += '\\'; break;
          default: out += '\\'; out += e; break;
        }
        continue;
      }
      if (c != '%') {
        out += c;
        continue;
      }
      if (i + 1 < format.size() && format[i + 1] == '%') {
        out += '%';
        ++i;
        continue;
      }
      // %[flags][width][.precision]conv
      std::size_t k = i + 1;
      while (k < format.size() && std::string_view("-+ #0").find(format[k]) != std::string_view::npos) ++k;
      while (k < format.size() && std::isdigit(static_cast<unsigned char>(format[k]))) ++k;
      if (k < format.size() && format[k] == '.') {
        ++k;
        while (k < format.size() && std::isdigit(static_cast<unsigned char>(format[k]))) ++k;
      }
      if (k >= format.size()) throw InvalidArgument("incomplete conversion in format");
      const char conv = format[k];
      if (std::string_view("diufeEgGxXocs").find(conv) == std::string_view::npos)
        throw InvalidArgument(std::string("unsupported conversion %") + conv);
      const std::string flags(format.substr(i, k - i));  // "%" + flags/width/precision
      any_conversion = true;
      i = k;

      if (next_arg >= args.size()) return out;
      const auto& arg = args[next_arg++];

      if (const auto* s = std::get_if<std::string>(&arg)) {
        out += detail::c_format_str(flags + "s", *s);
        continue;
      }
      const double v = std::get<double>(arg);
      const bool integral = std::isfinite(v) && v == std::trunc(v);
      switch (conv) {
        case 'd': case 'i': case 'u': case 'x': case 'X': case 'o':
          if (!std::isfinite(v)) {
            out += detail::nonfinite(v);
          } else if (!integral) {
            out += detail::c_format(flags + "e", v);
          } else {
            const std::string spec = flags + "ll" + (conv == 'i' || conv == 'u' ? 'd' : conv);
            char buf[128];
            std::snprintf(buf, sizeof buf, spec.c_str(), static_cast<long long>(v));
            out += buf;
          }
          break;
        case 'c': case 's':
          if (integral && v >= 0 && v <= 0x10FFFF) {
            std::string ch;
            detail::append_utf8(ch, static_cast<unsigned long>(v));
            out += detail::c_format_str(flags + "s", ch);
          } else if (!std::isfinite(v)) {
            out += detail::nonfinite(v);
          } else {
            out += detail::c_format(flags + "e", v);
          }
          break;
        default:
          out += std::isfinite(v) ? detail::c_format(flags + conv, v) : detail::nonfinite(v);
      }
    }
    if (!any_conversion || next_arg >= args.size()) break;
  }
  return out;
}

inline std::string mx_sprintf(std::string_view format, std::initializer_list<FormatArg> args) {
  return mx_sprintf(format, std::span<const FormatArg>(args.begin(), args.size()));
}

}  // namespace mlcompat
