// Copyright 2026 The qsr Authors
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

#ifndef QSR_TEXT_HPP
#define QSR_TEXT_HPP

#include <cctype>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qsr {

/// Malformed textual input. Line and column are 1-based; 0 means unknown.
class ParseError : public std::invalid_argument {
  public:
    ParseError(const std::string &msg, int line = 0, int column = 0)
        : std::invalid_argument(format(msg, line, column)), line_(line), column_(column), bare_(msg) {
    }

    int line() const {
        return line_;
    }
    int column() const {
        return column_;
    }
    const std::string &bare_message() const {
        return bare_;
    }

    /// Same error relocated to a line, with the column shifted by `col_offset`.
    ParseError at(int line, int col_offset) const {
        return ParseError(bare_, line, column_ + col_offset);
    }

  private:
    static std::string format(const std::string &msg, int line, int column) {
        if (line <= 0 && column <= 0) {
            return msg;
        }
        std::string out;
        if (line > 0) {
            out += "line " + std::to_string(line);
        }
        if (column > 0) {
            out += (out.empty() ? "column " : ", column ") + std::to_string(column);
        }
        return out + ": " + msg;
    }

    int line_;
    int column_;
    std::string bare_;
};

namespace text {

/// A whitespace separated token with its 1-based column in the source line.
struct Token {
    std::string_view value;
    int column;
};

inline std::vector<Token> split_tokens(std::string_view line) {
    std::vector<Token> out;
    size_t k = 0;
    while (k < line.size()) {
        while (k < line.size() && std::isspace((unsigned char)line[k])) {
            k++;
        }
        size_t start = k;
        while (k < line.size() && !std::isspace((unsigned char)line[k])) {
            k++;
        }
        if (k > start) {
            out.push_back({line.substr(start, k - start), (int)start + 1});
        }
    }
    return out;
}

/// Strips a trailing '#' comment and surrounding whitespace.
inline std::string_view strip_line(std::string_view line) {
    size_t hash = line.find('#');
    if (hash != std::string_view::npos) {
        line = line.substr(0, hash);
    }
    while (!line.empty() && std::isspace((unsigned char)line.back())) {
        line.remove_suffix(1);
    }
    return line;
}

inline std::vector<std::string_view> lines_of(std::string_view content) {
    std::vector<std::string_view> out;
    size_t start = 0;
    while (start <= content.size()) {
        size_t end = content.find('\n', start);
        if (end == std::string_view::npos) {
            if (start < content.size()) {
                out.push_back(content.substr(start));
            }
            break;
        }
        std::string_view line = content.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        out.push_back(line);
        start = end + 1;
    }
    return out;
}

/// Parses a decimal integer occupying the whole view. Column is relative to the view.
inline int64_t parse_int(std::string_view s, int column = 1) {
    if (s.empty()) {
        throw ParseError("expected an integer", 0, column);
    }
    size_t k = 0;
    bool neg = false;
    if (s[0] == '-' || s[0] == '+') {
        neg = s[0] == '-';
        k = 1;
    }
    if (k == s.size()) {
        throw ParseError("expected digits after sign", 0, column + (int)k);
    }
    int64_t v = 0;
    for (; k < s.size(); k++) {
        if (!std::isdigit((unsigned char)s[k])) {
            throw ParseError("unexpected character '" + std::string(1, s[k]) + "' in integer", 0, column + (int)k);
        }
        v = v * 10 + (s[k] - '0');
        if (v > (int64_t)1 << 40) {
            throw ParseError("integer out of range", 0, column);
        }
    }
    return neg ? -v : v;
}

/// 64-bit FNV-1a digest, used to fingerprint inputs in reports.
inline uint64_t fnv1a(std::string_view data) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace text
}  // namespace qsr

#endif
