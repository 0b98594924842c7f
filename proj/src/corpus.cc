// Copyright 2026 The abx Authors.
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

#include "abx/corpus.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_set>

#include "abx/errors.h"

namespace abx {
namespace {

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && IsSpace(s.front())) s.remove_prefix(1);
  while (!s.empty() && IsSpace(s.back())) s.remove_suffix(1);
  return s;
}

bool IsUpper(char c) { return c >= 'A' && c <= 'Z'; }
bool IsDigit(char c) { return c >= '0' && c <= '9'; }
bool IsAlpha(char c) { return (c >= 'a' && c <= 'z') || IsUpper(c); }

// Lowercased words whose trailing period is part of the word.
const std::unordered_set<std::string> &GuardWords() {
  static const std::unordered_set<std::string> kGuards = {
      "vs", "cf", "al", "fig", "figs", "eq", "eqs", "dr", "mr", "mrs",
      "prof", "nos", "vol", "approx", "ca", "resp", "ref", "refs", "spp",
      "viz", "jr", "sr", "dept", "univ", "subsp"};
  return kGuards;
}

// The word that ends at `period` (exclusive), without the period itself.
std::string_view WordBefore(std::string_view text, size_t period) {
  size_t start = period;
  while (start > 0 && !IsSpace(text[start - 1])) --start;
  std::string_view word = text.substr(start, period - start);
  // Opening brackets and quotes do not belong to the guarded word.
  while (!word.empty() && (word.front() == '(' || word.front() == '[' ||
                           word.front() == '"' || word.front() == '\'')) {
    word.remove_prefix(1);
  }
  return word;
}

bool IsGuardedPeriod(std::string_view text, size_t period) {
  const std::string_view word = WordBefore(text, period);
  if (word.empty()) return false;
  // Single capital: "E. coli", "J. Smith".
  if (word.size() == 1 && IsUpper(word[0])) return true;
  // Dotted initialisms: "U.S", "e.g", "i.e", "a.m".
  if (word.find('.') != std::string_view::npos) {
    bool dotted = true;
    for (size_t i = 0; i < word.size(); ++i) {
      const bool expect_letter = (i % 2 == 0);
      if (expect_letter ? !IsAlpha(word[i]) : word[i] != '.') {
        dotted = false;
        break;
      }
    }
    if (dotted) return true;
  }
  std::string lower(word);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return GuardWords().count(lower) > 0;
}

bool IsOpener(char c) {
  return c == '(' || c == '[' || c == '"' || c == '\'' || c == '`';
}

bool IsCloser(char c) {
  return c == ')' || c == ']' || c == '"' || c == '\'';
}

constexpr std::string_view kDetachable = "(),;:.!?'\"`[]";

bool IsDetachable(char c) {
  return kDetachable.find(c) != std::string_view::npos;
}

}  // namespace

bool IsValidUtf8(std::string_view s) {
  size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    size_t extra;
    uint32_t cp;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      extra = 1;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      extra = 3;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + extra >= s.size()) return false;
    for (size_t k = 1; k <= extra; ++k) {
      const auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    // Overlong forms, surrogates and out-of-range code points.
    if ((extra == 1 && cp < 0x80) || (extra == 2 && cp < 0x800) ||
        (extra == 3 && cp < 0x10000) || cp > 0x10FFFF ||
        (cp >= 0xD800 && cp <= 0xDFFF)) {
      return false;
    }
    i += extra + 1;
  }
  return true;
}

CorpusParseResult ParseCorpus(std::istream &in) {
  CorpusParseResult result;
  std::unordered_set<std::string> seen;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto fail = [&](std::string message) {
      result.errors.push_back({line_no, std::move(message)});
    };
    const size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      fail("expected 2 tab-separated fields, found 1");
      continue;
    }
    if (line.find('\t', tab + 1) != std::string::npos) {
      fail("expected 2 tab-separated fields, found " +
           std::to_string(1 + std::count(line.begin(), line.end(), '\t')));
      continue;
    }
    AbstractRecord record{line.substr(0, tab), line.substr(tab + 1)};
    if (Trim(record.id).empty()) {
      fail("empty abstract id");
      continue;
    }
    if (Trim(record.text).empty()) {
      fail("empty abstract text");
      continue;
    }
    if (!IsValidUtf8(line)) {
      fail("invalid UTF-8");
      continue;
    }
    if (!seen.insert(record.id).second) {
      throw DataError("duplicate abstract id '" + record.id + "' on line " +
                      std::to_string(line_no));
    }
    result.records.push_back(std::move(record));
  }
  return result;
}

std::vector<std::string> SplitSentences(std::string_view text) {
  std::vector<std::string> sentences;
  size_t start = 0;
  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c != '.' && c != '!' && c != '?') continue;
    // Closing quotes/brackets directly after the terminator stay with it.
    size_t end = i + 1;
    while (end < text.size() && IsCloser(text[end])) ++end;
    if (end >= text.size() || !IsSpace(text[end])) continue;
    size_t next = end;
    while (next < text.size() && IsSpace(text[next])) ++next;
    if (next >= text.size()) continue;
    size_t probe = next;
    while (probe < text.size() && IsOpener(text[probe])) ++probe;
    if (probe >= text.size()) continue;
    if (!IsUpper(text[probe]) && !IsDigit(text[probe])) continue;
    if (c == '.' && IsGuardedPeriod(text, i)) continue;
    const std::string_view piece = Trim(text.substr(start, end - start));
    if (!piece.empty()) sentences.emplace_back(piece);
    start = next;
    i = next - 1;
  }
  const std::string_view tail = Trim(text.substr(std::min(start, text.size())));
  if (!tail.empty()) sentences.emplace_back(tail);
  return sentences;
}

std::vector<std::string> Tokenize(std::string_view sentence) {
  std::vector<std::string> tokens;
  auto emit_piece = [&tokens](std::string_view piece) {
    std::vector<std::string> trailing;
    while (!piece.empty() && IsDetachable(piece.front())) {
      tokens.emplace_back(1, piece.front());
      piece.remove_prefix(1);
    }
    while (!piece.empty() && IsDetachable(piece.back())) {
      trailing.emplace_back(1, piece.back());
      piece.remove_suffix(1);
    }
    if (!piece.empty()) tokens.emplace_back(piece);
    tokens.insert(tokens.end(), trailing.rbegin(), trailing.rend());
  };

  size_t i = 0;
  while (i < sentence.size()) {
    while (i < sentence.size() && IsSpace(sentence[i])) ++i;
    size_t j = i;
    while (j < sentence.size() && !IsSpace(sentence[j])) ++j;
    std::string_view chunk = sentence.substr(i, j - i);
    // Parentheses split the chunk wherever they occur.
    size_t piece_start = 0;
    for (size_t k = 0; k < chunk.size(); ++k) {
      if (chunk[k] == '(' || chunk[k] == ')') {
        emit_piece(chunk.substr(piece_start, k - piece_start));
        tokens.emplace_back(1, chunk[k]);
        piece_start = k + 1;
      }
    }
    if (piece_start < chunk.size()) emit_piece(chunk.substr(piece_start));
    i = j;
  }
  return tokens;
}

std::vector<TokenizedSentence> TokenizeAbstract(const AbstractRecord &record) {
  std::vector<TokenizedSentence> out;
  for (const std::string &sentence : SplitSentences(record.text)) {
    std::vector<std::string> tokens = Tokenize(sentence);
    if (tokens.empty()) continue;
    out.push_back({record.id, static_cast<int>(out.size()), std::move(tokens)});
  }
  return out;
}

}  // namespace abx
