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

#include "abx/extraction.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace abx {
namespace {

bool IsBoundaryToken(const std::string &t) {
  return t == "(" || t == ")" || t == "," || t == ";" || t == ":";
}

char Lower(char c) {
  return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

bool IsAlnum(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

// Schwartz-Hearst style alignment of `abbr` over `words`. The first
// alphanumeric character of the abbreviation must match the first
// character of words[0]; all other characters match anywhere, in order,
// scanning right to left.
bool Aligns(std::span<const std::string> words, std::string_view abbr) {
  std::string chars;
  for (char c : abbr) {
    if (IsAlnum(c)) chars.push_back(Lower(c));
  }
  if (chars.empty() || words.empty()) return false;

  std::string text;
  for (size_t w = 0; w < words.size(); ++w) {
    if (w) text.push_back(' ');
    for (char c : words[w]) text.push_back(Lower(c));
  }

  long pos = static_cast<long>(text.size()) - 1;
  for (long k = static_cast<long>(chars.size()) - 1; k >= 0; --k) {
    const char want = chars[static_cast<size_t>(k)];
    if (k == 0) {
      // Remaining text must start with the wanted character at offset 0;
      // every later word-initial match would imply a shorter suffix.
      return pos >= 0 && text[0] == want;
    }
    while (pos >= 0 && text[static_cast<size_t>(pos)] != want) --pos;
    if (pos < 0) return false;
    --pos;
  }
  return false;
}

}  // namespace

std::string DefinitionMention::Definition() const {
  std::string out;
  for (size_t i = 0; i < definition_tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += definition_tokens[i];
  }
  return out;
}

bool IsAbbreviationShape(std::string_view token) {
  if (token.size() < 2 || token.size() > 10) return false;
  size_t strong = 0;
  bool has_letter = false;
  for (char c : token) {
    if (std::isalpha(static_cast<unsigned char>(c))) has_letter = true;
    if ((c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9')) ++strong;
  }
  // strong / size >= 0.6, in integers.
  return has_letter && strong * 5 >= token.size() * 3;
}

int MaxDefinitionWords(std::string_view abbreviation) {
  const int n = static_cast<int>(abbreviation.size());
  return std::min(n + 5, 2 * n);
}

std::optional<std::vector<std::string>> ResolveDefinitionSpan(
    std::span<const std::string> preceding_tokens,
    std::string_view abbreviation) {
  // Only the run after the last boundary token is eligible.
  size_t first = 0;
  for (size_t i = preceding_tokens.size(); i > 0; --i) {
    if (IsBoundaryToken(preceding_tokens[i - 1])) {
      first = i;
      break;
    }
  }
  std::span<const std::string> window = preceding_tokens.subspan(first);
  const size_t max_words = static_cast<size_t>(MaxDefinitionWords(abbreviation));
  const size_t limit = std::min(max_words, window.size());
  for (size_t k = 1; k <= limit; ++k) {
    std::span<const std::string> suffix = window.subspan(window.size() - k);
    // The abbreviation itself is not its own definition.
    if (std::find(suffix.begin(), suffix.end(), abbreviation) != suffix.end()) {
      continue;
    }
    if (Aligns(suffix, abbreviation)) {
      return std::vector<std::string>(suffix.begin(), suffix.end());
    }
  }
  return std::nullopt;
}

std::vector<DefinitionMention> DetectPatterns(const TokenizedSentence &sentence) {
  std::vector<DefinitionMention> mentions;
  const std::vector<std::string> &tokens = sentence.tokens;
  for (size_t i = 0; i + 2 < tokens.size(); ++i) {
    if (tokens[i] != "(" || tokens[i + 2] != ")") continue;
    const std::string &abbr = tokens[i + 1];
    if (!IsAbbreviationShape(abbr)) continue;
    const size_t window = abbr.size() + 5;
    const size_t begin = i > window ? i - window : 0;
    auto span = ResolveDefinitionSpan(
        std::span<const std::string>(tokens).subspan(begin, i - begin), abbr);
    if (!span) continue;
    mentions.push_back({abbr, std::move(*span), sentence.abstract_id,
                        sentence.sentence_index, static_cast<int>(i)});
  }
  return mentions;
}

std::vector<RawLabeledInstance> LabelAbstract(
    std::span<const TokenizedSentence> sentences) {
  struct Active {
    std::string definition;
    int sentence_index;
  };
  std::map<std::string, Active> active;
  std::vector<RawLabeledInstance> out;

  for (const TokenizedSentence &sentence : sentences) {
    const std::vector<DefinitionMention> mentions = DetectPatterns(sentence);
    std::set<int> defining_positions;
    for (const DefinitionMention &m : mentions) {
      defining_positions.insert(m.paren_position + 1);
    }
    if (!active.empty()) {
      for (size_t j = 0; j < sentence.tokens.size(); ++j) {
        if (defining_positions.count(static_cast<int>(j))) continue;
        auto it = active.find(sentence.tokens[j]);
        if (it == active.end()) continue;
        out.push_back({it->first, sentence.tokens, static_cast<int>(j),
                       it->second.definition, sentence.abstract_id,
                       sentence.sentence_index, it->second.sentence_index});
      }
    }
    for (const DefinitionMention &m : mentions) {
      active[m.abbreviation] = {m.Definition(), sentence.sentence_index};
    }
  }
  return out;
}

}  // namespace abx
