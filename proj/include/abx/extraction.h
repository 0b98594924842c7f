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

#ifndef ABX_EXTRACTION_H_
#define ABX_EXTRACTION_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "abx/corpus.h"

namespace abx {

// A "Definition ( ABBR )" pattern found in one sentence.
struct DefinitionMention {
  std::string abbreviation;
  std::vector<std::string> definition_tokens;
  std::string abstract_id;
  int sentence_index = 0;
  int paren_position = 0;  // index of the "(" token

  std::string Definition() const;
};

// One later mention of a defined abbreviation, labeled with the raw
// (ungrouped) definition string.
struct RawLabeledInstance {
  std::string abbreviation;
  std::vector<std::string> tokens;
  int position = 0;
  std::string raw_definition;
  std::string abstract_id;
  int sentence_index = 0;
  int defining_sentence_index = 0;

  bool operator==(const RawLabeledInstance &) const = default;
};

// Length 2-10, at least one letter, and at least 60% of the characters are
// uppercase ASCII letters or digits.
bool IsAbbreviationShape(std::string_view token);

// Largest span a definition of `abbreviation` may cover, in words.
int MaxDefinitionWords(std::string_view abbreviation);

// Aligns the alphanumeric characters of `abbreviation` right-to-left against
// the shortest word suffix of `preceding_tokens` that supports a full
// case-insensitive alignment whose first character starts the span's first
// word. The span never crosses "(", ")", ",", ";" or ":" and covers at most
// MaxDefinitionWords() words. Returns nullopt when no suffix aligns.
std::optional<std::vector<std::string>> ResolveDefinitionSpan(
    std::span<const std::string> preceding_tokens,
    std::string_view abbreviation);

// All resolvable "( X )" patterns in the sentence, left to right.
std::vector<DefinitionMention> DetectPatterns(const TokenizedSentence &sentence);

// Labels every later occurrence of each defined abbreviation in the
// abstract. Occurrences in sentence s use the nearest definition made in a
// sentence before s; definitions in s take effect from s + 1. The ABBR token
// of a resolved defining pattern is never emitted.
std::vector<RawLabeledInstance> LabelAbstract(
    std::span<const TokenizedSentence> sentences);

}  // namespace abx

#endif  // ABX_EXTRACTION_H_
