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

#ifndef ABX_CORPUS_H_
#define ABX_CORPUS_H_

#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace abx {

// One abstract from the corpus file.
struct AbstractRecord {
  std::string id;
  std::string text;

  bool operator==(const AbstractRecord &) const = default;
};

struct TokenizedSentence {
  std::string abstract_id;
  int sentence_index = 0;
  std::vector<std::string> tokens;
};

// A recoverable problem with one corpus line.
struct LineError {
  size_t line = 0;  // 1-based
  std::string message;
};

struct CorpusParseResult {
  std::vector<AbstractRecord> records;
  std::vector<LineError> errors;
};

// Reads the corpus format: one "id<TAB>text" record per line, '#' comments.
// Blank lines are ignored. Malformed lines are collected in `errors` with
// their line number; a duplicate id throws DataError.
CorpusParseResult ParseCorpus(std::istream &in);

// Rule-based sentence splitter. A boundary is a '.', '!' or '?' followed by
// whitespace and then an uppercase letter or digit (optionally behind an
// opening quote or bracket). Periods ending a guarded word ("e.g.", "vs.",
// "Fig.", single capitals like "E.", dotted initialisms like "U.S.") never
// end a sentence.
std::vector<std::string> SplitSentences(std::string_view text);

// Whitespace tokenizer that detaches leading/trailing punctuation and quotes
// as single-character tokens. Parentheses are always separate tokens, even
// inside a word. Hyphenated terms stay whole.
std::vector<std::string> Tokenize(std::string_view sentence);

// SplitSentences + Tokenize with contiguous sentence indices.
std::vector<TokenizedSentence> TokenizeAbstract(const AbstractRecord &record);

// True if `s` is well-formed UTF-8.
bool IsValidUtf8(std::string_view s);

}  // namespace abx

#endif  // ABX_CORPUS_H_
