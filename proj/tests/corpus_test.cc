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
#include <regex>
#include <set>
#include <sstream>

#include "abx/errors.h"
#include "abx/random.h"
#include "doctest.h"

namespace abx {
namespace {

// Word-level reference splitter, written independently of the
// character-scanning implementation.
std::vector<std::string> OracleSplit(const std::string &text) {
  static const std::set<std::string> kGuards = {
      "vs", "cf", "al", "fig", "figs", "eq", "eqs", "dr", "mr", "mrs",
      "prof", "nos", "vol", "approx", "ca", "resp", "ref", "refs", "spp",
      "viz", "jr", "sr", "dept", "univ", "subsp"};
  static const std::regex kEnds(R"(^.*[.!?][)\]"']*$)");
  static const std::regex kStarts(R"(^[(\["'`]*[A-Z0-9].*$)");
  static const std::regex kSingleCap(R"(^[(\["']*[A-Z]\.$)");
  static const std::regex kDotted(R"(^[(\["']*[A-Za-z](\.[A-Za-z])+\.$)");

  std::istringstream in(text);
  std::vector<std::string> words;
  std::string w;
  while (in >> w) words.push_back(w);

  std::vector<std::string> out;
  std::string current;
  for (size_t i = 0; i < words.size(); ++i) {
    if (!current.empty()) current += ' ';
    current += words[i];
    if (i + 1 == words.size()) break;
    if (!std::regex_match(words[i], kEnds)) continue;
    if (!std::regex_match(words[i + 1], kStarts)) continue;
    const std::string &word = words[i];
    if (word.back() == '.') {
      if (std::regex_match(word, kSingleCap) || std::regex_match(word, kDotted)) {
        continue;
      }
      std::string stem = word.substr(0, word.size() - 1);
      stem.erase(0, stem.find_first_not_of("([\"'"));
      std::transform(stem.begin(), stem.end(), stem.begin(), ::tolower);
      if (kGuards.count(stem)) continue;
    }
    out.push_back(current);
    current.clear();
  }
  if (!current.empty()) out.push_back(current);
  return out;
}

std::string NormalizeSpace(const std::string &s) {
  std::istringstream in(s);
  std::string w, out;
  while (in >> w) out += (out.empty() ? "" : " ") + w;
  return out;
}

// Reference tokenizer: parentheses split anywhere, then one regex peels
// leading and trailing punctuation from each piece.
std::vector<std::string> OracleTokenize(const std::string &sentence) {
  static const std::regex kPiece(
      R"(^([(),;:.!?'"`\[\]]*)(.*?)([(),;:.!?'"`\[\]]*)$)");
  std::vector<std::string> out;
  std::istringstream in(sentence);
  std::string chunk;
  auto emit = [&](const std::string &piece) {
    if (piece.empty()) return;
    std::smatch m;
    std::regex_match(piece, m, kPiece);
    for (char c : m[1].str()) out.emplace_back(1, c);
    if (m[2].length()) out.push_back(m[2].str());
    for (char c : m[3].str()) out.emplace_back(1, c);
  };
  while (in >> chunk) {
    std::string piece;
    for (char c : chunk) {
      if (c == '(' || c == ')') {
        emit(piece);
        piece.clear();
        out.emplace_back(1, c);
      } else {
        piece.push_back(c);
      }
    }
    emit(piece);
  }
  return out;
}

// Table 3 style fragments.
const char *kFragments[] = {
    "The reduction of the number of different segments in DAT compared to "
    "controls and patients suffering from depression may be helpful for "
    "differential diagnosis.",
    "DAT was more commonly positive among BO incompatible (21.5% in BO vs. "
    "14.8% in AO , P=0.001) and black (18.8% in blacks vs. 10.8% in "
    "nonblacks , P=0.003) infants.",
    "NPY-LI showed a significant reduction in DAT but not in FTD.",
    "The study included 122 healthy subjects, aged 18-83 years, recruited in "
    "the multicentre `ENC-DAT' study (promoted by the European Association "
    "of Nuclear Medicine).",
    "the endoplasmic reticulum (ER) is large; see Fig. 2 [ref].",
};

}  // namespace

TEST_CASE("ParseCorpus splits id and text") {
  std::istringstream in("A1\tThe endoplasmic reticulum (ER) is large.\n");
  CorpusParseResult r = ParseCorpus(in);
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0] ==
        AbstractRecord{"A1", "The endoplasmic reticulum (ER) is large."});
  CHECK(r.errors.empty());
}

TEST_CASE("ParseCorpus on empty input") {
  std::istringstream in("");
  CorpusParseResult r = ParseCorpus(in);
  CHECK(r.records.empty());
  CHECK(r.errors.empty());
}

TEST_CASE("ParseCorpus reports malformed lines with their numbers") {
  std::istringstream in(
      "# header comment\n"
      "A1\tfine text\n"
      "only-one-field\n"
      "\tno id\n"
      "A2\ta\tb\n"
      "A3\t   \n"
      "A4\tok\r\n");
  CorpusParseResult r = ParseCorpus(in);
  REQUIRE(r.records.size() == 2);
  CHECK(r.records[1].id == "A4");
  CHECK(r.records[1].text == "ok");
  REQUIRE(r.errors.size() == 4);
  CHECK(r.errors[0].line == 3);
  CHECK(r.errors[1].line == 4);
  CHECK(r.errors[2].line == 5);
  CHECK(r.errors[3].line == 6);
}

TEST_CASE("ParseCorpus rejects duplicate ids") {
  std::istringstream in("A1\tx\nA1\ty\n");
  CHECK_THROWS_AS(ParseCorpus(in), DataError);
}

TEST_CASE("ParseCorpus flags invalid UTF-8") {
  std::istringstream in("A1\tbad \xff byte\nA2\tcaf\xc3\xa9\n");
  CorpusParseResult r = ParseCorpus(in);
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0].id == "A2");
  REQUIRE(r.errors.size() == 1);
  CHECK(r.errors[0].line == 1);
}

TEST_CASE("IsValidUtf8") {
  CHECK(IsValidUtf8("plain"));
  CHECK(IsValidUtf8("\xce\xba\xe2\x80\x94\xf0\x9f\x98\x80"));
  CHECK_FALSE(IsValidUtf8("\xc3"));
  CHECK_FALSE(IsValidUtf8("\xc0\x80"));
  CHECK_FALSE(IsValidUtf8("\xed\xa0\x80"));
}

TEST_CASE("SplitSentences basic cases") {
  CHECK(SplitSentences("A is b. C is d.") ==
        std::vector<std::string>{"A is b.", "C is d."});
  CHECK(SplitSentences("No terminator here") ==
        std::vector<std::string>{"No terminator here"});
  CHECK(SplitSentences("E. coli grows. It divides.") ==
        std::vector<std::string>{"E. coli grows.", "It divides."});
}

TEST_CASE("SplitSentences guards") {
  CHECK(SplitSentences("Levels rose, e.g. IL-6 doubled. Then it fell.").size() == 2);
  CHECK(SplitSentences("Group A vs. B was tested. Done.").size() == 2);
  CHECK(SplitSentences("As in Fig. 2 we see it. Yes.").size() == 2);
  CHECK(SplitSentences("Samples from the U.S. Army were used.").size() == 1);
  CHECK(SplitSentences("It rose! Why? 12 cases followed.") ==
        std::vector<std::string>{"It rose!", "Why?", "12 cases followed."});
  CHECK(SplitSentences("the value was 0.5. lower case continues.").size() == 1);
  CHECK(SplitSentences("He said \"stop.\" Then left.") ==
        std::vector<std::string>{"He said \"stop.\"", "Then left."});
}

TEST_CASE("SplitSentences agrees with the word-level oracle") {
  const std::vector<std::string> texts = {
      "E. coli grows. It divides.",
      "A is b. C is d.",
      "Patients (n = 12) improved. Controls did not! Why? Unknown, cf. ref. 3.",
      "The U.S. cohort vs. the EU cohort. Both (ER) were large. 5 died.",
      "J. Smith et al. reported it. Dr. Jones agreed. \"Quoted.\" Next one.",
      "Trailing space.   Multiple   spaces here.  ",
  };
  for (const std::string &t : texts) {
    const auto got = SplitSentences(t);
    const auto want = OracleSplit(t);
    REQUIRE(got.size() == want.size());
    for (size_t i = 0; i < got.size(); ++i) {
      CHECK(NormalizeSpace(got[i]) == want[i]);
    }
  }
}

TEST_CASE("Tokenize basic cases") {
  CHECK(Tokenize("reticulum (ER) is") ==
        std::vector<std::string>{"reticulum", "(", "ER", ")", "is"});
  CHECK(Tokenize("ER.") == std::vector<std::string>{"ER", "."});
  CHECK(Tokenize("ENC-DAT' study") ==
        std::vector<std::string>{"ENC-DAT", "'", "study"});
  CHECK(Tokenize("IL-2(ER)-like") ==
        std::vector<std::string>{"IL-2", "(", "ER", ")", "-like"});
  CHECK(Tokenize("(P<0.01).") ==
        std::vector<std::string>{"(", "P<0.01", ")", "."});
  CHECK(Tokenize("   ").empty());
}

TEST_CASE("Tokenize agrees with the regex oracle on Table 3 style fragments") {
  for (const char *fragment : kFragments) {
    CAPTURE(fragment);
    CHECK(Tokenize(fragment) == OracleTokenize(fragment));
  }
  const auto tokens = Tokenize(kFragments[3]);
  const std::vector<std::string> want = {"`", "ENC-DAT", "'", "study"};
  CHECK(std::search(tokens.begin(), tokens.end(), want.begin(), want.end()) !=
        tokens.end());
}

TEST_CASE("corpus invariants on random text") {
  Rng rng(7);
  const std::vector<std::string> words = {
      "The", "ER", "(ER)", "e.g.", "cells.", "Dr.", "E.", "coli", "grew!",
      "why?", "12", "a", "b,", "c;", "d:", "`x'", "\"q\"", "[1]", "x-y", "U.S."};
  for (int trial = 0; trial < 300; ++trial) {
    std::string text;
    const size_t n = 1 + UniformIndex(rng, 30);
    for (size_t i = 0; i < n; ++i) {
      text += words[UniformIndex(rng, words.size())];
      text += UniformIndex(rng, 4) == 0 ? "  " : " ";
    }
    AbstractRecord rec{"R", text};
    const auto sentences = SplitSentences(text);
    std::string joined;
    for (const auto &s : sentences) joined += s + " ";
    std::string a, b;
    for (char c : text) {
      if (!std::isspace(static_cast<unsigned char>(c))) a.push_back(c);
    }
    for (char c : joined) {
      if (!std::isspace(static_cast<unsigned char>(c))) b.push_back(c);
    }
    REQUIRE(a == b);

    const auto tokenized = TokenizeAbstract(rec);
    for (size_t i = 0; i < tokenized.size(); ++i) {
      CHECK(tokenized[i].sentence_index == static_cast<int>(i));
      CHECK_FALSE(tokenized[i].tokens.empty());
      std::string rebuilt;
      for (const auto &t : tokenized[i].tokens) {
        CHECK_FALSE(t.empty());
        CHECK(t.find_first_of(" \t\n\r") == std::string::npos);
        rebuilt += t;
      }
      std::string original;
      for (char c : sentences[i]) {
        if (!std::isspace(static_cast<unsigned char>(c))) original.push_back(c);
      }
      CHECK(rebuilt == original);
    }
  }
}

}  // namespace abx
