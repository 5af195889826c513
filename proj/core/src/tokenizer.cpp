// Copyright 2026 The Driftscope Authors.
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

#include <string>
#include <string_view>
#include <vector>

#include "driftscope/corpus.hpp"

namespace driftscope {

namespace {

// ASCII-only classification keeps the output identical on every platform
// and locale. Bytes outside ASCII never belong to a token.
bool is_alpha(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

char to_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

}  // namespace

// A sentence ends at '.', '!' or '?' followed by whitespace or the end of the
// text. Tokens are maximal runs of letters; a hyphen is kept when it sits
// between two letters. Every other byte separates tokens. Sentences without
// tokens are dropped.
std::vector<Sentence> tokenize_sentences(std::string_view text) {
  std::vector<Sentence> sentences;
  Sentence current;
  std::string token;

  auto flush_token = [&] {
    if (!token.empty()) {
      current.push_back(std::move(token));
      token.clear();
    }
  };
  auto flush_sentence = [&] {
    flush_token();
    if (!current.empty()) {
      sentences.push_back(std::move(current));
      current.clear();
    }
  };

  const std::size_t n = text.size();
  for (std::size_t i = 0; i < n; ++i) {
    const char c = text[i];
    if (is_alpha(c)) {
      token.push_back(to_lower(c));
    } else if (c == '-' && !token.empty() && i + 1 < n && is_alpha(text[i + 1])) {
      token.push_back('-');
    } else if (c == '.' || c == '!' || c == '?') {
      if (i + 1 == n || is_space(text[i + 1])) {
        flush_sentence();
      } else {
        flush_token();
      }
    } else {
      flush_token();
    }
  }
  flush_sentence();
  return sentences;
}

}  // namespace driftscope
