// Copyright 2026 The Inconsist Authors.
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

#ifndef INCONSIST_ESNLI_HPP_
#define INCONSIST_ESNLI_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace inconsist {

using Tokens = std::vector<std::string>;

enum class NliLabel { kEntailment, kNeutral, kContradiction };

inline constexpr NliLabel kAllLabels[] = {
    NliLabel::kEntailment, NliLabel::kNeutral, NliLabel::kContradiction};

std::string_view label_name(NliLabel label);
std::optional<NliLabel> parse_label(std::string_view name);

// Lowercases, drops sentence periods, splits punctuation into standalone
// tokens and detaches the "n't" clitic ("doesn't" -> "does", "n't").
Tokens normalize(std::string_view text);

// Space-joined tokens; normalize(join(normalize(t))) == normalize(t).
std::string join(const Tokens& tokens);

bool contains_token(const Tokens& tokens, std::string_view token);

// True when needle occurs as a contiguous run inside haystack.
bool contains_span(const Tokens& haystack, const Tokens& needle);

struct Explanation {
  std::string raw;
  Tokens tokens;

  Explanation() = default;
  explicit Explanation(std::string text)
      : raw(std::move(text)), tokens(normalize(raw)) {}

  friend bool operator==(const Explanation& a, const Explanation& b) {
    return a.tokens == b.tokens;
  }
};

// One task input split into the fixed context part (premise) and the part
// the attack varies (hypothesis). context may be empty.
struct NliInstance {
  std::string id;
  std::string context;
  std::string variable;
  std::optional<NliLabel> gold_label;

  friend bool operator==(const NliInstance&, const NliInstance&) = default;
};

struct EsnliRecord {
  NliInstance instance;
  Explanation explanation;
};

enum class Split { kTrain, kDev, kTest };
std::optional<Split> parse_split(std::string_view name);

// Column names of the e-SNLI CSV layout. Defaults follow the public release.
struct ColumnMapping {
  std::string id = "pairID";
  std::string label = "gold_label";
  std::string context = "Sentence1";
  std::string variable = "Sentence2";
  std::string explanation = "Explanation_1";

  // JSON object with any subset of the keys
  // {"id", "label", "context", "variable", "explanation"}.
  static ColumnMapping from_file(const std::filesystem::path& path);
};

struct LoadResult {
  std::vector<EsnliRecord> records;
  std::size_t skipped = 0;
  std::size_t data_rows = 0;
};

// Loads a CSV file. When path is a directory, every esnli_<split>*.csv file
// inside it is loaded in name order.
LoadResult load_esnli(const std::filesystem::path& path, Split split,
                      const ColumnMapping& columns = {});

// Writes records in the default column layout.
void save_esnli(const std::filesystem::path& path,
                const std::vector<EsnliRecord>& records);

std::vector<Explanation> filter_by_concept(
    const std::vector<Explanation>& explanations, std::string_view keyword);

}  // namespace inconsist

#endif  // INCONSIST_ESNLI_HPP_
