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

#include "inconsist/esnli.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>

#include <nlohmann/json.hpp>

#include "inconsist/csv.hpp"
#include "inconsist/errors.hpp"

namespace inconsist {
namespace {

bool is_word_byte(unsigned char c) { return c >= 0x80 || std::isalnum(c); }

// Splits one whitespace-free chunk into word runs and single punctuation
// characters, then re-attaches "n't".
void tokenize_chunk(std::string_view chunk, Tokens& out) {
  Tokens pieces;
  std::size_t i = 0;
  while (i < chunk.size()) {
    const auto c = static_cast<unsigned char>(chunk[i]);
    if (is_word_byte(c)) {
      std::size_t j = i;
      while (j < chunk.size() &&
             is_word_byte(static_cast<unsigned char>(chunk[j]))) {
        ++j;
      }
      pieces.emplace_back(chunk.substr(i, j - i));
      i = j;
    } else {
      pieces.emplace_back(1, static_cast<char>(c));
      ++i;
    }
  }

  for (std::size_t k = 0; k < pieces.size(); ++k) {
    const std::string& p = pieces[k];
    if (k + 2 < pieces.size() && !p.empty() && p.back() == 'n' &&
        is_word_byte(static_cast<unsigned char>(p.front())) &&
        pieces[k + 1] == "'" && pieces[k + 2] == "t") {
      if (p.size() > 1) out.push_back(p.substr(0, p.size() - 1));
      out.emplace_back("n't");
      k += 2;
      continue;
    }
    if (p == ".") continue;
    out.push_back(p);
  }
}

}  // namespace

std::string_view label_name(NliLabel label) {
  switch (label) {
    case NliLabel::kEntailment:
      return "entailment";
    case NliLabel::kNeutral:
      return "neutral";
    case NliLabel::kContradiction:
      return "contradiction";
  }
  return "";
}

std::optional<NliLabel> parse_label(std::string_view name) {
  for (NliLabel label : kAllLabels) {
    if (label_name(label) == name) return label;
  }
  return std::nullopt;
}

std::optional<Split> parse_split(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "dev") return Split::kDev;
  if (name == "test") return Split::kTest;
  return std::nullopt;
}

Tokens normalize(std::string_view text) {
  std::string lowered(text);
  std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                 [](unsigned char c) {
                   return c < 0x80 ? static_cast<char>(std::tolower(c))
                                   : static_cast<char>(c);
                 });
  Tokens tokens;
  std::size_t i = 0;
  while (i < lowered.size()) {
    while (i < lowered.size() &&
           std::isspace(static_cast<unsigned char>(lowered[i]))) {
      ++i;
    }
    std::size_t j = i;
    while (j < lowered.size() &&
           !std::isspace(static_cast<unsigned char>(lowered[j]))) {
      ++j;
    }
    if (j > i) tokenize_chunk(std::string_view(lowered).substr(i, j - i), tokens);
    i = j;
  }
  return tokens;
}

std::string join(const Tokens& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

bool contains_token(const Tokens& tokens, std::string_view token) {
  return std::find(tokens.begin(), tokens.end(), token) != tokens.end();
}

bool contains_span(const Tokens& haystack, const Tokens& needle) {
  if (needle.empty()) return true;
  return std::search(haystack.begin(), haystack.end(), needle.begin(),
                     needle.end()) != haystack.end();
}

ColumnMapping ColumnMapping::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open column mapping " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("column mapping " + path.string() + ": " + e.what());
  }
  if (!j.is_object()) {
    throw FormatError("column mapping " + path.string() +
                      ": expected a JSON object");
  }
  ColumnMapping m;
  const std::pair<const char*, std::string*> keys[] = {
      {"id", &m.id},
      {"label", &m.label},
      {"context", &m.context},
      {"variable", &m.variable},
      {"explanation", &m.explanation}};
  for (auto& [key, field] : keys) {
    if (j.contains(key)) *field = j.at(key).get<std::string>();
  }
  return m;
}

namespace {

void load_csv_file(const std::filesystem::path& path,
                   const ColumnMapping& columns, LoadResult& result) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  csv::Reader reader(in);
  auto header = reader.next();
  if (!header) throw FormatError(path.string() + ": missing header row");
  // Strip a UTF-8 byte order mark.
  if (!header->empty() && header->front().rfind("\xEF\xBB\xBF", 0) == 0) {
    header->front().erase(0, 3);
  }

  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < header->size(); ++i) index[(*header)[i]] = i;
  auto column = [&](const std::string& name) {
    auto it = index.find(name);
    if (it == index.end()) {
      throw FormatError(path.string() + ": header has no column '" + name +
                        "'");
    }
    return it->second;
  };
  const std::size_t id_col = column(columns.id);
  const std::size_t label_col = column(columns.label);
  const std::size_t context_col = column(columns.context);
  const std::size_t variable_col = column(columns.variable);
  const std::size_t explanation_col = column(columns.explanation);

  while (auto row = reader.next()) {
    if (row->size() == 1 && row->front().empty()) continue;  // blank line
    ++result.data_rows;
    auto cell = [&](std::size_t col) -> std::string {
      return col < row->size() ? (*row)[col] : std::string();
    };
    auto label = parse_label(cell(label_col));
    std::string variable = cell(variable_col);
    if (!label || normalize(variable).empty()) {
      ++result.skipped;
      continue;
    }
    EsnliRecord record;
    record.instance.id = cell(id_col);
    record.instance.context = cell(context_col);
    record.instance.variable = std::move(variable);
    record.instance.gold_label = label;
    record.explanation = Explanation(cell(explanation_col));
    result.records.push_back(std::move(record));
  }
}

std::string_view split_name(Split split) {
  switch (split) {
    case Split::kTrain:
      return "train";
    case Split::kDev:
      return "dev";
    case Split::kTest:
      return "test";
  }
  return "";
}

}  // namespace

LoadResult load_esnli(const std::filesystem::path& path, Split split,
                      const ColumnMapping& columns) {
  LoadResult result;
  std::error_code ec;
  if (!std::filesystem::is_directory(path, ec)) {
    load_csv_file(path, columns, result);
    return result;
  }
  const std::string prefix = "esnli_" + std::string(split_name(split));
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(path)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind(prefix, 0) == 0 && entry.path().extension() == ".csv") {
      files.push_back(entry.path());
    }
  }
  if (files.empty()) {
    throw IoError("no " + prefix + "*.csv file in " + path.string());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) load_csv_file(f, columns, result);
  return result;
}

void save_esnli(const std::filesystem::path& path,
                const std::vector<EsnliRecord>& records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  const ColumnMapping columns;
  csv::write_row(out, {columns.id, columns.label, columns.context,
                       columns.variable, columns.explanation});
  for (const auto& r : records) {
    csv::write_row(out, {r.instance.id,
                         r.instance.gold_label
                             ? std::string(label_name(*r.instance.gold_label))
                             : std::string(),
                         r.instance.context, r.instance.variable,
                         r.explanation.raw});
  }
}

std::vector<Explanation> filter_by_concept(
    const std::vector<Explanation>& explanations, std::string_view keyword) {
  std::vector<Explanation> out;
  std::copy_if(explanations.begin(), explanations.end(),
               std::back_inserter(out), [&](const Explanation& e) {
                 return contains_token(e.tokens, keyword);
               });
  return out;
}

}  // namespace inconsist
