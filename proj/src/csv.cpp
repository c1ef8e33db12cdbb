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

#include "inconsist/csv.hpp"

namespace inconsist::csv {

std::optional<Row> Reader::next() {
  using Traits = std::char_traits<char>;
  if (in_.peek() == Traits::eof()) return std::nullopt;

  Row row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  ++line_;
  while (true) {
    const int c = in_.get();
    if (c == Traits::eof()) break;
    if (quoted) {
      if (c == '"') {
        if (in_.peek() == '"') {
          in_.get();
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line_;
        field.push_back(static_cast<char>(c));
      }
      continue;
    }
    if (c == '"' && !field_started) {
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      field_started = false;
    } else if (c == '\n') {
      break;
    } else if (c == '\r' && in_.peek() == '\n') {
      // swallowed; the '\n' ends the record
    } else {
      field.push_back(static_cast<char>(c));
      field_started = true;
    }
  }
  row.push_back(std::move(field));
  return row;
}

std::string quote(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_row(std::ostream& out, const Row& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i > 0) out << ',';
    out << quote(row[i]);
  }
  out << '\n';
}

}  // namespace inconsist::csv
