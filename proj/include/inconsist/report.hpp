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

#ifndef INCONSIST_REPORT_HPP_
#define INCONSIST_REPORT_HPP_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "inconsist/attack.hpp"
#include "inconsist/stats.hpp"

namespace inconsist {

// Report file: newline-delimited JSON. A header line, one line per attack
// result, and a closing summary line once the run has finished.
//
//   {"type":"header","schema":"inconsist-report","version":1,...}
//   {"type":"result","instance":{...},"original":{...},...}
//   {"type":"summary",...}

inline constexpr int kReportVersion = 1;
inline constexpr std::string_view kReportSchema = "inconsist-report";

struct ReportHeader {
  int version = kReportVersion;
  bool standalone = false;
  std::uint64_t seed = 0;
  friend bool operator==(const ReportHeader&, const ReportHeader&) = default;
};

struct Report {
  ReportHeader header;
  std::vector<AttackResult> results;
  // Absent while a run is still appending.
  std::optional<RunSummary> summary;
  friend bool operator==(const Report&, const Report&) = default;
};

nlohmann::ordered_json to_json(const AttackResult& result);
AttackResult result_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const RunSummary& summary);
RunSummary summary_from_json(const nlohmann::json& j);

// One line without the trailing newline.
std::string serialize_result(const AttackResult& result);

// Appends lines and flushes after each one.
class ReportWriter {
 public:
  ReportWriter(const std::filesystem::path& path, const ReportHeader& header);
  void append(const AttackResult& result);
  void finish(const RunSummary& summary);

 private:
  std::ofstream out_;
};

void write_report(const std::filesystem::path& path, const Report& report);
std::string serialize_report(const Report& report);

// Throws ReportError on version mismatch, malformed lines or truncation; the
// message names the byte offset of the offending line.
Report read_report(const std::filesystem::path& path);
Report parse_report(std::string_view text);

}  // namespace inconsist

#endif  // INCONSIST_REPORT_HPP_
