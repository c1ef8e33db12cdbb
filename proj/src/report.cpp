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

#include "inconsist/report.hpp"

#include <sstream>

#include "inconsist/errors.hpp"

namespace inconsist {
namespace {

using Json = nlohmann::ordered_json;

Tokens split_tokens(const std::string& text) {
  Tokens out;
  std::size_t start = 0;
  while (start <= text.size() && !text.empty()) {
    const std::size_t sp = text.find(' ', start);
    out.push_back(text.substr(start, sp == std::string::npos ? std::string::npos
                                                             : sp - start));
    if (sp == std::string::npos) break;
    start = sp + 1;
  }
  return out;
}

Json label_json(std::optional<NliLabel> label) {
  return label ? Json(std::string(label_name(*label))) : Json(nullptr);
}

std::optional<NliLabel> label_from(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  const auto name = j.get<std::string>();
  auto label = parse_label(name);
  if (!label) throw FormatError("unknown label '" + name + "'");
  return label;
}

Json response_json(const ForwardResponse& r) {
  Json j;
  j["label"] = std::string(label_name(r.label));
  j["explanation"] = r.explanation.raw;
  return j;
}

ForwardResponse response_from(const nlohmann::json& j) {
  return ForwardResponse{*label_from(j.at("label")),
                         Explanation(j.at("explanation").get<std::string>())};
}

Json mean_std_json(const MeanStd& m) { return Json{{"mean", m.mean}, {"std", m.std}}; }

MeanStd mean_std_from(const nlohmann::json& j) {
  return MeanStd{j.at("mean").get<double>(), j.at("std").get<double>()};
}

Json header_json(const ReportHeader& h) {
  Json j;
  j["type"] = "header";
  j["schema"] = kReportSchema;
  j["version"] = h.version;
  j["standalone"] = h.standalone;
  j["seed"] = h.seed;
  return j;
}

}  // namespace

Json to_json(const AttackResult& r) {
  Json j;
  j["type"] = "result";
  j["instance"] = Json{{"id", r.instance.id},
                       {"context", r.instance.context},
                       {"variable", r.instance.variable},
                       {"gold_label", label_json(r.instance.gold_label)}};
  j["original"] = r.original ? response_json(*r.original) : Json(nullptr);
  if (r.error) j["error"] = *r.error;

  Json outcome;
  outcome["discarded"] = r.outcome.discarded;
  outcome["source_label"] = label_json(r.outcome.source_label);
  if (const auto& m = r.outcome.source_match) {
    outcome["source_match"] = Json{{"template", m->template_id},
                                   {"variant", m->variant},
                                   {"x", join(m->binding.x)},
                                   {"y", join(m->binding.y)}};
  } else {
    outcome["source_match"] = nullptr;
  }
  outcome["candidates"] = Json::array();
  for (const auto& c : r.outcome.candidates) {
    Json cj;
    cj["text"] = join(c.tokens);
    if (c.provenance.kind == Provenance::Kind::kNegation) {
      cj["kind"] = "negation";
      cj["position"] = c.provenance.position;
    } else {
      cj["kind"] = "swap";
      cj["template"] = c.provenance.template_id;
      cj["variant"] = c.provenance.variant;
    }
    outcome["candidates"].push_back(std::move(cj));
  }
  j["outcome"] = std::move(outcome);

  j["traces"] = Json::array();
  for (const auto& t : r.traces) {
    Json tj;
    tj["candidate"] = t.candidate_index;
    tj["reverse_variable"] =
        t.reverse_variable ? Json(*t.reverse_variable) : Json(nullptr);
    tj["reverse_response"] =
        t.reverse_response ? response_json(*t.reverse_response) : Json(nullptr);
    tj["verified"] = t.verified;
    if (t.error) tj["error"] = *t.error;
    j["traces"].push_back(std::move(tj));
  }
  return j;
}

AttackResult result_from_json(const nlohmann::json& j) {
  if (j.value("type", "") != "result") {
    throw FormatError("expected a result record");
  }
  AttackResult r;
  const auto& inst = j.at("instance");
  r.instance.id = inst.at("id").get<std::string>();
  r.instance.context = inst.at("context").get<std::string>();
  r.instance.variable = inst.at("variable").get<std::string>();
  r.instance.gold_label = label_from(inst.at("gold_label"));
  if (!j.at("original").is_null()) r.original = response_from(j.at("original"));
  if (j.contains("error")) r.error = j.at("error").get<std::string>();

  const auto& outcome = j.at("outcome");
  r.outcome.discarded = outcome.at("discarded").get<bool>();
  r.outcome.source_label = label_from(outcome.at("source_label"));
  if (const auto& m = outcome.at("source_match"); !m.is_null()) {
    r.outcome.source_match = GenerationRecord::SourceMatch{
        m.at("template").get<std::string>(), m.at("variant").get<std::size_t>(),
        Binding{split_tokens(m.at("x").get<std::string>()),
                split_tokens(m.at("y").get<std::string>())}};
  }
  for (const auto& cj : outcome.at("candidates")) {
    Candidate c;
    c.tokens = split_tokens(cj.at("text").get<std::string>());
    const auto kind = cj.at("kind").get<std::string>();
    if (kind == "negation") {
      c.provenance.kind = Provenance::Kind::kNegation;
      c.provenance.position = cj.at("position").get<std::size_t>();
    } else if (kind == "swap") {
      c.provenance.kind = Provenance::Kind::kSwap;
      c.provenance.template_id = cj.at("template").get<std::string>();
      c.provenance.variant = cj.at("variant").get<std::size_t>();
    } else {
      throw FormatError("unknown candidate kind '" + kind + "'");
    }
    r.outcome.candidates.push_back(std::move(c));
  }
  for (const auto& tj : j.at("traces")) {
    AttackCandidateTrace t;
    t.candidate_index = tj.at("candidate").get<std::size_t>();
    if (!tj.at("reverse_variable").is_null()) {
      t.reverse_variable = tj.at("reverse_variable").get<std::string>();
    }
    if (!tj.at("reverse_response").is_null()) {
      t.reverse_response = response_from(tj.at("reverse_response"));
    }
    t.verified = tj.at("verified").get<bool>();
    if (tj.contains("error")) t.error = tj.at("error").get<std::string>();
    r.traces.push_back(std::move(t));
  }
  return r;
}

Json to_json(const RunSummary& s) {
  Json j;
  j["type"] = "summary";
  j["processed"] = s.processed;
  j["discarded"] = s.discarded;
  j["discard_fraction"] = s.discard_fraction;
  j["errored_instances"] = s.errored_instances;
  j["errored_traces"] = s.errored_traces;
  j["raw_pairs"] = s.raw_pairs;
  j["distinct_pairs"] = s.distinct_pairs;
  j["std_kind"] = s.sample_std ? "sample" : "population";
  j["hypotheses_per_pair"] = mean_std_json(s.hypotheses_per_pair);
  j["hypotheses_per_raw_pair"] = mean_std_json(s.hypotheses_per_raw_pair);
  j["realism"] = s.realism;
  j["realistic_pairs"] = s.realistic_pairs;
  j["success_rate"] = s.success_rate;
  return j;
}

RunSummary summary_from_json(const nlohmann::json& j) {
  RunSummary s;
  s.processed = j.at("processed").get<std::uint64_t>();
  s.discarded = j.at("discarded").get<std::uint64_t>();
  s.discard_fraction = j.at("discard_fraction").get<double>();
  s.errored_instances = j.at("errored_instances").get<std::uint64_t>();
  s.errored_traces = j.at("errored_traces").get<std::uint64_t>();
  s.raw_pairs = j.at("raw_pairs").get<std::uint64_t>();
  s.distinct_pairs = j.at("distinct_pairs").get<std::uint64_t>();
  s.sample_std = j.at("std_kind").get<std::string>() == "sample";
  s.hypotheses_per_pair = mean_std_from(j.at("hypotheses_per_pair"));
  s.hypotheses_per_raw_pair = mean_std_from(j.at("hypotheses_per_raw_pair"));
  s.realism = j.at("realism").get<double>();
  s.realistic_pairs = j.at("realistic_pairs").get<std::uint64_t>();
  s.success_rate = j.at("success_rate").get<double>();
  return s;
}

std::string serialize_result(const AttackResult& result) {
  return to_json(result).dump();
}

ReportWriter::ReportWriter(const std::filesystem::path& path,
                           const ReportHeader& header)
    : out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) throw IoError("cannot write report " + path.string());
  out_ << header_json(header).dump() << '\n' << std::flush;
}

void ReportWriter::append(const AttackResult& result) {
  out_ << serialize_result(result) << '\n' << std::flush;
}

void ReportWriter::finish(const RunSummary& summary) {
  out_ << to_json(summary).dump() << '\n' << std::flush;
}

std::string serialize_report(const Report& report) {
  std::string out = header_json(report.header).dump() + "\n";
  for (const auto& r : report.results) out += serialize_result(r) + "\n";
  if (report.summary) out += to_json(*report.summary).dump() + "\n";
  return out;
}

void write_report(const std::filesystem::path& path, const Report& report) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write report " + path.string());
  out << serialize_report(report);
  if (!out.flush()) throw IoError("failed writing report " + path.string());
}

Report parse_report(std::string_view text) {
  Report report;
  bool have_header = false;
  std::size_t offset = 0;
  while (offset < text.size()) {
    const std::size_t nl = text.find('\n', offset);
    if (nl == std::string_view::npos) {
      throw ReportError("truncated report: incomplete line at byte offset " +
                        std::to_string(offset));
    }
    const std::string_view line = text.substr(offset, nl - offset);
    const auto fail = [&](const std::string& why) {
      throw ReportError("report line at byte offset " +
                        std::to_string(offset) + ": " + why);
    };
    if (report.summary) fail("record after the summary");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      fail(std::string("invalid JSON (") + e.what() + ")");
    }
    try {
      const std::string type = j.value("type", "");
      if (!have_header) {
        if (type != "header" || j.value("schema", "") != kReportSchema) {
          fail("expected a report header");
        }
        report.header.version = j.at("version").get<int>();
        if (report.header.version != kReportVersion) {
          fail("unsupported report version " +
               std::to_string(report.header.version) + " (reader supports " +
               std::to_string(kReportVersion) + ")");
        }
        report.header.standalone = j.at("standalone").get<bool>();
        report.header.seed = j.at("seed").get<std::uint64_t>();
        have_header = true;
      } else if (type == "result") {
        report.results.push_back(result_from_json(j));
      } else if (type == "summary") {
        report.summary = summary_from_json(j);
      } else {
        fail("unknown record type '" + type + "'");
      }
    } catch (const ReportError&) {
      throw;
    } catch (const std::exception& e) {
      fail(e.what());
    }
    offset = nl + 1;
  }
  if (!have_header) {
    throw ReportError("empty report: missing header at byte offset 0");
  }
  return report;
}

Report read_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open report " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_report(buf.str());
}

}  // namespace inconsist
