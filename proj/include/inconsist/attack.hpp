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

#ifndef INCONSIST_ATTACK_HPP_
#define INCONSIST_ATTACK_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "inconsist/esnli.hpp"
#include "inconsist/inconsistency.hpp"
#include "inconsist/protocol.hpp"
#include "inconsist/template.hpp"

namespace inconsist {

// Persistable view of a GenerationOutcome.
struct GenerationRecord {
  struct SourceMatch {
    std::string template_id;
    std::size_t variant = 0;
    Binding binding;
    friend bool operator==(const SourceMatch&, const SourceMatch&) = default;
  };

  bool discarded = true;
  std::optional<NliLabel> source_label;
  std::optional<SourceMatch> source_match;
  std::vector<Candidate> candidates;

  static GenerationRecord from(const GenerationOutcome& outcome);
  bool contains(const Tokens& tokens) const;

  friend bool operator==(const GenerationRecord&,
                         const GenerationRecord&) = default;
};

struct AttackCandidateTrace {
  std::size_t candidate_index = 0;
  // Reverse hypothesis produced by the reverse explainer.
  std::optional<std::string> reverse_variable;
  // Forward model answer on the reverse input.
  std::optional<ForwardResponse> reverse_response;
  bool verified = false;
  std::optional<std::string> error;

  bool errored() const { return error.has_value(); }
  friend bool operator==(const AttackCandidateTrace&,
                         const AttackCandidateTrace&) = default;
};

struct AttackResult {
  NliInstance instance;
  // Absent when the initial forward call failed; `error` says why.
  std::optional<ForwardResponse> original;
  std::optional<std::string> error;
  GenerationRecord outcome;
  std::vector<AttackCandidateTrace> traces;

  friend bool operator==(const AttackResult&, const AttackResult&) = default;
};

struct AttackConfig {
  // Send an empty context and put the whole input in the variable part.
  bool standalone = false;
  // Use the dataset's explanation and gold label instead of the initial
  // forward call.
  bool precomputed_explanations = false;
  // Instances attacked concurrently.
  std::size_t workers = 1;
  // Extra attempts after a retryable transport error.
  int retries = 1;
  std::uint64_t seed = 0;
  // Completed instance ids; finished results are kept next to it in
  // "<checkpoint>.results".
  std::optional<std::filesystem::path> checkpoint;
  // Stop after this many newly attacked instances (0 = no limit).
  std::size_t stop_after = 0;
};

// Attacks one instance: forward, build I_e, then reverse and re-query every
// candidate. Endpoint failures are recorded on the result, never thrown.
AttackResult attack_instance(const EsnliRecord& record, ModelClient& model,
                             ModelClient& reverse_model,
                             const TemplateSet& templates,
                             const AttackConfig& config);

struct AttackRun {
  // Sorted by instance id.
  std::vector<AttackResult> results;
  // False when stop_after interrupted the run.
  bool complete = true;
};

using ResultSink = std::function<void(const AttackResult&)>;

// Attacks every record exactly once. `sink` sees results as they finish,
// one at a time. Throws ReportError when the checkpoint is corrupt.
AttackRun attack_dataset(const std::vector<EsnliRecord>& records,
                         ModelClient& model, ModelClient& reverse_model,
                         const TemplateSet& templates,
                         const AttackConfig& config,
                         const ResultSink& sink = {});

}  // namespace inconsist

#endif  // INCONSIST_ATTACK_HPP_
