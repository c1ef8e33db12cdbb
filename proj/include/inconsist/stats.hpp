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

#ifndef INCONSIST_STATS_HPP_
#define INCONSIST_STATS_HPP_

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "inconsist/attack.hpp"

namespace inconsist {

// A verified (original explanation, reverse explanation) pair together with
// the inputs that provoked it.
struct InconsistencyPair {
  std::string instance_id;
  std::size_t candidate_index = 0;
  std::string premise;
  std::string original_hypothesis;
  NliLabel original_label = NliLabel::kNeutral;
  Explanation original_explanation;
  std::string reverse_hypothesis;
  NliLabel reverse_label = NliLabel::kNeutral;
  Explanation reverse_explanation;

  friend bool operator==(const InconsistencyPair&,
                         const InconsistencyPair&) = default;
};

// Every verified trace, in result order.
std::vector<InconsistencyPair> collect_pairs(
    const std::vector<AttackResult>& results);

struct DedupResult {
  // First pair seen for each (original, reverse) explanation key.
  std::vector<InconsistencyPair> distinct;
  // Distinct normalized reverse hypotheses per key, parallel to `distinct`.
  std::vector<std::size_t> hypothesis_counts;
  // Number of raw pairs per key, parallel to `distinct`.
  std::vector<std::size_t> raw_counts;
};

DedupResult dedup_pairs(const std::vector<InconsistencyPair>& pairs);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
  friend bool operator==(const MeanStd&, const MeanStd&) = default;
};

// Zero for empty input; sample deviation is zero for a single value.
MeanStd mean_std(const std::vector<double>& values, bool sample);

struct RunSummary {
  std::uint64_t processed = 0;
  std::uint64_t discarded = 0;
  double discard_fraction = 0.0;
  std::uint64_t errored_instances = 0;
  std::uint64_t errored_traces = 0;
  std::uint64_t raw_pairs = 0;
  std::uint64_t distinct_pairs = 0;
  bool sample_std = false;
  // Distinct reverse hypotheses per distinct pair.
  MeanStd hypotheses_per_pair;
  // Same counts weighted by raw pair (each raw pair reports its key's count).
  MeanStd hypotheses_per_raw_pair;
  double realism = 1.0;
  std::uint64_t realistic_pairs = 0;
  double success_rate = 0.0;

  friend bool operator==(const RunSummary&, const RunSummary&) = default;
};

// The count-only part of a summary: realistic = round(realism * distinct),
// success rate = realistic / processed. Throws ArgumentError when realism is
// outside [0, 1].
RunSummary summarize_counts(std::uint64_t processed, std::uint64_t raw_pairs,
                            std::uint64_t distinct_pairs, double realism);

RunSummary compute_summary(const std::vector<AttackResult>& results,
                           double realism = 1.0, bool sample_std = false);

// Writes a CSV of n distinct pairs drawn uniformly without replacement, with
// an empty "realistic" column for annotators. Throws ArgumentError when n
// exceeds the number of pairs.
void sample_for_annotation(const std::vector<InconsistencyPair>& distinct,
                           std::size_t n, std::uint64_t seed,
                           std::ostream& out);

// Indices of a uniform n-subset in draw order; stable for a given seed.
std::vector<std::size_t> sample_indices(std::size_t population, std::size_t n,
                                        std::uint64_t seed);

void print_summary(const RunSummary& summary, std::ostream& out);

}  // namespace inconsist

#endif  // INCONSIST_STATS_HPP_
