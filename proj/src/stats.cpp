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

#include "inconsist/stats.hpp"

#include <cmath>
#include <iomanip>
#include <map>
#include <random>
#include <set>

#include "inconsist/csv.hpp"
#include "inconsist/errors.hpp"

namespace inconsist {

std::vector<InconsistencyPair> collect_pairs(
    const std::vector<AttackResult>& results) {
  std::vector<InconsistencyPair> pairs;
  for (const auto& r : results) {
    if (!r.original) continue;
    for (const auto& t : r.traces) {
      if (!t.verified || !t.reverse_response || !t.reverse_variable) continue;
      InconsistencyPair p;
      p.instance_id = r.instance.id;
      p.candidate_index = t.candidate_index;
      p.premise = r.instance.context;
      p.original_hypothesis = r.instance.variable;
      p.original_label = r.original->label;
      p.original_explanation = r.original->explanation;
      p.reverse_hypothesis = *t.reverse_variable;
      p.reverse_label = t.reverse_response->label;
      p.reverse_explanation = t.reverse_response->explanation;
      pairs.push_back(std::move(p));
    }
  }
  return pairs;
}

DedupResult dedup_pairs(const std::vector<InconsistencyPair>& pairs) {
  DedupResult out;
  std::map<std::pair<Tokens, Tokens>, std::size_t> slot;
  std::vector<std::set<Tokens>> hypotheses;
  for (const auto& p : pairs) {
    const auto key = std::make_pair(p.original_explanation.tokens,
                                    p.reverse_explanation.tokens);
    auto [it, inserted] = slot.emplace(key, out.distinct.size());
    if (inserted) {
      out.distinct.push_back(p);
      out.raw_counts.push_back(0);
      hypotheses.emplace_back();
    }
    ++out.raw_counts[it->second];
    hypotheses[it->second].insert(normalize(p.reverse_hypothesis));
  }
  for (const auto& h : hypotheses) out.hypothesis_counts.push_back(h.size());
  return out;
}

MeanStd mean_std(const std::vector<double>& values, bool sample) {
  if (values.empty()) return {};
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  const std::size_t dof = sample ? values.size() - 1 : values.size();
  if (dof == 0) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(dof))};
}

RunSummary summarize_counts(std::uint64_t processed, std::uint64_t raw_pairs,
                            std::uint64_t distinct_pairs, double realism) {
  if (!(realism >= 0.0 && realism <= 1.0)) {
    throw ArgumentError("realism fraction must lie in [0, 1]");
  }
  RunSummary s;
  s.processed = processed;
  s.raw_pairs = raw_pairs;
  s.distinct_pairs = distinct_pairs;
  s.realism = realism;
  s.realistic_pairs = static_cast<std::uint64_t>(
      std::llround(realism * static_cast<double>(distinct_pairs)));
  s.success_rate = processed == 0 ? 0.0
                                  : static_cast<double>(s.realistic_pairs) /
                                        static_cast<double>(processed);
  return s;
}

RunSummary compute_summary(const std::vector<AttackResult>& results,
                           double realism, bool sample_std) {
  const auto pairs = collect_pairs(results);
  const auto dedup = dedup_pairs(pairs);
  RunSummary s = summarize_counts(results.size(), pairs.size(),
                                  dedup.distinct.size(), realism);
  for (const auto& r : results) {
    if (r.error) {
      ++s.errored_instances;
      continue;
    }
    if (r.outcome.discarded) ++s.discarded;
    for (const auto& t : r.traces) s.errored_traces += t.errored() ? 1 : 0;
  }
  s.discard_fraction =
      s.processed == 0 ? 0.0
                       : static_cast<double>(s.discarded) /
                             static_cast<double>(s.processed);
  s.sample_std = sample_std;

  std::vector<double> per_pair;
  std::vector<double> per_raw_pair;
  for (std::size_t i = 0; i < dedup.distinct.size(); ++i) {
    const auto count = static_cast<double>(dedup.hypothesis_counts[i]);
    per_pair.push_back(count);
    per_raw_pair.insert(per_raw_pair.end(), dedup.raw_counts[i], count);
  }
  s.hypotheses_per_pair = mean_std(per_pair, sample_std);
  s.hypotheses_per_raw_pair = mean_std(per_raw_pair, sample_std);
  return s;
}

std::vector<std::size_t> sample_indices(std::size_t population, std::size_t n,
                                        std::uint64_t seed) {
  if (n > population) {
    throw ArgumentError("cannot sample " + std::to_string(n) + " of " +
                        std::to_string(population) + " pairs");
  }
  std::mt19937_64 rng(seed);
  // Unbiased draw in [0, bound); the distribution classes are not portable.
  auto below = [&](std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do {
      v = rng();
    } while (v >= limit);
    return v % bound;
  };
  std::vector<std::size_t> idx(population);
  for (std::size_t i = 0; i < population; ++i) idx[i] = i;
  for (std::size_t i = 0; i < n; ++i) {
    const auto j = i + static_cast<std::size_t>(below(population - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(n);
  return idx;
}

void sample_for_annotation(const std::vector<InconsistencyPair>& distinct,
                           std::size_t n, std::uint64_t seed,
                           std::ostream& out) {
  const auto picks = sample_indices(distinct.size(), n, seed);
  csv::write_row(out, {"instance_id", "premise", "original_hypothesis",
                       "original_label", "original_explanation",
                       "reverse_hypothesis", "reverse_label",
                       "reverse_explanation", "realistic"});
  for (std::size_t i : picks) {
    const auto& p = distinct[i];
    csv::write_row(out, {p.instance_id, p.premise, p.original_hypothesis,
                         std::string(label_name(p.original_label)),
                         p.original_explanation.raw, p.reverse_hypothesis,
                         std::string(label_name(p.reverse_label)),
                         p.reverse_explanation.raw, ""});
  }
}

void print_summary(const RunSummary& s, std::ostream& out) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::fixed << std::setprecision(4);
  const auto row = [&](const char* name) -> std::ostream& {
    return out << std::left << std::setw(34) << name << ' ';
  };
  row("instances processed") << s.processed << '\n';
  row("discarded") << s.discarded << " (" << 100.0 * s.discard_fraction
                   << "%)\n";
  row("errored instances") << s.errored_instances << '\n';
  row("errored traces") << s.errored_traces << '\n';
  row("raw inconsistency pairs") << s.raw_pairs << '\n';
  row("distinct inconsistency pairs") << s.distinct_pairs << '\n';
  const char* kind = s.sample_std ? "sample" : "population";
  row("reverse hypotheses per pair") << s.hypotheses_per_pair.mean << " +/- "
                                     << s.hypotheses_per_pair.std << " ("
                                     << kind << ")\n";
  row("  weighted by raw pair") << s.hypotheses_per_raw_pair.mean << " +/- "
                                << s.hypotheses_per_raw_pair.std << '\n';
  row("realism fraction") << s.realism << '\n';
  row("estimated realistic pairs") << s.realistic_pairs << '\n';
  row("success rate") << 100.0 * s.success_rate << "%\n";
  out.flags(flags);
  out.precision(precision);
}

}  // namespace inconsist
