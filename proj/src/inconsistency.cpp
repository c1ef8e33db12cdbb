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

#include "inconsist/inconsistency.hpp"

#include <algorithm>
#include <set>

namespace inconsist {

bool InconsistencySet::contains(const Tokens& tokens) const {
  return std::any_of(candidates.begin(), candidates.end(),
                     [&](const Candidate& c) { return c.tokens == tokens; });
}

std::vector<Tokens> negation_variants(const Tokens& explanation) {
  std::vector<Tokens> out;
  for (std::size_t i = 0; i < explanation.size(); ++i) {
    if (explanation[i] != "not" && explanation[i] != "n't") continue;
    Tokens v = explanation;
    v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
    out.push_back(std::move(v));
  }
  return out;
}

SwapResult swap_candidates(const Tokens& explanation, NliLabel label,
                           const TemplateSet& templates) {
  SwapResult result;
  result.match = match(explanation, templates.for_label(label));
  if (!result.match) return result;
  for (const auto& t : templates.all()) {
    if (t.label() == label) continue;
    for (std::size_t i = 0; i < t.variants().size(); ++i) {
      if (has_wildcard(t.variants()[i])) continue;
      result.candidates.push_back(
          Candidate{instantiate(t.variants()[i], result.match->binding),
                    Provenance{Provenance::Kind::kSwap, 0, t.id(), i}});
    }
  }
  return result;
}

GenerationOutcome build_inconsistency_set(const Explanation& explanation,
                                          std::optional<NliLabel> label,
                                          const TemplateSet& templates) {
  const Tokens& source = explanation.tokens;
  InconsistencySet set;
  set.source = explanation;
  set.source_label = label;

  std::vector<Candidate> raw;
  for (std::size_t i = 0; i < source.size(); ++i) {
    if (source[i] != "not" && source[i] != "n't") continue;
    Tokens v = source;
    v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
    raw.push_back(Candidate{std::move(v),
                            Provenance{Provenance::Kind::kNegation, i, {}, 0}});
  }

  SwapResult swaps;
  if (label) {
    swaps = swap_candidates(source, *label, templates);
  } else {
    for (NliLabel l : kAllLabels) {
      swaps = swap_candidates(source, l, templates);
      if (swaps.match) {
        set.source_label = l;
        break;
      }
    }
  }
  set.source_match = swaps.match;
  for (auto& c : swaps.candidates) raw.push_back(std::move(c));

  std::set<Tokens> seen{source};
  for (auto& c : raw) {
    if (seen.insert(c.tokens).second) set.candidates.push_back(std::move(c));
  }
  if (set.candidates.empty()) {
    return GenerationOutcome::discarded(explanation, set.source_label);
  }
  return GenerationOutcome::generated(std::move(set));
}

}  // namespace inconsist
