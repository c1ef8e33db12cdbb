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

#ifndef INCONSIST_INCONSISTENCY_HPP_
#define INCONSIST_INCONSISTENCY_HPP_

#include <optional>
#include <string>
#include <vector>

#include "inconsist/esnli.hpp"
#include "inconsist/template.hpp"

namespace inconsist {

struct Provenance {
  enum class Kind { kNegation, kSwap };
  Kind kind = Kind::kNegation;
  // kNegation: index of the removed token. kSwap: unused.
  std::size_t position = 0;
  // kSwap only.
  std::string template_id;
  std::size_t variant = 0;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct Candidate {
  Tokens tokens;
  Provenance provenance;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

// Candidate explanations inconsistent with `source`.
struct InconsistencySet {
  Explanation source;
  // Unset only when no label was supplied and no template matched.
  std::optional<NliLabel> source_label;
  std::optional<Match> source_match;
  std::vector<Candidate> candidates;

  bool contains(const Tokens& tokens) const;
};

class GenerationOutcome {
 public:
  static GenerationOutcome discarded(Explanation source,
                                     std::optional<NliLabel> label) {
    GenerationOutcome o;
    o.set_.source = std::move(source);
    o.set_.source_label = label;
    return o;
  }
  static GenerationOutcome generated(InconsistencySet set) {
    GenerationOutcome o;
    o.generated_ = true;
    o.set_ = std::move(set);
    return o;
  }

  bool is_discarded() const { return !generated_; }
  // Empty candidate list when discarded.
  const InconsistencySet& set() const { return set_; }

 private:
  bool generated_ = false;
  InconsistencySet set_;
};

// One variant per "not"/"n't" occurrence, with only that occurrence removed.
std::vector<Tokens> negation_variants(const Tokens& explanation);

struct SwapResult {
  std::optional<Match> match;
  std::vector<Candidate> candidates;
};

// Matches against the templates of `label` and instantiates every
// wildcard-free variant of the other labels' templates, in file order.
SwapResult swap_candidates(const Tokens& explanation, NliLabel label,
                           const TemplateSet& templates);

inline std::vector<Tokens> swap_variants(const Tokens& explanation,
                                         NliLabel label,
                                         const TemplateSet& templates) {
  std::vector<Tokens> out;
  for (auto& c : swap_candidates(explanation, label, templates).candidates) {
    out.push_back(std::move(c.tokens));
  }
  return out;
}

// Negation candidates first, then swaps; duplicates and copies of the source
// are dropped. Without a label the labels are tried in enumeration order and
// the first matching template's label becomes the source label.
GenerationOutcome build_inconsistency_set(const Explanation& explanation,
                                          std::optional<NliLabel> label,
                                          const TemplateSet& templates);

}  // namespace inconsist

#endif  // INCONSIST_INCONSISTENCY_HPP_
