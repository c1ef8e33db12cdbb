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

#ifndef INCONSIST_ORACLE_HPP_
#define INCONSIST_ORACLE_HPP_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "inconsist/esnli.hpp"
#include "inconsist/protocol.hpp"

namespace inconsist {

// Deterministic stand-in for a forward model and its reverse explainer,
// driven by a small fact base.
//
// Forward: the first fact whose x occurs in the context or hypothesis and
// whose y occurs in the hypothesis answers with its label and the canonical
// explanation for that label:
//
//   entailment     "x is a type of y"
//   neutral        "not all x are y"
//   contradiction  "x and y are different"
//
// Reverse: the canonical explanation of a fact maps back to the context
// with x replaced by y. A seeded fact also inverts the canonical explanation
// of its swapped label into a marker hypothesis "the y is not x", and forward
// answers that hypothesis with the swapped label. Each seeded fact therefore
// yields exactly one verified inconsistency when attacked, and an unseeded
// oracle never contradicts itself.

struct OracleFact {
  Tokens x;
  Tokens y;
  NliLabel label = NliLabel::kEntailment;

  std::pair<Tokens, Tokens> key() const { return {x, y}; }
  friend bool operator==(const OracleFact&, const OracleFact&) = default;
};

struct OracleSpec {
  std::vector<OracleFact> facts;
  std::set<std::pair<Tokens, Tokens>> seeds;

  // {"facts": [{"x": "dog", "y": "animal", "label": "entailment"}, ...],
  //  "seeds": [{"x": "dog", "y": "animal"}, ...]}
  static OracleSpec from_json(const nlohmann::json& j);
  static OracleSpec load(const std::filesystem::path& path);
  nlohmann::ordered_json to_json() const;

  // Throws ArgumentError on duplicate keys, empty elements or unknown seeds.
  void validate() const;
};

enum class OracleMode { kForward, kReverse, kBoth };

class Oracle {
 public:
  explicit Oracle(OracleSpec spec);

  ForwardResponse forward(std::string_view context,
                          std::string_view variable) const;
  ReverseResponse reverse(std::string_view context,
                          std::string_view explanation) const;

  // Serves one protocol line. Never throws; failures become error replies.
  // line_no names the line in errors when the request id is unreadable.
  std::string handle_line(std::string_view line, OracleMode mode,
                          std::size_t line_no = 0) const;

  const OracleSpec& spec() const { return spec_; }

  static NliLabel swapped_label(NliLabel label);
  static Tokens realize(NliLabel label, const OracleFact& fact);
  static Tokens original_hypothesis(const OracleFact& fact,
                                    const Tokens& context);
  static Tokens swapped_hypothesis(const OracleFact& fact);

  static constexpr std::string_view kFallbackExplanation = "no supporting fact";
  static constexpr std::string_view kFallbackHypothesis =
      "something unrelated happens";

 private:
  bool seeded(const OracleFact& fact) const;

  OracleSpec spec_;
};

// Answers request lines until end of input. With `reorder`, each request is
// answered on its own thread after a short id-dependent delay so replies
// leave out of order.
void serve_stdio(const Oracle& oracle, OracleMode mode, std::istream& in,
                 std::ostream& out, bool reorder = false);

// Blocks serving POST requests on any path. Throws on bind failure.
void serve_http(const Oracle& oracle, OracleMode mode, const std::string& host,
                int port);

// A fact base plus a dataset with one instance per fact ("a <x> is in the
// park" / "a <y> is in the park"). The first `seeded` facts are seeds.
struct SyntheticSuite {
  OracleSpec spec;
  std::vector<EsnliRecord> dataset;
};

SyntheticSuite make_synthetic_suite(std::size_t facts, std::size_t seeded,
                                    std::uint64_t seed);

}  // namespace inconsist

#endif  // INCONSIST_ORACLE_HPP_
