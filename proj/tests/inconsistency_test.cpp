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
#include <fstream>
#include <random>
#include <set>

#include <gtest/gtest.h>

namespace inconsist {
namespace {

const TemplateSet& shipped() { return TemplateSet::shipped(); }

std::vector<Tokens> expected_dog_animal() {
  std::ifstream in(INCONSIST_FIXTURE_DIR "/dog_animal_inconsistencies.txt");
  std::vector<Tokens> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(normalize(line));
  }
  return out;
}

TEST(NegationTest, Examples) {
  EXPECT_EQ(negation_variants(normalize("Snowboarding is not done outside.")),
            (std::vector<Tokens>{{"snowboarding", "is", "done", "outside"}}));
  EXPECT_TRUE(negation_variants({"a", "dog", "is", "an", "animal"}).empty());
  const auto two = negation_variants(
      {"it", "is", "not", "true", "that", "he", "is", "not", "here"});
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(two[0], (Tokens{"it", "is", "true", "that", "he", "is", "not", "here"}));
  EXPECT_EQ(two[1], (Tokens{"it", "is", "not", "true", "that", "he", "is", "here"}));
}

TEST(NegationTest, ContractedForm) {
  EXPECT_EQ(negation_variants(normalize("A dog doesn't fly.")),
            (std::vector<Tokens>{{"a", "dog", "does", "fly"}}));
}

TEST(NegationProperty, OneVariantPerPlantedToken) {
  std::mt19937_64 rng(5);
  const std::vector<std::string> words = {"a", "dog", "is", "nothing", "knot",
                                          "no", "never", "cat", "note"};
  for (int i = 0; i < 1000; ++i) {
    Tokens e;
    std::size_t planted = 0;
    const std::size_t len = 1 + rng() % 12;
    for (std::size_t k = 0; k < len; ++k) {
      if (rng() % 4 == 0) {
        e.push_back(rng() % 2 ? "not" : "n't");
        ++planted;
      } else {
        e.push_back(words[rng() % words.size()]);
      }
    }
    const auto variants = negation_variants(e);
    ASSERT_EQ(variants.size(), planted);
    for (const auto& v : variants) EXPECT_EQ(v.size() + 1, e.size());
  }
}

TEST(SwapTest, RunningExampleMatchesGoldenList) {
  const auto swaps = swap_variants(normalize("Dog is a type of animal."),
                                   NliLabel::kEntailment, shipped());
  EXPECT_EQ(swaps, expected_dog_animal());
}

TEST(SwapTest, EatImpliesSleep) {
  const auto swaps = swap_variants(
      normalize("One cannot eat and sleep simultaneously."),
      NliLabel::kContradiction, shipped());
  EXPECT_NE(std::find(swaps.begin(), swaps.end(),
                      Tokens{"eat", "implies", "sleep"}),
            swaps.end());
}

TEST(SwapTest, OnlyPredictedLabelIsMatched) {
  // Matches an entailment template, but is labelled neutral.
  EXPECT_TRUE(swap_variants(normalize("Dog is a type of animal."),
                            NliLabel::kNeutral, shipped())
                  .empty());
  EXPECT_TRUE(
      swap_variants({"people", "walking"}, NliLabel::kEntailment, shipped())
          .empty());
}

TEST(SwapProperty, CandidatesMatchBackToTheirTemplate) {
  const auto result = swap_candidates(normalize("Dog is a type of animal."),
                                      NliLabel::kEntailment, shipped());
  ASSERT_FALSE(result.candidates.empty());
  for (const auto& c : result.candidates) {
    const Template* t = shipped().find(c.provenance.template_id);
    ASSERT_NE(t, nullptr);
    const auto m = match(c.tokens, {t});
    ASSERT_TRUE(m.has_value()) << join(c.tokens);
    EXPECT_EQ(m->binding, (Binding{{"dog"}, {"animal"}})) << join(c.tokens);
  }
}

TEST(BuildSetTest, RunningExample) {
  const auto outcome = build_inconsistency_set(
      Explanation("Dog is a type of animal."), NliLabel::kEntailment, shipped());
  ASSERT_FALSE(outcome.is_discarded());
  std::vector<Tokens> got;
  for (const auto& c : outcome.set().candidates) {
    EXPECT_EQ(c.provenance.kind, Provenance::Kind::kSwap);
    got.push_back(c.tokens);
  }
  EXPECT_EQ(got, expected_dog_animal());
  EXPECT_EQ(outcome.set().source_label, NliLabel::kEntailment);
}

TEST(BuildSetTest, NegationFirstThenSwaps) {
  const auto outcome =
      build_inconsistency_set(Explanation("A woman is not a person."),
                              NliLabel::kContradiction, shipped());
  ASSERT_FALSE(outcome.is_discarded());
  const auto& c = outcome.set().candidates;
  ASSERT_GT(c.size(), 1u);
  EXPECT_EQ(c[0].tokens, (Tokens{"a", "woman", "is", "a", "person"}));
  EXPECT_EQ(c[0].provenance.kind, Provenance::Kind::kNegation);
  EXPECT_EQ(c[1].provenance.kind, Provenance::Kind::kSwap);
}

TEST(BuildSetTest, NegationOnlyStillGenerates) {
  const auto outcome = build_inconsistency_set(
      Explanation("It does not rain"), NliLabel::kNeutral, shipped());
  ASSERT_FALSE(outcome.is_discarded());
  EXPECT_EQ(outcome.set().candidates.size(), 1u);
}

TEST(BuildSetTest, Discarded) {
  const auto outcome = build_inconsistency_set(
      Explanation("people walking"), NliLabel::kEntailment, shipped());
  EXPECT_TRUE(outcome.is_discarded());
  EXPECT_TRUE(outcome.set().candidates.empty());
}

TEST(BuildSetTest, LabelFallback) {
  const auto outcome = build_inconsistency_set(
      Explanation("Just because a man sleeps does not mean he dreams."),
      std::nullopt, shipped());
  ASSERT_FALSE(outcome.is_discarded());
  // No entailment template matches, so the neutral ones are tried next.
  EXPECT_EQ(outcome.set().source_label, NliLabel::kNeutral);
  EXPECT_EQ(outcome.set().candidates.front().tokens,
            normalize("just because a man sleeps does mean he dreams"));
  EXPECT_GT(outcome.set().candidates.size(), 1u);

  // A generic entailment template wins over the neutral reading.
  EXPECT_EQ(build_inconsistency_set(Explanation("Not every child is a toddler."),
                                    std::nullopt, shipped())
                .set()
                .source_label,
            NliLabel::kEntailment);
}

TEST(BuildSetTest, DropsDuplicatesAndSource) {
  // "x is not y" as contradiction: negation gives "x is y", which the
  // entailment swap "X is/are Y" would produce again.
  const auto outcome = build_inconsistency_set(
      Explanation("Cats are not dogs."), NliLabel::kContradiction, shipped());
  ASSERT_FALSE(outcome.is_discarded());
  std::set<Tokens> seen;
  for (const auto& c : outcome.set().candidates) {
    EXPECT_TRUE(seen.insert(c.tokens).second) << join(c.tokens);
    EXPECT_NE(c.tokens, normalize("Cats are not dogs."));
  }
}

TEST(BuildSetProperty, DeterministicAndSelfFree) {
  std::mt19937_64 rng(9);
  const std::vector<std::string> words = {"dog", "is", "not", "a", "animal",
                                          "and", "are", "different", "cannot",
                                          "n't", "implies", "so", "the"};
  for (int i = 0; i < 500; ++i) {
    Tokens e;
    const std::size_t len = 1 + rng() % 7;
    for (std::size_t k = 0; k < len; ++k) e.push_back(words[rng() % words.size()]);
    const Explanation ex(join(e));
    const auto label = kAllLabels[rng() % 3];
    const auto a = build_inconsistency_set(ex, label, shipped());
    const auto b = build_inconsistency_set(ex, label, shipped());
    EXPECT_EQ(a.set().candidates, b.set().candidates);
    EXPECT_FALSE(a.set().contains(ex.tokens));
    const bool has_neg = !negation_variants(ex.tokens).empty();
    const bool matched = match(ex.tokens, shipped().for_label(label)).has_value();
    EXPECT_EQ(a.is_discarded(), !has_neg && !matched) << join(e);
  }
}

}  // namespace
}  // namespace inconsist
