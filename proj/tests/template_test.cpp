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

#include "inconsist/template.hpp"

#include <random>
#include <set>

#include <gtest/gtest.h>

#include "inconsist/errors.hpp"
#include "test_util.hpp"

namespace inconsist {
namespace {

Element lit(const char* t) { return Element{Literal{t}}; }

TEST(ParseTemplateTest, SimpleEntailment) {
  const Template t = Template::parse("entailment\tX is a type of Y");
  EXPECT_EQ(t.label(), NliLabel::kEntailment);
  const std::vector<Element> expected = {
      Element{PlaceholderX{}}, lit("is"), lit("a"), lit("type"), lit("of"),
      Element{PlaceholderY{}}};
  EXPECT_EQ(t.elements(), expected);
}

TEST(ParseTemplateTest, GroupsAndWildcard) {
  const Template t = Template::parse(
      "contradiction\t[*] (cannot|can not|ca n't) [be] X and Y at the same "
      "time");
  const std::vector<Element> expected = {
      Element{Optional{{Element{Wildcard{}}}}},
      Element{Alternation{{{"cannot"}, {"can", "not"}, {"ca", "n't"}}}},
      Element{Optional{{lit("be")}}},
      Element{PlaceholderX{}},
      lit("and"),
      Element{PlaceholderY{}},
      lit("at"),
      lit("the"),
      lit("same"),
      lit("time")};
  EXPECT_EQ(t.elements(), expected);
  EXPECT_EQ(t.label(), NliLabel::kContradiction);
}

struct BadPattern {
  const char* line;
  const char* message;
};

class ParseErrorTest : public ::testing::TestWithParam<BadPattern> {};

TEST_P(ParseErrorTest, Rejects) {
  try {
    Template::parse(GetParam().line, 7);
    FAIL() << "expected ParseError for " << GetParam().line;
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 7u);
    EXPECT_GT(e.column(), 0u);
    EXPECT_NE(std::string(e.what()).find(GetParam().message), std::string::npos)
        << e.what();
  }
}

INSTANTIATE_TEST_SUITE_P(
    Grammar, ParseErrorTest,
    ::testing::Values(BadPattern{"neutral\tX Y X", "more than one X"},
                      BadPattern{"neutral\tsome Y", "no X"},
                      BadPattern{"neutral\tX and", "no Y"},
                      BadPattern{"neutral\tY then X", "before X"},
                      BadPattern{"neutral\tX (a||b) Y", "empty alternative"},
                      BadPattern{"neutral\tX (a) Y", "at least two"},
                      BadPattern{"neutral\tX Y [a", "unbalanced '['"},
                      BadPattern{"neutral\tX a] Y", "unmatched ']'"},
                      BadPattern{"neutral\tX (a|b Y", "unbalanced '('"},
                      BadPattern{"neutral\tX [] Y", "empty optional"},
                      BadPattern{"neutral\t[X] Y", "inside an optional"},
                      BadPattern{"maybe\tX Y", "unknown label"},
                      BadPattern{"neutral X Y", "expected"}));

TEST(ParseTemplateTest, ColumnPointsAtProblem) {
  try {
    Template::parse("neutral\tX Y Y");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.column(), 13u);  // second Y
  }
}

TEST(ExpandTest, Counts) {
  EXPECT_EQ(expand(Template::parse("entailment\tX (is|are) a type of Y")).size(),
            2u);
  const auto cond = expand(Template::parse("entailment\t[if] X , then Y"));
  ASSERT_EQ(cond.size(), 2u);
  EXPECT_EQ(render(cond[0]), "if X , then Y");
  EXPECT_EQ(render(cond[1]), "X , then Y");
  const Template plain = Template::parse("entailment\tX implies Y");
  ASSERT_EQ(plain.variants().size(), 1u);
  EXPECT_EQ(render(plain.variants()[0]), "X implies Y");
}

TEST(ExpandTest, SourceOrder) {
  const auto v = expand(Template::parse("neutral\tX (a|b) [c] Y"));
  std::vector<std::string> rendered;
  for (const auto& x : v) rendered.push_back(render(x));
  EXPECT_EQ(rendered, (std::vector<std::string>{"X a c Y", "X a Y", "X b c Y",
                                                "X b Y"}));
}

// Recomputes the variant count from the element tree alone.
std::size_t expected_count(const std::vector<Element>& elements) {
  std::size_t n = 1;
  for (const auto& e : elements) {
    if (auto* a = std::get_if<Alternation>(&e.node)) n *= a->alternatives.size();
    if (auto* o = std::get_if<Optional>(&e.node)) n *= 1 + expected_count(o->body);
  }
  return n;
}

TEST(ExpandTest, CountIsProductOverGroups) {
  for (const auto& t : TemplateSet::shipped().all()) {
    EXPECT_EQ(t.variants().size(), expected_count(t.elements())) << t.source();
    for (const auto& v : t.variants()) {
      EXPECT_EQ(std::count_if(v.begin(), v.end(),
                              [](const Piece& p) { return p.kind == Piece::Kind::kX; }),
                1);
    }
  }
}

TEST(MatchTest, RunningExample) {
  const auto& set = TemplateSet::shipped();
  const auto m = match(normalize("Dog is a type of animal."),
                       set.for_label(NliLabel::kEntailment));
  ASSERT_TRUE(m.has_value());
  EXPECT_EQ(m->templ->id(), "entailment:1");
  EXPECT_EQ(m->templ->source(), "entailment\tX (is|are) a type of Y");
  EXPECT_EQ(m->binding.x, Tokens{"dog"});
  EXPECT_EQ(m->binding.y, Tokens{"animal"});
}

TEST(MatchTest, EatAndSleep) {
  const auto& set = TemplateSet::shipped();
  const auto m = match(normalize("One cannot eat and sleep simultaneously."),
                       set.for_label(NliLabel::kContradiction));
  ASSERT_TRUE(m.has_value());
  EXPECT_EQ(m->binding.x, Tokens{"eat"});
  EXPECT_EQ(m->binding.y, Tokens{"sleep"});
}

TEST(MatchTest, NoMatch) {
  EXPECT_FALSE(match({"people", "walking", "together"},
                     TemplateSet::shipped().all_ptrs())
                   .has_value());
}

TEST(MatchTest, ShortestSpans) {
  const Template t = Template::parse("entailment\tX is Y");
  const auto b = match_variant({"a", "is", "b", "is", "c"}, t.variants()[0]);
  ASSERT_TRUE(b.has_value());
  EXPECT_EQ(b->x, Tokens{"a"});
  EXPECT_EQ(b->y, (Tokens{"b", "is", "c"}));
}

TEST(MatchTest, AnchoredBothEnds) {
  const Template t = Template::parse("entailment\tX implies Y");
  EXPECT_FALSE(match_variant({"implies", "b"}, t.variants()[0]).has_value());
  EXPECT_FALSE(match_variant({"a", "implies"}, t.variants()[0]).has_value());
}

TEST(MatchTest, GenericTemplateTriedLast) {
  const auto m = match(normalize("A dog is an animal."),
                       TemplateSet::shipped().for_label(NliLabel::kEntailment));
  ASSERT_TRUE(m.has_value());
  EXPECT_EQ(m->templ->id(), "entailment:13");
  EXPECT_EQ(m->binding.x, (Tokens{"a", "dog"}));
  EXPECT_EQ(m->binding.y, (Tokens{"an", "animal"}));
}

TEST(InstantiateTest, Examples) {
  const Binding eat{{"eat"}, {"sleep"}};
  EXPECT_EQ(instantiate(Template::parse("entailment\tX implies Y"), 0, eat),
            (Tokens{"eat", "implies", "sleep"}));
  EXPECT_EQ(instantiate(Template::parse("entailment\tX is a type of Y"), 0,
                        Binding{{"dog"}, {"animal"}}),
            normalize("Dog is a type of animal."));
}

TEST(InstantiateTest, WildcardVariantIsContractViolation) {
  const Template t = Template::parse("contradiction\t[*] (is|are) either X or Y");
  ASSERT_EQ(t.variants().size(), 4u);
  EXPECT_THROW(instantiate(t, 0, Binding{{"a"}, {"b"}}), ContractError);
  EXPECT_EQ(instantiate(t, 2, Binding{{"a"}, {"b"}}),
            (Tokens{"is", "either", "a", "or", "b"}));
}

TEST(InstantiateTest, EmptyBindingRejected) {
  const Template t = Template::parse("entailment\tX implies Y");
  EXPECT_THROW(instantiate(t, 0, Binding{{}, {"b"}}), ContractError);
}

TEST(TemplateFileTest, ShippedCounts) {
  const auto& set = TemplateSet::shipped();
  EXPECT_EQ(set.count(NliLabel::kEntailment), 13u);
  EXPECT_EQ(set.count(NliLabel::kNeutral), 6u);
  EXPECT_EQ(set.count(NliLabel::kContradiction), 9u);
}

TEST(TemplateFileTest, LoadFromDisk) {
  const auto set = TemplateSet::load_file(INCONSIST_TEMPLATE_FILE);
  ASSERT_EQ(set.all().size(), TemplateSet::shipped().all().size());
  for (std::size_t i = 0; i < set.all().size(); ++i) {
    EXPECT_EQ(set.all()[i].source(), TemplateSet::shipped().all()[i].source());
    EXPECT_EQ(set.all()[i].id(), TemplateSet::shipped().all()[i].id());
  }
}

TEST(TemplateFileTest, EmptyAndComments) {
  EXPECT_TRUE(TemplateSet::parse("").all().empty());
  EXPECT_TRUE(TemplateSet::parse("# only a comment\n\n").all().empty());
}

TEST(TemplateFileTest, BadLineNamed) {
  inconsist_test::TempDir dir;
  const auto path =
      dir.file("t.tsv", "# header\nentailment\tX implies Y\nneutral\tX X Y\n");
  try {
    TemplateSet::load_file(path);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(TemplateFileTest, MissingFile) {
  EXPECT_THROW(TemplateSet::load_file("/nonexistent.tsv"), IoError);
}

// Instantiating any wildcard-free variant with a binding free of that
// variant's literals matches back and re-instantiates to the same tokens.
TEST(RoundTripProperty, ShippedTemplates) {
  std::mt19937_64 rng(2024);
  const std::vector<std::string> pool = {
      "dog", "animal", "man", "woman", "person", "the", "is", "not", "a",
      "and", "cat", "red", "same", "be", "if", "young", "are", "either"};
  const auto& set = TemplateSet::shipped();
  int cases = 0;
  for (int i = 0; i < 3000; ++i) {
    const Template& t = set.all()[rng() % set.all().size()];
    const std::size_t vi = rng() % t.variants().size();
    const Variant& v = t.variants()[vi];
    if (has_wildcard(v)) continue;
    std::set<std::string> literals;
    for (const auto& p : v) {
      if (p.kind == Piece::Kind::kLiteral) literals.insert(p.token);
    }
    auto phrase = [&] {
      Tokens out;
      const std::size_t len = 1 + rng() % 3;
      while (out.size() < len) {
        const auto& w = pool[rng() % pool.size()];
        if (literals.count(w) == 0) out.push_back(w);
      }
      return out;
    };
    const Binding b{phrase(), phrase()};
    const Tokens tokens = instantiate(v, b);
    const auto m = match(tokens, {&t});
    ASSERT_TRUE(m.has_value()) << join(tokens) << " vs " << t.source();
    EXPECT_EQ(instantiate(*m->templ, m->variant, m->binding), tokens);
    EXPECT_EQ(match(tokens, {&t})->binding, m->binding);
    ++cases;
  }
  EXPECT_GT(cases, 1000);
}

}  // namespace
}  // namespace inconsist
