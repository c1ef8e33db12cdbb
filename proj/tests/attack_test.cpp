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

#include "inconsist/attack.hpp"

#include <gtest/gtest.h>

#include "inconsist/errors.hpp"
#include "inconsist/oracle.hpp"
#include "inconsist/report.hpp"
#include "inconsist/stats.hpp"
#include "test_util.hpp"

namespace inconsist {
namespace {

std::unique_ptr<LoopbackClient> oracle_client(const Oracle& oracle,
                                              std::size_t inflight = 8) {
  return std::make_unique<LoopbackClient>(
      [&oracle](std::string_view line) {
        return oracle.handle_line(line, OracleMode::kBoth);
      },
      inflight);
}

std::size_t verified(const std::vector<AttackResult>& results) {
  std::size_t n = 0;
  for (const auto& r : results) {
    for (const auto& t : r.traces) n += t.verified ? 1 : 0;
  }
  return n;
}

EsnliRecord record(std::string id, std::string context, std::string variable) {
  EsnliRecord r;
  r.instance.id = std::move(id);
  r.instance.context = std::move(context);
  r.instance.variable = std::move(variable);
  return r;
}

class AttackTest : public ::testing::Test {
 protected:
  const TemplateSet& templates_ = TemplateSet::shipped();
};

TEST_F(AttackTest, SingleSeededFactYieldsOneInconsistency) {
  OracleSpec spec;
  spec.facts.push_back({{"dog"}, {"animal"}, NliLabel::kEntailment});
  spec.seeds.insert({{"dog"}, {"animal"}});
  const Oracle oracle(spec);
  auto model = oracle_client(oracle);
  const auto result =
      attack_instance(record("1", "a dog is in the park", "an animal is in the park"),
                      *model, *model, templates_, AttackConfig{});
  ASSERT_TRUE(result.original.has_value());
  EXPECT_EQ(result.original->label, NliLabel::kEntailment);
  EXPECT_FALSE(result.outcome.discarded);
  ASSERT_EQ(result.traces.size(), result.outcome.candidates.size());
  std::size_t hits = 0;
  for (const auto& t : result.traces) {
    EXPECT_FALSE(t.errored());
    if (!t.verified) continue;
    ++hits;
    EXPECT_EQ(*t.reverse_variable, "the animal is not dog");
    EXPECT_EQ(t.reverse_response->label, NliLabel::kContradiction);
    EXPECT_EQ(t.reverse_response->explanation.raw, "dog and animal are different");
  }
  EXPECT_EQ(hits, 1u);
}

TEST_F(AttackTest, UnseededFactYieldsNothing) {
  OracleSpec spec;
  spec.facts.push_back({{"dog"}, {"animal"}, NliLabel::kEntailment});
  const Oracle oracle(spec);
  auto model = oracle_client(oracle);
  const auto result =
      attack_instance(record("1", "a dog is in the park", "an animal is in the park"),
                      *model, *model, templates_, AttackConfig{});
  EXPECT_FALSE(result.traces.empty());
  EXPECT_EQ(verified({result}), 0u);
}

TEST_F(AttackTest, DiscardedInstanceHasNoTraces) {
  const Oracle oracle(OracleSpec{});
  auto model = oracle_client(oracle);
  // The fallback explanation matches no template.
  const auto result = attack_instance(record("1", "people walk", "people walk"),
                                      *model, *model, templates_, AttackConfig{});
  EXPECT_TRUE(result.outcome.discarded);
  EXPECT_TRUE(result.traces.empty());
  EXPECT_FALSE(result.error.has_value());
}

TEST_F(AttackTest, PrecomputedExplanationSkipsForwardCall) {
  std::atomic<int> forwards{0};
  const Oracle oracle(OracleSpec{});
  LoopbackClient model([&](std::string_view line) {
    if (wire::parse_request(line).op == wire::Op::kForward) ++forwards;
    return oracle.handle_line(line, OracleMode::kBoth);
  });
  EsnliRecord r = record("1", "a dog runs", "an animal runs");
  r.instance.gold_label = NliLabel::kEntailment;
  r.explanation = Explanation("Dog is a type of animal.");
  AttackConfig config;
  config.precomputed_explanations = true;
  const auto result = attack_instance(r, model, model, templates_, config);
  EXPECT_EQ(result.original->explanation.raw, "Dog is a type of animal.");
  EXPECT_EQ(*result.outcome.source_label, NliLabel::kEntailment);
  EXPECT_FALSE(result.outcome.discarded);
  // One forward call per candidate, none for the original.
  EXPECT_EQ(static_cast<std::size_t>(forwards.load()), result.traces.size());
}

TEST_F(AttackTest, StandaloneSendsEmptyContext) {
  std::vector<wire::Request> seen;
  std::mutex mu;
  LoopbackClient model([&](std::string_view line) {
    const auto req = wire::parse_request(line);
    std::lock_guard lock(mu);
    seen.push_back(req);
    return wire::serialize(
        wire::Reply{req.id, NliLabel::kNeutral, "people walk", {}, {}});
  });
  AttackConfig config;
  config.standalone = true;
  attack_instance(record("1", "A man sleeps.", "A man rests."), model, model,
                  templates_, config);
  ASSERT_EQ(seen.size(), 1u);
  EXPECT_EQ(seen[0].context, "");
  EXPECT_EQ(seen[0].text, "A man sleeps. A man rests.");
}

TEST_F(AttackTest, TraceErrorsAreRecorded) {
  const Oracle oracle(OracleSpec{});
  LoopbackClient model([&](std::string_view line) {
    const auto req = wire::parse_request(line);
    if (req.op == wire::Op::kReverse) {
      return wire::serialize(wire::Reply{req.id, {}, {}, {}, "reverse failed"});
    }
    return wire::serialize(wire::Reply{req.id, NliLabel::kEntailment,
                                       "dog is a type of animal", {}, {}});
  });
  const auto result =
      attack_instance(record("1", "a dog", "an animal"), model, model,
                      templates_, AttackConfig{});
  ASSERT_FALSE(result.traces.empty());
  for (const auto& t : result.traces) {
    EXPECT_TRUE(t.errored());
    EXPECT_FALSE(t.verified);
  }
  EXPECT_EQ(compute_summary({result}).errored_traces, result.traces.size());
}

TEST_F(AttackTest, ForwardFailureIsAnInstanceError) {
  LoopbackClient model([](std::string_view) -> std::string {
    throw TransportError("down", false);
  });
  const auto result = attack_instance(record("1", "a", "b"), model, model,
                                      templates_, AttackConfig{});
  EXPECT_FALSE(result.original.has_value());
  ASSERT_TRUE(result.error.has_value());
  EXPECT_NE(result.error->find("down"), std::string::npos);
}

TEST_F(AttackTest, RetryableErrorsAreRetried) {
  int calls = 0;
  const Oracle oracle(OracleSpec{});
  LoopbackClient flaky([&](std::string_view line) {
    if (calls++ == 0) throw TransportError("hiccup", true);
    return oracle.handle_line(line, OracleMode::kBoth);
  });
  AttackConfig config;
  config.retries = 1;
  const auto ok = attack_instance(record("1", "a", "b"), flaky, flaky,
                                  templates_, config);
  EXPECT_FALSE(ok.error.has_value());

  calls = 0;
  config.retries = 0;
  const auto failed = attack_instance(record("1", "a", "b"), flaky, flaky,
                                      templates_, config);
  EXPECT_TRUE(failed.error.has_value());
}

TEST_F(AttackTest, SyntheticSuiteCountsSeededFacts) {
  for (std::size_t seeded : {0u, 1u, 3u, 10u}) {
    const auto suite = make_synthetic_suite(10, seeded, 17);
    const Oracle oracle(suite.spec);
    auto model = oracle_client(oracle);
    const auto run = attack_dataset(suite.dataset, *model, *model, templates_,
                                    AttackConfig{});
    EXPECT_TRUE(run.complete);
    EXPECT_EQ(run.results.size(), 10u);
    EXPECT_EQ(verified(run.results), seeded) << seeded;
    EXPECT_EQ(compute_summary(run.results).distinct_pairs, seeded);
  }
}

TEST_F(AttackTest, EmptyDataset) {
  const Oracle oracle(OracleSpec{});
  auto model = oracle_client(oracle);
  const auto run = attack_dataset({}, *model, *model, templates_, AttackConfig{});
  EXPECT_TRUE(run.results.empty());
  const RunSummary s = compute_summary(run.results);
  EXPECT_EQ(s.processed, 0u);
  EXPECT_EQ(s.distinct_pairs, 0u);
  EXPECT_EQ(s.success_rate, 0.0);
}

TEST_F(AttackTest, DuplicateIdsRejected) {
  const Oracle oracle(OracleSpec{});
  auto model = oracle_client(oracle);
  EXPECT_THROW(attack_dataset({record("a", "x", "y"), record("a", "x", "z")},
                              *model, *model, templates_, AttackConfig{}),
               ArgumentError);
}

TEST_F(AttackTest, ConcurrencyDoesNotChangeResults) {
  const auto suite = make_synthetic_suite(40, 7, 5);
  const Oracle oracle(suite.spec);
  std::string reports[2];
  const std::size_t workers[2] = {1, 8};
  for (int i = 0; i < 2; ++i) {
    auto model = oracle_client(oracle, workers[i]);
    AttackConfig config;
    config.workers = workers[i];
    const auto run =
        attack_dataset(suite.dataset, *model, *model, templates_, config);
    reports[i] = serialize_report(
        Report{ReportHeader{}, run.results, compute_summary(run.results)});
  }
  EXPECT_EQ(reports[0], reports[1]);
}

TEST_F(AttackTest, ResumeMatchesUninterruptedRun) {
  const auto suite = make_synthetic_suite(12, 4, 9);
  const Oracle oracle(suite.spec);
  auto model = oracle_client(oracle);
  const auto full =
      attack_dataset(suite.dataset, *model, *model, templates_, AttackConfig{});

  inconsist_test::TempDir dir;
  AttackConfig config;
  config.checkpoint = dir.path() / "run.ckpt";
  config.stop_after = 5;
  const auto first =
      attack_dataset(suite.dataset, *model, *model, templates_, config);
  EXPECT_FALSE(first.complete);
  EXPECT_EQ(first.results.size(), 5u);

  // Simulate a crash in the middle of writing the next result.
  {
    std::ofstream tail(dir.path() / "run.ckpt.results", std::ios::app);
    tail << R"({"instance":{"id":"syn-)";
  }
  config.stop_after = 0;
  const auto resumed =
      attack_dataset(suite.dataset, *model, *model, templates_, config);
  EXPECT_TRUE(resumed.complete);
  EXPECT_EQ(serialize_report(Report{ReportHeader{}, resumed.results, std::nullopt}),
            serialize_report(Report{ReportHeader{}, full.results, std::nullopt}));
}

TEST_F(AttackTest, CorruptCheckpointIsReported) {
  const auto suite = make_synthetic_suite(3, 1, 2);
  const Oracle oracle(suite.spec);
  auto model = oracle_client(oracle);
  inconsist_test::TempDir dir;
  AttackConfig config;
  config.checkpoint = dir.file("run.ckpt", suite.dataset[0].instance.id + "\n");
  dir.file("run.ckpt.results", "{broken\n");
  EXPECT_THROW(attack_dataset(suite.dataset, *model, *model, templates_, config),
               ReportError);

  dir.file("run.ckpt.results", "");
  dir.file("run.ckpt", "nobody\n");
  EXPECT_THROW(attack_dataset(suite.dataset, *model, *model, templates_, config),
               ReportError);
}

}  // namespace
}  // namespace inconsist
