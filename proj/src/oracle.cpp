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

#include "inconsist/oracle.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <mutex>
#include <random>
#include <thread>

#include <httplib.h>

#include "inconsist/errors.hpp"
#include "inconsist/template.hpp"

namespace inconsist {
namespace {

Tokens concat(std::initializer_list<Tokens> parts) {
  Tokens out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

std::string article_for(const Tokens& words) {
  const char c = words.empty() || words.front().empty() ? 'x'
                                                        : words.front()[0];
  return std::string_view("aeiou").find(c) != std::string_view::npos ? "an"
                                                                      : "a";
}

OracleFact fact_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("x") || !j.contains("y")) {
    throw FormatError("oracle fact needs \"x\" and \"y\": " + j.dump());
  }
  OracleFact f;
  f.x = normalize(j.at("x").get<std::string>());
  f.y = normalize(j.at("y").get<std::string>());
  if (j.contains("label")) {
    const auto name = j.at("label").get<std::string>();
    auto label = parse_label(name);
    if (!label) throw FormatError("oracle fact has unknown label " + name);
    f.label = *label;
  }
  return f;
}

}  // namespace

OracleSpec OracleSpec::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw FormatError("oracle spec must be a JSON object");
  OracleSpec spec;
  try {
    for (const auto& f : j.value("facts", nlohmann::json::array())) {
      spec.facts.push_back(fact_from_json(f));
    }
    for (const auto& s : j.value("seeds", nlohmann::json::array())) {
      const OracleFact key = fact_from_json(s);
      if (!spec.seeds.insert(key.key()).second) {
        throw ArgumentError("duplicate seed " + s.dump());
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("oracle spec: ") + e.what());
  }
  return spec;
}

OracleSpec OracleSpec::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open oracle spec " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return from_json(j);
}

nlohmann::ordered_json OracleSpec::to_json() const {
  nlohmann::ordered_json j;
  j["facts"] = nlohmann::ordered_json::array();
  for (const auto& f : facts) {
    j["facts"].push_back({{"x", join(f.x)},
                          {"y", join(f.y)},
                          {"label", std::string(label_name(f.label))}});
  }
  j["seeds"] = nlohmann::ordered_json::array();
  for (const auto& f : facts) {
    if (seeds.count(f.key()) > 0) {
      j["seeds"].push_back({{"x", join(f.x)}, {"y", join(f.y)}});
    }
  }
  return j;
}

void OracleSpec::validate() const {
  std::set<std::pair<Tokens, Tokens>> keys;
  for (const auto& f : facts) {
    if (f.x.empty() || f.y.empty()) {
      throw ArgumentError("oracle fact with an empty element");
    }
    if (!keys.insert(f.key()).second) {
      throw ArgumentError("duplicate oracle fact key (" + join(f.x) + ", " +
                          join(f.y) + ")");
    }
  }
  for (const auto& s : seeds) {
    if (keys.count(s) == 0) {
      throw ArgumentError("seed (" + join(s.first) + ", " + join(s.second) +
                          ") names no fact");
    }
  }
}

Oracle::Oracle(OracleSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

bool Oracle::seeded(const OracleFact& fact) const {
  return spec_.seeds.count(fact.key()) > 0;
}

NliLabel Oracle::swapped_label(NliLabel label) {
  return label == NliLabel::kContradiction ? NliLabel::kEntailment
                                           : NliLabel::kContradiction;
}

Tokens Oracle::realize(NliLabel label, const OracleFact& fact) {
  static const Template entailment =
      Template::parse("entailment\tX is a type of Y");
  static const Template neutral = Template::parse("neutral\tnot all X are Y");
  static const Template contradiction =
      Template::parse("contradiction\tX and Y are different");
  const Binding b{fact.x, fact.y};
  switch (label) {
    case NliLabel::kEntailment:
      return instantiate(entailment, 0, b);
    case NliLabel::kNeutral:
      return instantiate(neutral, 0, b);
    case NliLabel::kContradiction:
      return instantiate(contradiction, 0, b);
  }
  return {};
}

Tokens Oracle::original_hypothesis(const OracleFact& fact,
                                   const Tokens& context) {
  auto at = std::search(context.begin(), context.end(), fact.x.begin(),
                        fact.x.end());
  if (context.empty() || at == context.end()) {
    return concat({{article_for(fact.x)}, fact.x, {"is", article_for(fact.y)},
                   fact.y});
  }
  Tokens out(context.begin(), at);
  if (!out.empty() && (out.back() == "a" || out.back() == "an")) {
    out.back() = article_for(fact.y);
  }
  out.insert(out.end(), fact.y.begin(), fact.y.end());
  out.insert(out.end(), at + static_cast<std::ptrdiff_t>(fact.x.size()),
             context.end());
  return out;
}

Tokens Oracle::swapped_hypothesis(const OracleFact& fact) {
  return concat({{"the"}, fact.y, {"is", "not"}, fact.x});
}

ForwardResponse Oracle::forward(std::string_view context,
                                std::string_view variable) const {
  const Tokens var = normalize(variable);
  const Tokens all = concat({normalize(context), var});
  for (const auto& fact : spec_.facts) {
    if (!contains_span(all, fact.x) || !contains_span(var, fact.y)) continue;
    NliLabel label = fact.label;
    if (seeded(fact) && var == swapped_hypothesis(fact)) {
      label = swapped_label(fact.label);
    }
    return ForwardResponse{label, Explanation(join(realize(label, fact)))};
  }
  return ForwardResponse{NliLabel::kNeutral,
                         Explanation(std::string(kFallbackExplanation))};
}

ReverseResponse Oracle::reverse(std::string_view context,
                                std::string_view explanation) const {
  const Tokens e = normalize(explanation);
  for (const auto& fact : spec_.facts) {
    if (e == realize(fact.label, fact)) {
      return ReverseResponse{
          join(original_hypothesis(fact, normalize(context)))};
    }
    if (seeded(fact) && e == realize(swapped_label(fact.label), fact)) {
      return ReverseResponse{join(swapped_hypothesis(fact))};
    }
  }
  return ReverseResponse{std::string(kFallbackHypothesis)};
}

std::string Oracle::handle_line(std::string_view line, OracleMode mode,
                                std::size_t line_no) const {
  wire::Reply reply;
  try {
    const wire::Request request = wire::parse_request(line);
    reply.id = request.id;
    const bool allowed =
        mode == OracleMode::kBoth ||
        (mode == OracleMode::kForward) == (request.op == wire::Op::kForward);
    if (!allowed) {
      reply.error = "operation not served by this endpoint";
    } else if (request.op == wire::Op::kForward) {
      ForwardResponse r = forward(request.context, request.text);
      reply.label = r.label;
      reply.explanation = r.explanation.raw;
    } else {
      reply.variable = reverse(request.context, request.text).variable;
    }
  } catch (const std::exception& e) {
    auto id = wire::peek_id(line);
    reply.id = id.value_or("");
    reply.error = id || line_no == 0
                      ? std::string(e.what())
                      : "line " + std::to_string(line_no) + ": " + e.what();
  }
  return wire::serialize(reply);
}

void serve_stdio(const Oracle& oracle, OracleMode mode, std::istream& in,
                 std::ostream& out, bool reorder) {
  std::string line;
  std::size_t line_no = 0;
  if (!reorder) {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      out << oracle.handle_line(line, mode, line_no) << '\n' << std::flush;
    }
    return;
  }
  std::mutex out_mu;
  std::vector<std::thread> workers;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    workers.emplace_back([&oracle, &out, &out_mu, mode, line, line_no] {
      const auto delay = std::hash<std::string>{}(line) % 7;
      std::this_thread::sleep_for(std::chrono::milliseconds(delay));
      std::string reply = oracle.handle_line(line, mode, line_no);
      std::lock_guard lock(out_mu);
      out << reply << '\n' << std::flush;
    });
  }
  for (auto& w : workers) w.join();
}

void serve_http(const Oracle& oracle, OracleMode mode, const std::string& host,
                int port) {
  httplib::Server server;
  server.Post(".*", [&](const httplib::Request& req, httplib::Response& res) {
    res.set_content(oracle.handle_line(req.body, mode) + "\n",
                    "application/json");
  });
  if (!server.bind_to_port(host, port)) {
    throw IoError("cannot bind " + host + ":" + std::to_string(port));
  }
  server.listen_after_bind();
}

SyntheticSuite make_synthetic_suite(std::size_t facts, std::size_t seeded,
                                    std::uint64_t seed) {
  if (seeded > facts) throw ArgumentError("more seeds than facts");
  std::mt19937_64 rng(seed);
  auto pick = [&](std::string_view from) {
    return from[static_cast<std::size_t>(rng() % from.size())];
  };

  // Reserved words: template literals and the sentence frames used below.
  std::set<std::string> used = {"a", "an", "in", "the", "park", "is", "not",
                                "no", "supporting", "fact", "something",
                                "unrelated", "happens"};
  for (const auto& t : TemplateSet::shipped().all()) {
    for (const auto& v : t.variants()) {
      for (const auto& p : v) {
        if (p.kind == Piece::Kind::kLiteral) used.insert(p.token);
      }
    }
  }
  auto fresh_word = [&] {
    while (true) {
      std::string w;
      const std::size_t syllables = 2 + rng() % 2;
      for (std::size_t i = 0; i < syllables; ++i) {
        w.push_back(pick("bdfgklmnprstvz"));
        w.push_back(pick("aeiou"));
      }
      if (used.insert(w).second) return w;
    }
  };
  auto fresh_phrase = [&] {
    Tokens words{fresh_word()};
    if (rng() % 4 == 0) words.push_back(fresh_word());
    return words;
  };

  SyntheticSuite suite;
  for (std::size_t i = 0; i < facts; ++i) {
    OracleFact f;
    f.x = fresh_phrase();
    f.y = fresh_phrase();
    f.label = kAllLabels[rng() % 3];
    if (i < seeded) suite.spec.seeds.insert(f.key());

    const Tokens context = concat({{article_for(f.x)}, f.x, {"is", "in", "the", "park"}});
    EsnliRecord record;
    char id[32];
    std::snprintf(id, sizeof id, "syn-%05zu", i);
    record.instance.id = id;
    record.instance.context = join(context);
    record.instance.variable = join(Oracle::original_hypothesis(f, context));
    record.instance.gold_label = f.label;
    record.explanation = Explanation(join(Oracle::realize(f.label, f)));
    suite.dataset.push_back(std::move(record));
    suite.spec.facts.push_back(std::move(f));
  }
  return suite;
}

}  // namespace inconsist
