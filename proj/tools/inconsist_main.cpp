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

// Command-line front end: attack, gen, match, stats, sample, oracle, synth,
// filter.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "inconsist/attack.hpp"
#include "inconsist/errors.hpp"
#include "inconsist/esnli.hpp"
#include "inconsist/inconsistency.hpp"
#include "inconsist/oracle.hpp"
#include "inconsist/protocol.hpp"
#include "inconsist/report.hpp"
#include "inconsist/stats.hpp"
#include "inconsist/template.hpp"

namespace {

using namespace inconsist;

TemplateSet load_templates(const std::string& path) {
  return path.empty() ? TemplateSet::shipped() : TemplateSet::load_file(path);
}

std::optional<NliLabel> label_option(const std::string& name) {
  if (name.empty() || name == "auto") return std::nullopt;
  auto label = parse_label(name);
  if (!label) throw ArgumentError("unknown label '" + name + "'");
  return label;
}

Split split_option(const std::string& name) {
  auto split = parse_split(name);
  if (!split) throw ArgumentError("unknown split '" + name + "'");
  return *split;
}

std::string describe(const Provenance& p) {
  if (p.kind == Provenance::Kind::kNegation) {
    return "negation@" + std::to_string(p.position);
  }
  return "swap " + p.template_id + "#" + std::to_string(p.variant);
}

struct AttackOptions {
  std::string data;
  std::string split = "test";
  std::string columns;
  std::string model;
  std::string reverse;
  std::string templates;
  std::string out;
  std::string resume;
  bool standalone = false;
  bool precomputed = false;
  std::uint64_t seed = 0;
  std::size_t max_inflight = 1;
  int timeout_ms = 30000;
  int retries = 1;
  double realism = 1.0;
};

int run_attack(const AttackOptions& o) {
  const ColumnMapping columns =
      o.columns.empty() ? ColumnMapping{} : ColumnMapping::from_file(o.columns);
  const LoadResult data = load_esnli(o.data, split_option(o.split), columns);
  std::cerr << "loaded " << data.records.size() << " instances ("
            << data.skipped << " skipped)\n";
  const TemplateSet templates = load_templates(o.templates);

  auto endpoint = [&](const std::string& address) {
    EndpointConfig c = EndpointConfig::parse(address);
    c.timeout = std::chrono::milliseconds(o.timeout_ms);
    c.max_in_flight = o.max_inflight;
    return connect(c);
  };
  auto model = endpoint(o.model);
  auto reverse_model = endpoint(o.reverse);

  AttackConfig config;
  config.standalone = o.standalone;
  config.precomputed_explanations = o.precomputed;
  config.workers = o.max_inflight;
  config.retries = o.retries;
  config.seed = o.seed;
  if (!o.resume.empty()) config.checkpoint = o.resume;

  const ReportHeader header{kReportVersion, o.standalone, o.seed};
  const std::string partial = o.out + ".partial";
  std::optional<ReportWriter> stream;
  if (!config.checkpoint) stream.emplace(partial, header);
  std::size_t done = 0;
  const AttackRun run = attack_dataset(
      data.records, *model, *reverse_model, templates, config,
      [&](const AttackResult& r) {
        if (stream) stream->append(r);
        if (++done % 100 == 0) std::cerr << "attacked " << done << "\n";
      });

  Report report;
  report.header = header;
  report.results = run.results;
  report.summary = compute_summary(run.results, o.realism);
  write_report(o.out, report);
  stream.reset();
  std::filesystem::remove(partial);
  print_summary(*report.summary, std::cout);
  return 0;
}

int run_oracle(const std::string& spec_path, const std::string& mode_name,
               const std::string& http, bool reorder) {
  OracleMode mode = OracleMode::kBoth;
  if (mode_name == "forward") mode = OracleMode::kForward;
  else if (mode_name == "reverse") mode = OracleMode::kReverse;
  else if (mode_name != "both") throw ArgumentError("unknown mode " + mode_name);
  const Oracle oracle(OracleSpec::load(spec_path));
  if (http.empty()) {
    serve_stdio(oracle, mode, std::cin, std::cout, reorder);
    return 0;
  }
  const auto colon = http.rfind(':');
  const std::string host = colon == std::string::npos ? "127.0.0.1"
                                                      : http.substr(0, colon);
  const int port = std::stoi(colon == std::string::npos ? http
                                                        : http.substr(colon + 1));
  serve_http(oracle, mode, host, port);
  return 0;
}

std::vector<Explanation> load_explanations(const std::string& path,
                                           const std::string& split,
                                           const std::string& columns_path) {
  std::vector<Explanation> out;
  const bool is_csv = std::filesystem::is_directory(path) ||
                      std::filesystem::path(path).extension() == ".csv";
  if (is_csv) {
    const ColumnMapping columns = columns_path.empty()
                                      ? ColumnMapping{}
                                      : ColumnMapping::from_file(columns_path);
    for (auto& r : load_esnli(path, split_option(split), columns).records) {
      out.push_back(std::move(r.explanation));
    }
    return out;
  }
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.emplace_back(line);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Search for mutually inconsistent explanations produced by "
               "explain-and-predict models"};
  app.require_subcommand(1);

  std::string templates_path;
  auto add_templates = [&](CLI::App* cmd) {
    cmd->add_option("--templates", templates_path,
                    "Template file (default: built-in list)");
  };

  AttackOptions attack;
  auto* attack_cmd = app.add_subcommand("attack", "Attack a dataset");
  attack_cmd->add_option("--data", attack.data, "e-SNLI CSV file or directory")
      ->required();
  attack_cmd->add_option("--split", attack.split, "train, dev or test");
  attack_cmd->add_option("--columns", attack.columns, "Column mapping JSON");
  attack_cmd->add_option("--model", attack.model,
                         "Forward model: command line or http:// URL")
      ->required();
  attack_cmd->add_option("--reverse", attack.reverse,
                         "Reverse explainer: command line or http:// URL")
      ->required();
  attack_cmd->add_option("--templates", attack.templates, "Template file");
  attack_cmd->add_option("--out", attack.out, "Report path")->required();
  attack_cmd->add_flag("--standalone", attack.standalone,
                       "Empty context, whole input varied");
  attack_cmd->add_flag("--precomputed", attack.precomputed,
                       "Use dataset explanations instead of querying first");
  attack_cmd->add_option("--seed", attack.seed);
  attack_cmd->add_option("--max-inflight", attack.max_inflight)
      ->check(CLI::PositiveNumber);
  attack_cmd->add_option("--resume", attack.resume, "Checkpoint path");
  attack_cmd->add_option("--timeout-ms", attack.timeout_ms)
      ->check(CLI::PositiveNumber);
  attack_cmd->add_option("--retries", attack.retries);
  attack_cmd->add_option("--realism", attack.realism)->check(CLI::Range(0.0, 1.0));

  std::string text;
  std::string label_name_opt;
  auto* gen_cmd = app.add_subcommand("gen", "List candidates inconsistent "
                                            "with an explanation");
  gen_cmd->add_option("explanation", text)->required();
  gen_cmd->add_option("--label", label_name_opt,
                      "entailment, neutral, contradiction or auto");
  add_templates(gen_cmd);

  auto* match_cmd = app.add_subcommand("match", "Match an explanation");
  match_cmd->add_option("explanation", text)->required();
  match_cmd->add_option("--label", label_name_opt, "Restrict to one label");
  add_templates(match_cmd);

  std::string report_path;
  double realism = 1.0;
  bool sample_std = false;
  auto* stats_cmd = app.add_subcommand("stats", "Summarize a report");
  stats_cmd->add_option("report", report_path)->required();
  stats_cmd->add_option("--realism", realism)->check(CLI::Range(0.0, 1.0));
  stats_cmd->add_flag("--sample-std", sample_std);

  std::size_t sample_n = 0;
  std::uint64_t seed = 0;
  std::string out_path;
  auto* sample_cmd = app.add_subcommand("sample", "Export pairs to annotate");
  sample_cmd->add_option("report", report_path)->required();
  sample_cmd->add_option("-n", sample_n)->required();
  sample_cmd->add_option("--seed", seed);
  sample_cmd->add_option("--out", out_path, "CSV path (default: stdout)");

  std::string spec_path;
  std::string mode = "both";
  std::string http;
  bool reorder = false;
  auto* oracle_cmd = app.add_subcommand("oracle", "Serve the oracle model");
  oracle_cmd->add_option("--spec", spec_path)->required();
  oracle_cmd->add_option("--mode", mode, "forward, reverse or both");
  oracle_cmd->add_option("--http", http, "HOST:PORT (default: stdio)");
  oracle_cmd->add_flag("--reorder", reorder, "Reply out of order");

  std::size_t facts = 10;
  std::size_t seeded = 0;
  std::string data_path;
  auto* synth_cmd = app.add_subcommand(
      "synth", "Write an oracle spec and a matching dataset");
  synth_cmd->add_option("--facts", facts);
  synth_cmd->add_option("--seeded", seeded);
  synth_cmd->add_option("--seed", seed);
  synth_cmd->add_option("--spec", spec_path)->required();
  synth_cmd->add_option("--data", data_path)->required();

  std::string keyword;
  std::string split = "test";
  std::string columns;
  bool count_only = false;
  auto* filter_cmd =
      app.add_subcommand("filter", "Explanations containing a keyword");
  filter_cmd->add_option("explanations", data_path,
                         "e-SNLI CSV/directory or one explanation per line")
      ->required();
  filter_cmd->add_option("keyword", keyword)->required();
  filter_cmd->add_option("--split", split);
  filter_cmd->add_option("--columns", columns);
  filter_cmd->add_flag("--count", count_only, "Print only the count");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*attack_cmd) return run_attack(attack);

    if (*gen_cmd) {
      const TemplateSet templates = load_templates(templates_path);
      const auto outcome = build_inconsistency_set(
          Explanation(text), label_option(label_name_opt), templates);
      if (outcome.is_discarded()) {
        std::cout << "discarded: no negation and no template match\n";
        return 1;
      }
      for (const auto& c : outcome.set().candidates) {
        std::cout << join(c.tokens) << '\t' << describe(c.provenance) << '\n';
      }
      return 0;
    }

    if (*match_cmd) {
      const TemplateSet templates = load_templates(templates_path);
      const auto label = label_option(label_name_opt);
      const auto m = match(normalize(text), label ? templates.for_label(*label)
                                                  : templates.all_ptrs());
      if (!m) {
        std::cout << "no match\n";
        return 1;
      }
      std::cout << "template " << m->templ->id() << "\t"
                << render(m->templ->variants()[m->variant]) << "\n"
                << "X\t" << join(m->binding.x) << "\n"
                << "Y\t" << join(m->binding.y) << "\n";
      return 0;
    }

    if (*stats_cmd) {
      const Report report = read_report(report_path);
      print_summary(compute_summary(report.results, realism, sample_std),
                    std::cout);
      return 0;
    }

    if (*sample_cmd) {
      const Report report = read_report(report_path);
      const auto dedup = dedup_pairs(collect_pairs(report.results));
      if (out_path.empty()) {
        sample_for_annotation(dedup.distinct, sample_n, seed, std::cout);
      } else {
        std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + out_path);
        sample_for_annotation(dedup.distinct, sample_n, seed, out);
      }
      return 0;
    }

    if (*oracle_cmd) return run_oracle(spec_path, mode, http, reorder);

    if (*synth_cmd) {
      const SyntheticSuite suite = make_synthetic_suite(facts, seeded, seed);
      std::ofstream spec(spec_path, std::ios::binary | std::ios::trunc);
      if (!spec) throw IoError("cannot write " + spec_path);
      spec << suite.spec.to_json().dump(2) << '\n';
      save_esnli(data_path, suite.dataset);
      return 0;
    }

    if (*filter_cmd) {
      const auto explanations = load_explanations(data_path, split, columns);
      const auto tokens = normalize(keyword);
      if (tokens.size() != 1) {
        throw ArgumentError("keyword must be a single token");
      }
      const auto hits = filter_by_concept(explanations, tokens.front());
      if (!count_only) {
        for (const auto& e : hits) std::cout << e.raw << '\n';
      }
      std::cout << hits.size() << (count_only ? "\n" : " matches\n");
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
