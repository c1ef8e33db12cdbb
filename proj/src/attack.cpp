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

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "inconsist/errors.hpp"
#include "inconsist/report.hpp"

namespace inconsist {
namespace {

template <typename Fn>
auto with_retries(int retries, Fn&& fn) -> decltype(fn()) {
  for (int attempt = 0;; ++attempt) {
    try {
      return fn();
    } catch (const TransportError& e) {
      if (!e.retryable() || attempt >= retries) throw;
    }
  }
}

struct WireInput {
  std::string context;
  std::string variable;
};

WireInput wire_input(const NliInstance& instance, bool standalone) {
  if (!standalone) return {instance.context, instance.variable};
  if (instance.context.empty()) return {"", instance.variable};
  return {"", instance.context + " " + instance.variable};
}

// Complete lines of a file; a trailing line without '\n' was cut short by an
// interrupted write and is dropped.
std::vector<std::string> complete_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (true) {
    const std::size_t nl = text.find('\n', start);
    if (nl == std::string::npos) break;
    if (nl > start) lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

class Checkpoint {
 public:
  Checkpoint(std::filesystem::path path,
             const std::vector<EsnliRecord>& records)
      : ids_path_(std::move(path)), results_path_(ids_path_) {
    results_path_ += ".results";
    std::set<std::string> known;
    for (const auto& r : records) known.insert(r.instance.id);

    if (std::filesystem::exists(ids_path_)) {
      std::map<std::string, AttackResult> stored;
      std::size_t line_no = 0;
      for (const auto& line : complete_lines(results_path_)) {
        ++line_no;
        try {
          AttackResult r = result_from_json(nlohmann::json::parse(line));
          stored.emplace(r.instance.id, std::move(r));
        } catch (const std::exception& e) {
          throw ReportError("checkpoint results " + results_path_.string() +
                            " line " + std::to_string(line_no) +
                            " is corrupt: " + e.what());
        }
      }
      for (const auto& id : complete_lines(ids_path_)) {
        if (known.count(id) == 0) {
          throw ReportError("checkpoint " + ids_path_.string() +
                            " names unknown instance '" + id + "'");
        }
        auto it = stored.find(id);
        if (it == stored.end()) {
          throw ReportError("checkpoint " + ids_path_.string() +
                            " lists '" + id + "' but its result is missing");
        }
        if (done_.count(id) > 0) {
          throw ReportError("checkpoint " + ids_path_.string() +
                            " lists '" + id + "' twice");
        }
        done_.emplace(id, std::move(it->second));
        stored.erase(it);
      }
    }
    // Rewrite both files without any half-written tail.
    std::ofstream ids(ids_path_, std::ios::binary | std::ios::trunc);
    std::ofstream results(results_path_, std::ios::binary | std::ios::trunc);
    if (!ids || !results) {
      throw IoError("cannot write checkpoint " + ids_path_.string());
    }
    for (const auto& [id, result] : done_) {
      results << serialize_result(result) << '\n';
      ids << id << '\n';
    }
    results.close();
    ids.close();
    ids_.open(ids_path_, std::ios::binary | std::ios::app);
    results_.open(results_path_, std::ios::binary | std::ios::app);
  }

  const std::map<std::string, AttackResult>& done() const { return done_; }

  void record(const AttackResult& result) {
    results_ << serialize_result(result) << '\n' << std::flush;
    ids_ << result.instance.id << '\n' << std::flush;
  }

 private:
  std::filesystem::path ids_path_;
  std::filesystem::path results_path_;
  std::map<std::string, AttackResult> done_;
  std::ofstream ids_;
  std::ofstream results_;
};

}  // namespace

GenerationRecord GenerationRecord::from(const GenerationOutcome& outcome) {
  GenerationRecord r;
  r.discarded = outcome.is_discarded();
  r.source_label = outcome.set().source_label;
  if (const auto& m = outcome.set().source_match) {
    r.source_match = SourceMatch{m->templ->id(), m->variant, m->binding};
  }
  r.candidates = outcome.set().candidates;
  return r;
}

bool GenerationRecord::contains(const Tokens& tokens) const {
  return std::any_of(candidates.begin(), candidates.end(),
                     [&](const Candidate& c) { return c.tokens == tokens; });
}

AttackResult attack_instance(const EsnliRecord& record, ModelClient& model,
                             ModelClient& reverse_model,
                             const TemplateSet& templates,
                             const AttackConfig& config) {
  AttackResult result;
  result.instance = record.instance;
  const WireInput input = wire_input(record.instance, config.standalone);

  if (config.precomputed_explanations) {
    result.original = ForwardResponse{
        record.instance.gold_label.value_or(NliLabel::kNeutral),
        record.explanation};
  } else {
    try {
      result.original = with_retries(config.retries, [&] {
        return model.forward(input.context, input.variable);
      });
    } catch (const std::exception& e) {
      result.error = e.what();
      result.outcome.discarded = false;
      return result;
    }
  }

  std::optional<NliLabel> label = result.original->label;
  if (config.precomputed_explanations && !record.instance.gold_label) {
    label.reset();
  }
  result.outcome = GenerationRecord::from(
      build_inconsistency_set(result.original->explanation, label, templates));

  const auto& candidates = result.outcome.candidates;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    AttackCandidateTrace trace;
    trace.candidate_index = i;
    try {
      trace.reverse_variable = with_retries(config.retries, [&] {
        return reverse_model.reverse(input.context,
                                     join(candidates[i].tokens));
      }).variable;
      trace.reverse_response = with_retries(config.retries, [&] {
        return model.forward(input.context, *trace.reverse_variable);
      });
      trace.verified =
          result.outcome.contains(trace.reverse_response->explanation.tokens);
    } catch (const std::exception& e) {
      trace.error = e.what();
    }
    result.traces.push_back(std::move(trace));
  }
  return result;
}

AttackRun attack_dataset(const std::vector<EsnliRecord>& records,
                         ModelClient& model, ModelClient& reverse_model,
                         const TemplateSet& templates,
                         const AttackConfig& config, const ResultSink& sink) {
  {
    std::set<std::string> ids;
    for (const auto& r : records) {
      if (!ids.insert(r.instance.id).second) {
        throw ArgumentError("duplicate instance id '" + r.instance.id + "'");
      }
    }
  }

  std::optional<Checkpoint> checkpoint;
  AttackRun run;
  std::vector<const EsnliRecord*> todo;
  if (config.checkpoint) {
    checkpoint.emplace(*config.checkpoint, records);
    for (const auto& [id, result] : checkpoint->done()) {
      run.results.push_back(result);
    }
  }
  for (const auto& r : records) {
    if (!checkpoint || checkpoint->done().count(r.instance.id) == 0) {
      todo.push_back(&r);
    }
  }
  if (config.stop_after > 0 && todo.size() > config.stop_after) {
    todo.resize(config.stop_after);
    run.complete = false;
  }

  std::mutex mu;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next++;
      if (i >= todo.size()) return;
      AttackResult result =
          attack_instance(*todo[i], model, reverse_model, templates, config);
      std::lock_guard lock(mu);
      try {
        if (checkpoint) checkpoint->record(result);
        if (sink) sink(result);
      } catch (...) {
        if (!failure) failure = std::current_exception();
      }
      run.results.push_back(std::move(result));
    }
  };

  const std::size_t workers = std::max<std::size_t>(
      1, std::min(config.workers, std::max<std::size_t>(todo.size(), 1)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (std::size_t i = 0; i < workers; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::sort(run.results.begin(), run.results.end(),
            [](const AttackResult& a, const AttackResult& b) {
              return a.instance.id < b.instance.id;
            });
  return run;
}

}  // namespace inconsist
