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

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "inconsist/attack.hpp"
#include "inconsist/errors.hpp"
#include "inconsist/esnli.hpp"
#include "inconsist/inconsistency.hpp"
#include "inconsist/oracle.hpp"
#include "inconsist/report.hpp"
#include "inconsist/stats.hpp"
#include "inconsist/template.hpp"

namespace py = pybind11;

namespace inconsist {
namespace {

std::optional<NliLabel> label_arg(const std::optional<std::string>& name) {
  if (!name) return std::nullopt;
  auto label = parse_label(*name);
  if (!label) throw ArgumentError("unknown label '" + *name + "'");
  return label;
}

const TemplateSet& templates_arg(const TemplateSet* templates) {
  return templates ? *templates : TemplateSet::shipped();
}

py::dict match_dict(const Match& m) {
  py::dict d;
  d["template"] = m.templ->id();
  d["label"] = std::string(label_name(m.templ->label()));
  d["variant"] = m.variant;
  d["x"] = join(m.binding.x);
  d["y"] = join(m.binding.y);
  return d;
}

py::dict candidate_dict(const Candidate& c) {
  py::dict d;
  d["text"] = join(c.tokens);
  if (c.provenance.kind == Provenance::Kind::kNegation) {
    d["kind"] = "negation";
    d["position"] = c.provenance.position;
  } else {
    d["kind"] = "swap";
    d["template"] = c.provenance.template_id;
    d["variant"] = c.provenance.variant;
  }
  return d;
}

py::object json_to_py(const nlohmann::ordered_json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

std::vector<EsnliRecord> records_arg(const std::vector<py::dict>& rows) {
  std::vector<EsnliRecord> out;
  for (const auto& row : rows) {
    EsnliRecord r;
    r.instance.id = row["id"].cast<std::string>();
    r.instance.context = row["context"].cast<std::string>();
    r.instance.variable = row["variable"].cast<std::string>();
    if (row.contains("label") && !row["label"].is_none()) {
      r.instance.gold_label = label_arg(row["label"].cast<std::string>());
    }
    if (row.contains("explanation") && !row["explanation"].is_none()) {
      r.explanation = Explanation(row["explanation"].cast<std::string>());
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace
}  // namespace inconsist

PYBIND11_MODULE(_inconsist, m) {
  using namespace inconsist;
  m.doc() = "Template-based detection of inconsistent NLI explanations.";

  py::register_exception<Error>(m, "InconsistError");
  // Registered later, so tried first.
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ArgumentError& e) {
      py::set_error(PyExc_ValueError, e.what());
    } catch (const IoError& e) {
      py::set_error(PyExc_OSError, e.what());
    }
  });

  m.def("normalize", &normalize, py::arg("text"));

  py::class_<TemplateSet>(m, "TemplateSet")
      .def_static("shipped", &TemplateSet::shipped,
                  py::return_value_policy::reference)
      .def_static("parse", &TemplateSet::parse, py::arg("text"))
      .def_static("load", &TemplateSet::load_file, py::arg("path"))
      .def("__len__", [](const TemplateSet& s) { return s.all().size(); })
      .def("count",
           [](const TemplateSet& s, const std::string& label) {
             return s.count(*label_arg(label));
           })
      .def("templates", [](const TemplateSet& s) {
        std::vector<py::dict> out;
        for (const auto& t : s.all()) {
          py::dict d;
          d["id"] = t.id();
          d["label"] = std::string(label_name(t.label()));
          d["pattern"] = t.source();
          d["variants"] = t.variants().size();
          out.push_back(d);
        }
        return out;
      });

  m.def(
      "match",
      [](const std::string& text, std::optional<std::string> label,
         const TemplateSet* templates) -> py::object {
        const auto& set = templates_arg(templates);
        const auto l = label_arg(label);
        const auto found = match(normalize(text), l ? set.for_label(*l)
                                                    : set.all_ptrs());
        if (!found) return py::none();
        return match_dict(*found);
      },
      py::arg("text"), py::arg("label") = py::none(),
      py::arg("templates") = nullptr);

  m.def(
      "instantiate",
      [](const std::string& template_id, std::size_t variant,
         const std::string& x, const std::string& y,
         const TemplateSet* templates) {
        const Template* t = templates_arg(templates).find(template_id);
        if (!t) throw ArgumentError("unknown template '" + template_id + "'");
        if (variant >= t->variants().size()) {
          throw ArgumentError("variant out of range");
        }
        return join(instantiate(*t, variant, Binding{normalize(x), normalize(y)}));
      },
      py::arg("template_id"), py::arg("variant"), py::arg("x"), py::arg("y"),
      py::arg("templates") = nullptr);

  m.def(
      "negation_variants",
      [](const std::string& text) {
        std::vector<std::string> out;
        for (const auto& v : negation_variants(normalize(text))) {
          out.push_back(join(v));
        }
        return out;
      },
      py::arg("text"));

  m.def(
      "swap_variants",
      [](const std::string& text, const std::string& label,
         const TemplateSet* templates) {
        std::vector<std::string> out;
        for (const auto& v : swap_variants(normalize(text), *label_arg(label),
                                           templates_arg(templates))) {
          out.push_back(join(v));
        }
        return out;
      },
      py::arg("text"), py::arg("label"), py::arg("templates") = nullptr);

  m.def(
      "generate",
      [](const std::string& explanation, std::optional<std::string> label,
         const TemplateSet* templates) {
        const auto outcome = build_inconsistency_set(
            Explanation(explanation), label_arg(label), templates_arg(templates));
        py::dict d;
        d["discarded"] = outcome.is_discarded();
        const auto& set = outcome.set();
        d["source_label"] =
            set.source_label ? py::cast(std::string(label_name(*set.source_label)))
                             : py::none();
        d["match"] = set.source_match ? py::object(match_dict(*set.source_match))
                                      : py::none();
        py::list candidates;
        for (const auto& c : set.candidates) candidates.append(candidate_dict(c));
        d["candidates"] = candidates;
        return d;
      },
      py::arg("explanation"), py::arg("label") = py::none(),
      py::arg("templates") = nullptr);

  m.def(
      "summarize_counts",
      [](std::uint64_t processed, std::uint64_t raw, std::uint64_t distinct,
         double realism) {
        return json_to_py(to_json(summarize_counts(processed, raw, distinct, realism)));
      },
      py::arg("processed"), py::arg("raw_pairs"), py::arg("distinct_pairs"),
      py::arg("realism") = 1.0);

  m.def(
      "report_summary",
      [](const std::filesystem::path& path, double realism, bool sample_std) {
        const Report report = read_report(path);
        return json_to_py(
            to_json(compute_summary(report.results, realism, sample_std)));
      },
      py::arg("path"), py::arg("realism") = 1.0, py::arg("sample_std") = false);

  m.def(
      "read_report",
      [](const std::filesystem::path& path) {
        const Report report = read_report(path);
        py::dict d;
        d["standalone"] = report.header.standalone;
        d["seed"] = report.header.seed;
        py::list results;
        for (const auto& r : report.results) results.append(json_to_py(to_json(r)));
        d["results"] = results;
        d["summary"] = report.summary ? json_to_py(to_json(*report.summary))
                                      : py::none();
        return d;
      },
      py::arg("path"));

  py::class_<Oracle>(m, "Oracle")
      .def(py::init([](const std::string& spec_json) {
             return Oracle(OracleSpec::from_json(nlohmann::json::parse(spec_json)));
           }),
           py::arg("spec_json"))
      .def(
          "forward",
          [](const Oracle& o, const std::string& context,
             const std::string& variable) {
            const auto r = o.forward(context, variable);
            return py::make_tuple(std::string(label_name(r.label)),
                                  r.explanation.raw);
          },
          py::arg("context"), py::arg("variable"))
      .def(
          "reverse",
          [](const Oracle& o, const std::string& context,
             const std::string& explanation) {
            return o.reverse(context, explanation).variable;
          },
          py::arg("context"), py::arg("explanation"))
      .def(
          "handle_line",
          [](const Oracle& o, const std::string& line) {
            return o.handle_line(line, OracleMode::kBoth);
          },
          py::arg("line"));

  m.def(
      "synthetic_suite",
      [](std::size_t facts, std::size_t seeded, std::uint64_t seed) {
        const auto suite = make_synthetic_suite(facts, seeded, seed);
        std::vector<py::dict> rows;
        for (const auto& r : suite.dataset) {
          py::dict d;
          d["id"] = r.instance.id;
          d["context"] = r.instance.context;
          d["variable"] = r.instance.variable;
          d["label"] = r.instance.gold_label
                           ? py::cast(std::string(label_name(*r.instance.gold_label)))
                           : py::none();
          d["explanation"] = r.explanation.raw;
          rows.push_back(d);
        }
        return py::make_tuple(suite.spec.to_json().dump(), rows);
      },
      py::arg("facts"), py::arg("seeded"), py::arg("seed") = 0);

  m.def(
      "attack",
      [](const std::vector<py::dict>& rows,
         std::function<std::string(std::string)> handler, bool standalone,
         bool precomputed, std::uint64_t seed, const TemplateSet* templates) {
        const auto records = records_arg(rows);
        LoopbackClient model(
            [handler](std::string_view line) {
              py::gil_scoped_acquire gil;
              return handler(std::string(line));
            },
            1);
        AttackConfig config;
        config.standalone = standalone;
        config.precomputed_explanations = precomputed;
        config.seed = seed;
        const auto& set = templates_arg(templates);
        AttackRun run;
        {
          py::gil_scoped_release release;
          run = attack_dataset(records, model, model, set, config);
        }
        return serialize_report(Report{ReportHeader{kReportVersion, standalone, seed},
                                       run.results, compute_summary(run.results)});
      },
      py::arg("records"), py::arg("handler"), py::arg("standalone") = false,
      py::arg("precomputed") = false, py::arg("seed") = 0,
      py::arg("templates") = nullptr);
}
