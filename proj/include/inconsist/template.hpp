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

#ifndef INCONSIST_TEMPLATE_HPP_
#define INCONSIST_TEMPLATE_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "inconsist/esnli.hpp"

namespace inconsist {

// Template DSL
// ------------
// A template line is `label<TAB>pattern`. Pattern elements, whitespace
// separated:
//
//   X, Y          the key elements; exactly one of each, X first
//   (a|b c|d)     alternation over token sequences, at least two
//   [ ... ]       optional group; may nest alternations and wildcards
//   *             wildcard, one or more tokens whose value is ignored
//   anything else a literal token
//
// expand() turns a template into concrete variants (one per combination of
// alternatives and optional choices); match() binds X and Y against a
// normalized explanation; instantiate() substitutes a binding back in.

struct Literal {
  std::string token;
  friend bool operator==(const Literal&, const Literal&) = default;
};
struct PlaceholderX {
  friend bool operator==(const PlaceholderX&, const PlaceholderX&) = default;
};
struct PlaceholderY {
  friend bool operator==(const PlaceholderY&, const PlaceholderY&) = default;
};
struct Wildcard {
  friend bool operator==(const Wildcard&, const Wildcard&) = default;
};
struct Alternation {
  std::vector<Tokens> alternatives;
  friend bool operator==(const Alternation&, const Alternation&) = default;
};
struct Element;
struct Optional {
  std::vector<Element> body;
  friend bool operator==(const Optional&, const Optional&);
};

struct Element {
  std::variant<Literal, PlaceholderX, PlaceholderY, Alternation, Optional,
               Wildcard>
      node;
  friend bool operator==(const Element&, const Element&) = default;
};

inline bool operator==(const Optional& a, const Optional& b) {
  return a.body == b.body;
}

// One element of an expanded variant.
struct Piece {
  enum class Kind { kLiteral, kX, kY, kWildcard };
  Kind kind = Kind::kLiteral;
  std::string token;  // set for kLiteral only

  friend bool operator==(const Piece&, const Piece&) = default;
};

using Variant = std::vector<Piece>;

bool has_wildcard(const Variant& variant);

// Space-separated rendering, e.g. "X is a type of Y" or "* is either X or Y".
std::string render(const Variant& variant);

class Template {
 public:
  // Throws ParseError.
  static Template parse(std::string_view dsl_line, std::size_t line_no = 0);

  const std::string& id() const { return id_; }
  NliLabel label() const { return label_; }
  const std::vector<Element>& elements() const { return elements_; }
  const std::string& source() const { return source_; }
  // Expanded variants in expansion order, computed once at parse time.
  const std::vector<Variant>& variants() const { return variants_; }

  void set_id(std::string id) { id_ = std::move(id); }

 private:
  std::string id_;
  NliLabel label_ = NliLabel::kEntailment;
  std::vector<Element> elements_;
  std::string source_;
  std::vector<Variant> variants_;
};

struct Binding {
  Tokens x;
  Tokens y;
  friend bool operator==(const Binding&, const Binding&) = default;
};

struct Match {
  const Template* templ = nullptr;
  std::size_t variant = 0;
  Binding binding;
};

// Cartesian expansion in source order; alternatives in listed order and
// optional groups present before absent.
std::vector<Variant> expand(const std::vector<Element>& elements);
inline std::vector<Variant> expand(const Template& t) {
  return expand(t.elements());
}

// Anchored match of one variant. Placeholders and wildcards take the
// shortest non-empty span that lets the rest match.
std::optional<Binding> match_variant(const Tokens& tokens,
                                     const Variant& variant);

// First template (in list order) with a matching variant wins.
std::optional<Match> match(const Tokens& tokens,
                           const std::vector<const Template*>& templates);

// Throws ContractError for wildcard variants or empty bindings.
Tokens instantiate(const Variant& variant, const Binding& binding);
Tokens instantiate(const Template& t, std::size_t variant,
                   const Binding& binding);

// Templates in file order. Ids are "<label>:<ordinal within label>".
class TemplateSet {
 public:
  TemplateSet() = default;
  explicit TemplateSet(std::vector<Template> templates);

  // Throws ParseError naming the offending line.
  static TemplateSet parse(std::string_view text);
  static TemplateSet load_file(const std::filesystem::path& path);
  // The template list compiled into the library.
  static const TemplateSet& shipped();

  const std::vector<Template>& all() const { return templates_; }
  std::vector<const Template*> for_label(NliLabel label) const;
  std::vector<const Template*> all_ptrs() const;
  const Template* find(std::string_view id) const;
  std::size_t count(NliLabel label) const;

 private:
  std::vector<Template> templates_;
};

std::string_view shipped_template_text();

}  // namespace inconsist

#endif  // INCONSIST_TEMPLATE_HPP_
