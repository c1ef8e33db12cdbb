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

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "inconsist/errors.hpp"

namespace inconsist {
namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)); }

Tokens split_ws(std::string_view s) {
  Tokens out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    std::size_t j = i;
    while (j < s.size() && !is_space(s[j])) ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

class PatternParser {
 public:
  PatternParser(std::string_view pattern, std::size_t offset,
                std::size_t line_no)
      : s_(pattern), offset_(offset), line_(line_no) {}

  std::vector<Element> parse() {
    auto elements = sequence(false);
    if (x_count_ != 1) {
      fail(x_count_ == 0 ? "pattern has no X placeholder"
                         : "pattern has more than one X placeholder",
           x_count_ == 0 ? 0 : second_x_col_);
    }
    if (y_count_ != 1) {
      fail(y_count_ == 0 ? "pattern has no Y placeholder"
                         : "pattern has more than one Y placeholder",
           y_count_ == 0 ? 0 : second_y_col_);
    }
    if (y_col_ < x_col_) fail("Y placeholder appears before X", y_col_);
    return elements;
  }

 private:
  [[noreturn]] void fail(const std::string& what, std::size_t pos) const {
    throw ParseError(what, line_, offset_ + pos + 1);
  }

  std::vector<Element> sequence(bool in_optional) {
    const std::size_t open = pos_ == 0 ? 0 : pos_ - 1;
    std::vector<Element> out;
    while (true) {
      while (pos_ < s_.size() && is_space(s_[pos_])) ++pos_;
      if (pos_ >= s_.size()) {
        if (in_optional) fail("unbalanced '['", open);
        return out;
      }
      const char c = s_[pos_];
      if (c == ']') {
        if (!in_optional) fail("unmatched ']'", pos_);
        ++pos_;
        return out;
      }
      if (c == '[') {
        const std::size_t at = pos_++;
        Optional opt{sequence(true)};
        if (opt.body.empty()) fail("empty optional group", at);
        out.push_back(Element{std::move(opt)});
      } else if (c == '(') {
        out.push_back(Element{alternation()});
      } else if (c == ')' || c == '|') {
        fail(std::string("unexpected '") + c + "'", pos_);
      } else {
        out.push_back(word(in_optional));
      }
    }
  }

  Alternation alternation() {
    const std::size_t open = pos_++;
    const std::size_t close = s_.find(')', pos_);
    if (close == std::string_view::npos) fail("unbalanced '('", open);
    const std::string_view body = s_.substr(pos_, close - pos_);
    if (body.find_first_of("([])") != std::string_view::npos) {
      fail("brackets are not allowed inside an alternation", open);
    }
    Alternation alt;
    std::size_t start = 0;
    while (true) {
      const std::size_t bar = body.find('|', start);
      Tokens tokens = split_ws(body.substr(
          start, bar == std::string_view::npos ? std::string_view::npos
                                               : bar - start));
      if (tokens.empty()) fail("empty alternative", pos_ + start);
      if (std::find_if(tokens.begin(), tokens.end(), [](const auto& t) {
            return t == "X" || t == "Y" || t == "*";
          }) != tokens.end()) {
        fail("placeholders are not allowed inside an alternation", open);
      }
      alt.alternatives.push_back(std::move(tokens));
      if (bar == std::string_view::npos) break;
      start = bar + 1;
    }
    if (alt.alternatives.size() < 2) {
      fail("alternation needs at least two alternatives", open);
    }
    pos_ = close + 1;
    return alt;
  }

  Element word(bool in_optional) {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && !is_space(s_[pos_]) &&
           std::string_view("[]()|").find(s_[pos_]) == std::string_view::npos) {
      ++pos_;
    }
    const std::string_view w = s_.substr(start, pos_ - start);
    if (w == "X" || w == "Y") {
      if (in_optional) fail("placeholder inside an optional group", start);
      if (w == "X") {
        if (x_count_++ == 0) x_col_ = start; else second_x_col_ = start;
        return Element{PlaceholderX{}};
      }
      if (y_count_++ == 0) y_col_ = start; else second_y_col_ = start;
      return Element{PlaceholderY{}};
    }
    if (w == "*") return Element{Wildcard{}};
    return Element{Literal{std::string(w)}};
  }

  std::string_view s_;
  std::size_t offset_;
  std::size_t line_;
  std::size_t pos_ = 0;
  int x_count_ = 0;
  int y_count_ = 0;
  std::size_t x_col_ = 0;
  std::size_t y_col_ = 0;
  std::size_t second_x_col_ = 0;
  std::size_t second_y_col_ = 0;
};

std::vector<Variant> choices(const Element& e) {
  struct Visitor {
    std::vector<Variant> operator()(const Literal& l) const {
      return {{Piece{Piece::Kind::kLiteral, l.token}}};
    }
    std::vector<Variant> operator()(const PlaceholderX&) const {
      return {{Piece{Piece::Kind::kX, {}}}};
    }
    std::vector<Variant> operator()(const PlaceholderY&) const {
      return {{Piece{Piece::Kind::kY, {}}}};
    }
    std::vector<Variant> operator()(const Wildcard&) const {
      return {{Piece{Piece::Kind::kWildcard, {}}}};
    }
    std::vector<Variant> operator()(const Alternation& a) const {
      std::vector<Variant> out;
      for (const auto& alt : a.alternatives) {
        Variant v;
        for (const auto& t : alt) v.push_back(Piece{Piece::Kind::kLiteral, t});
        out.push_back(std::move(v));
      }
      return out;
    }
    std::vector<Variant> operator()(const Optional& o) const {
      auto out = expand(o.body);
      out.emplace_back();
      return out;
    }
  };
  return std::visit(Visitor{}, e.node);
}

// Backtracking matcher over variant pieces.
class Matcher {
 public:
  Matcher(const Tokens& tokens, const Variant& variant)
      : tokens_(tokens), variant_(variant) {}

  std::optional<Binding> run() {
    if (!step(0, 0)) return std::nullopt;
    return binding_;
  }

 private:
  bool step(std::size_t piece, std::size_t at) {
    if (piece == variant_.size()) return at == tokens_.size();
    const Piece& p = variant_[piece];
    if (p.kind == Piece::Kind::kLiteral) {
      return at < tokens_.size() && tokens_[at] == p.token &&
             step(piece + 1, at + 1);
    }
    for (std::size_t end = at + 1; end <= tokens_.size(); ++end) {
      if (!step(piece + 1, end)) continue;
      const auto first = tokens_.begin() + static_cast<std::ptrdiff_t>(at);
      const auto last = tokens_.begin() + static_cast<std::ptrdiff_t>(end);
      if (p.kind == Piece::Kind::kX) binding_.x.assign(first, last);
      if (p.kind == Piece::Kind::kY) binding_.y.assign(first, last);
      return true;
    }
    return false;
  }

  const Tokens& tokens_;
  const Variant& variant_;
  Binding binding_;
};

}  // namespace

bool has_wildcard(const Variant& variant) {
  return std::any_of(variant.begin(), variant.end(), [](const Piece& p) {
    return p.kind == Piece::Kind::kWildcard;
  });
}

std::string render(const Variant& variant) {
  std::string out;
  for (const auto& p : variant) {
    if (!out.empty()) out.push_back(' ');
    switch (p.kind) {
      case Piece::Kind::kLiteral:
        out += p.token;
        break;
      case Piece::Kind::kX:
        out += 'X';
        break;
      case Piece::Kind::kY:
        out += 'Y';
        break;
      case Piece::Kind::kWildcard:
        out += '*';
        break;
    }
  }
  return out;
}

Template Template::parse(std::string_view dsl_line, std::size_t line_no) {
  const std::size_t tab = dsl_line.find('\t');
  if (tab == std::string_view::npos) {
    throw ParseError("expected '<label><TAB><pattern>'", line_no, 1);
  }
  const std::string_view label_text = dsl_line.substr(0, tab);
  auto label = parse_label(label_text);
  if (!label) {
    throw ParseError("unknown label '" + std::string(label_text) + "'",
                     line_no, 1);
  }
  Template t;
  t.label_ = *label;
  t.source_ = std::string(dsl_line);
  t.elements_ =
      PatternParser(dsl_line.substr(tab + 1), tab + 1, line_no).parse();
  t.variants_ = expand(t.elements_);
  return t;
}

std::vector<Variant> expand(const std::vector<Element>& elements) {
  std::vector<Variant> result(1);
  for (const auto& e : elements) {
    const auto options = choices(e);
    std::vector<Variant> next;
    next.reserve(result.size() * options.size());
    for (const auto& prefix : result) {
      for (const auto& option : options) {
        Variant v = prefix;
        v.insert(v.end(), option.begin(), option.end());
        next.push_back(std::move(v));
      }
    }
    result = std::move(next);
  }
  return result;
}

std::optional<Binding> match_variant(const Tokens& tokens,
                                     const Variant& variant) {
  return Matcher(tokens, variant).run();
}

std::optional<Match> match(const Tokens& tokens,
                           const std::vector<const Template*>& templates) {
  for (const Template* t : templates) {
    const auto& variants = t->variants();
    for (std::size_t i = 0; i < variants.size(); ++i) {
      if (auto b = match_variant(tokens, variants[i])) {
        return Match{t, i, std::move(*b)};
      }
    }
  }
  return std::nullopt;
}

Tokens instantiate(const Variant& variant, const Binding& binding) {
  if (has_wildcard(variant)) {
    throw ContractError("cannot instantiate wildcard variant '" +
                        render(variant) + "'");
  }
  if (binding.x.empty() || binding.y.empty()) {
    throw ContractError("binding has an empty placeholder");
  }
  Tokens out;
  for (const auto& p : variant) {
    switch (p.kind) {
      case Piece::Kind::kLiteral:
        out.push_back(p.token);
        break;
      case Piece::Kind::kX:
        out.insert(out.end(), binding.x.begin(), binding.x.end());
        break;
      case Piece::Kind::kY:
        out.insert(out.end(), binding.y.begin(), binding.y.end());
        break;
      case Piece::Kind::kWildcard:
        break;
    }
  }
  return out;
}

Tokens instantiate(const Template& t, std::size_t variant,
                   const Binding& binding) {
  if (variant >= t.variants().size()) {
    throw ContractError("template " + t.id() + " has no variant " +
                        std::to_string(variant));
  }
  return instantiate(t.variants()[variant], binding);
}

TemplateSet::TemplateSet(std::vector<Template> templates)
    : templates_(std::move(templates)) {
  std::size_t ordinal[3] = {0, 0, 0};
  for (auto& t : templates_) {
    const auto k = static_cast<std::size_t>(t.label());
    t.set_id(std::string(label_name(t.label())) + ":" +
             std::to_string(++ordinal[k]));
  }
}

TemplateSet TemplateSet::parse(std::string_view text) {
  std::vector<Template> templates;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto first = line.find_first_not_of(" \t");
    if (first != std::string_view::npos && line[first] != '#') {
      templates.push_back(Template::parse(line, line_no));
    }
    if (end == text.size()) break;
    start = end + 1;
  }
  return TemplateSet(std::move(templates));
}

TemplateSet TemplateSet::load_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open template file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const TemplateSet& TemplateSet::shipped() {
  static const TemplateSet set = parse(shipped_template_text());
  return set;
}

std::vector<const Template*> TemplateSet::for_label(NliLabel label) const {
  std::vector<const Template*> out;
  for (const auto& t : templates_) {
    if (t.label() == label) out.push_back(&t);
  }
  return out;
}

std::vector<const Template*> TemplateSet::all_ptrs() const {
  std::vector<const Template*> out;
  for (const auto& t : templates_) out.push_back(&t);
  return out;
}

const Template* TemplateSet::find(std::string_view id) const {
  for (const auto& t : templates_) {
    if (t.id() == id) return &t;
  }
  return nullptr;
}

std::size_t TemplateSet::count(NliLabel label) const {
  return static_cast<std::size_t>(
      std::count_if(templates_.begin(), templates_.end(),
                    [&](const Template& t) { return t.label() == label; }));
}

}  // namespace inconsist
