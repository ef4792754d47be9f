#pragma once

// Production rules with set-valued premises, a line-oriented DSL for them,
// and first-match forward firing.
//
//   ruleset motor_subsequent target lesion
//   rule severe_axonal_1 provenance published
//     if amplitude in { very_decreased }
//     if amplitude_ratio in { normal }
//     if velocity in { normal, decreased }
//     then lesion = severe_axonal
//
// Premise lines of one rule are conjoined; set members are alternatives.
// Keywords are lowercase and `#` starts a comment.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "neurop/detail/text.hpp"
#include "neurop/error.hpp"
#include "neurop/facts.hpp"

namespace neurop {

/// Declared variables and the symbols each may take.
class Vocabulary {
 public:
  Vocabulary& declare(std::string_view variable, std::vector<std::string> values) {
    domains_[std::string(variable)] = std::set<std::string, std::less<>>(values.begin(), values.end());
    return *this;
  }

  const std::set<std::string, std::less<>>* domain(std::string_view variable) const {
    auto it = domains_.find(variable);
    return it == domains_.end() ? nullptr : &it->second;
  }

  bool admits(std::string_view variable, std::string_view value) const {
    const auto* d = domain(variable);
    return d && d->find(value) != d->end();
  }

 private:
  std::map<std::string, std::set<std::string, std::less<>>, std::less<>> domains_;
};

struct Premise {
  std::string variable;
  std::vector<std::string> allowed;  // disjunction, file order

  bool admits(std::string_view value) const { return std::find(allowed.begin(), allowed.end(), value) != allowed.end(); }
};

struct Rule {
  std::string name;
  std::string provenance = "unspecified";
  std::vector<Premise> premises;  // conjunction
  SemanticFact conclusion;
  std::size_t line = 0;
};

struct RuleSet {
  std::string name;
  std::string target_variable;
  std::vector<Rule> rules;  // file order is priority order
};

/// True iff every premise variable is bound in `facts` to an allowed value.
inline bool matches(const Rule& rule, const FactSet& facts) {
  for (const auto& p : rule.premises) {
    auto value = facts.find(p.variable);
    if (!value || !p.admits(*value)) return false;
  }
  return true;
}

struct Firing {
  std::string value;
  std::string rule_name;
  std::size_t rule_index = 0;  // 0-based position in the ruleset
};

/// Conclusion of the first rule, in file order, whose premises all hold.
inline std::optional<Firing> fire(const RuleSet& rs, const FactSet& facts) {
  for (std::size_t i = 0; i < rs.rules.size(); ++i)
    if (matches(rs.rules[i], facts)) return Firing{rs.rules[i].conclusion.value, rs.rules[i].name, i};
  return std::nullopt;
}

namespace detail {

struct Token {
  std::string_view text;
  std::size_t column;
};

/// Identifiers/numbers and the punctuation `{ } , =`. Returns the column of
/// the first illegal character, if any.
inline std::optional<std::size_t> tokenize(std::string_view line, std::vector<Token>& out) {
  auto word_char = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
  };
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (is_space(c)) {
      ++i;
    } else if (c == '{' || c == '}' || c == ',' || c == '=') {
      out.push_back({line.substr(i, 1), i + 1});
      ++i;
    } else if (word_char(c)) {
      std::size_t start = i;
      while (i < line.size() && word_char(line[i])) ++i;
      out.push_back({line.substr(start, i - start), start + 1});
    } else {
      return i + 1;
    }
  }
  return std::nullopt;
}

}  // namespace detail

inline RuleSet parse_ruleset(std::string_view text, const Vocabulary& vocab, std::string_view source = "<rules>") {
  RuleSet rs;
  std::vector<Diagnostic> errors;
  auto fail = [&](std::size_t line, std::size_t col, std::string msg) {
    errors.push_back({std::string(source), line, col, std::move(msg)});
  };

  bool have_header = false;
  std::optional<Rule> open;  // rule awaiting its `then`
  bool open_valid = true;
  std::set<std::string, std::less<>> rule_names;

  auto close_rule = [&](std::size_t line) {
    if (!open) return;
    fail(open->line, 1, "rule '" + open->name + "' has no conclusion ('then' line)");
    (void)line;
    open.reset();
  };

  auto lines = detail::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto ln = i + 1;
    std::vector<detail::Token> t;
    if (auto bad = detail::tokenize(detail::strip_comment(lines[i]), t)) {
      fail(ln, *bad, "syntax error: unexpected character");
      continue;
    }
    if (t.empty()) continue;
    const auto kw = t[0].text;

    if (kw == "ruleset") {
      if (have_header) {
        fail(ln, t[0].column, "syntax error: duplicate 'ruleset' header");
        continue;
      }
      if (t.size() != 4 || t[2].text != "target" || !detail::is_identifier(t[1].text) ||
          !detail::is_identifier(t[3].text)) {
        fail(ln, t[0].column, "syntax error: expected 'ruleset <name> target <variable>'");
        continue;
      }
      have_header = true;
      rs.name = t[1].text;
      rs.target_variable = t[3].text;
      if (!vocab.domain(rs.target_variable))
        fail(ln, t[3].column, "undeclared target variable '" + rs.target_variable + "'");
      continue;
    }
    if (!have_header) {
      fail(ln, t[0].column, "syntax error: expected 'ruleset' header before '" + std::string(kw) + "'");
      continue;
    }

    if (kw == "rule") {
      close_rule(ln);
      bool ok = (t.size() == 2 || (t.size() == 4 && t[2].text == "provenance")) && detail::is_identifier(t[1].text) &&
                (t.size() == 2 || detail::is_identifier(t[3].text));
      if (!ok) {
        fail(ln, t[0].column, "syntax error: expected 'rule <name> [provenance <tag>]'");
        // Keep consuming this rule's lines so they are not misreported.
        open = Rule{"<invalid>", "unspecified", {}, {}, ln};
        open_valid = false;
        continue;
      }
      open = Rule{std::string(t[1].text), t.size() == 4 ? std::string(t[3].text) : "unspecified", {}, {}, ln};
      open_valid = true;
      if (!rule_names.insert(open->name).second) {
        fail(ln, t[1].column, "duplicate rule name '" + open->name + "'");
        open_valid = false;
      }
      continue;
    }

    if (kw == "if") {
      if (!open) {
        fail(ln, t[0].column, "syntax error: premise outside a rule");
        continue;
      }
      if (t.size() < 4 || t[2].text != "in" || t[3].text != "{" || t.back().text != "}" ||
          !detail::is_identifier(t[1].text)) {
        fail(ln, t[0].column, "syntax error: expected 'if <variable> in { <value>, ... }'");
        open_valid = false;
        continue;
      }
      Premise p{std::string(t[1].text), {}};
      bool ok = true;
      if (t.size() == 5) {
        fail(ln, t[3].column, "empty premise set");
        ok = false;
      }
      // members: v (, v)*
      for (std::size_t k = 4; ok && k + 1 < t.size(); ++k) {
        const bool expect_value = (k - 4) % 2 == 0;
        if (expect_value) {
          if (!detail::is_identifier(t[k].text)) {
            fail(ln, t[k].column, "syntax error: expected a value");
            ok = false;
          } else if (p.admits(t[k].text)) {
            fail(ln, t[k].column, "duplicate value '" + std::string(t[k].text) + "' in premise set");
            ok = false;
          } else {
            p.allowed.emplace_back(t[k].text);
          }
        } else if (t[k].text != ",") {
          fail(ln, t[k].column, "syntax error: expected ',' or '}'");
          ok = false;
        }
      }
      if (ok && (t.size() - 4) % 2 != 0 && t.size() != 5) {
        fail(ln, t[t.size() - 2].column, "syntax error: trailing ','");
        ok = false;
      }
      if (ok) {
        const auto* domain = vocab.domain(p.variable);
        if (!domain) {
          fail(ln, t[1].column, "premise over undeclared variable '" + p.variable + "'");
          ok = false;
        } else {
          for (const auto& v : p.allowed)
            if (!domain->count(v)) {
              fail(ln, t[1].column, "value '" + v + "' is not in the domain of '" + p.variable + "'");
              ok = false;
            }
        }
      }
      if (ok && p.variable == rs.target_variable) {
        fail(ln, t[1].column, "premise over the target variable '" + p.variable + "'");
        ok = false;
      }
      if (ok) {
        for (const auto& q : open->premises)
          if (q.variable == p.variable) {
            fail(ln, t[1].column, "duplicate premise variable '" + p.variable + "'");
            ok = false;
          }
      }
      if (ok)
        open->premises.push_back(std::move(p));
      else
        open_valid = false;
      continue;
    }

    if (kw == "then") {
      if (!open) {
        fail(ln, t[0].column, "syntax error: conclusion outside a rule");
        continue;
      }
      if (t.size() != 4 || t[2].text != "=" || !detail::is_identifier(t[1].text) || !detail::is_identifier(t[3].text)) {
        fail(ln, t[0].column, "syntax error: expected 'then <variable> = <value>'");
        open.reset();
        continue;
      }
      Rule rule = std::move(*open);
      open.reset();
      rule.conclusion = {std::string(t[1].text), std::string(t[3].text)};
      bool ok = open_valid;
      if (rule.conclusion.variable != rs.target_variable) {
        fail(ln, t[1].column, "conclusion variable '" + rule.conclusion.variable + "' differs from target '" +
                                  rs.target_variable + "'");
        ok = false;
      } else if (!vocab.admits(rule.conclusion.variable, rule.conclusion.value)) {
        fail(ln, t[3].column, "value '" + rule.conclusion.value + "' is not in the domain of '" +
                                  rule.conclusion.variable + "'");
        ok = false;
      }
      if (open_valid && rule.premises.empty()) {
        fail(rule.line, 1, "rule '" + rule.name + "' has no premises");
        ok = false;
      }
      if (ok) rs.rules.push_back(std::move(rule));
      continue;
    }

    fail(ln, t[0].column, "syntax error: unexpected '" + std::string(kw) + "'");
  }
  close_rule(lines.size());

  if (errors.empty() && !have_header) fail(0, 0, "ruleset has no rules");
  if (errors.empty() && rs.rules.empty()) fail(0, 0, "ruleset has no rules");
  if (!errors.empty()) throw Error(ErrorKind::kb_invalid, std::move(errors));
  return rs;
}

}  // namespace neurop
