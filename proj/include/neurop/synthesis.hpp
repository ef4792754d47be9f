#pragma once

// Level 3: patient diagnosis. Per-nerve results are reduced to a handful of
// summary predicates which the level-3 ruleset (`level3.rules`) consumes.
//
// Predicates:
//   total_affected_class        zero | one | two_or_more   affected segments, all nerves
//   diffuse_nerve_count_class   zero | one | two_or_more   nerves diagnosed diffuse
//   has_diffuse_pair            yes | no                   homologous pair, both diffuse
//   non_diffuse_affected_class  zero | some                affected nerves that are not diffuse

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "neurop/automaton.hpp"
#include "neurop/domain.hpp"
#include "neurop/facts.hpp"
#include "neurop/rules.hpp"

namespace neurop {

struct NerveResult {
  NerveId nerve;
  SegmentStateChain chain;
  NerveDx dx;
};

inline NerveResult make_nerve_result(NerveId nerve, SegmentStateChain chain, const NerveAutomaton& def) {
  auto dx = nerve_diagnosis(chain, def);
  return {std::move(nerve), std::move(chain), dx};
}

struct ExamSummary {
  std::vector<NerveResult> results;  // canonical nerve order
  std::size_t total_affected = 0;
  std::vector<NerveId> affected_nerves;
  std::size_t diffuse_nerves = 0;
  std::vector<std::pair<NerveId, NerveId>> diffuse_pairs;
};

inline ExamSummary summarize(std::vector<NerveResult> results) {
  if (results.empty()) throw Error(ErrorKind::diagnosis, "cannot summarize an exam with no nerve results");
  std::sort(results.begin(), results.end(),
            [](const NerveResult& a, const NerveResult& b) { return canonical_less(a.nerve, b.nerve); });

  ExamSummary s;
  for (const auto& r : results) {
    s.total_affected += r.chain.affected();
    if (r.dx != NerveDx::normal) s.affected_nerves.push_back(r.nerve);
    if (r.dx == NerveDx::diffuse) ++s.diffuse_nerves;
  }
  for (std::size_t i = 0; i < results.size(); ++i)
    for (std::size_t j = i + 1; j < results.size(); ++j)
      if (results[i].dx == NerveDx::diffuse && results[j].dx == NerveDx::diffuse &&
          homologous(results[i].nerve, results[j].nerve))
        s.diffuse_pairs.emplace_back(results[i].nerve, results[j].nerve);
  s.results = std::move(results);
  return s;
}

inline constexpr std::string_view patient_variable = "patient";

inline Vocabulary level3_vocabulary() {
  Vocabulary vocab;
  vocab.declare("total_affected_class", {"zero", "one", "two_or_more"});
  vocab.declare("diffuse_nerve_count_class", {"zero", "one", "two_or_more"});
  vocab.declare("has_diffuse_pair", {"yes", "no"});
  vocab.declare("non_diffuse_affected_class", {"zero", "some"});
  vocab.declare(patient_variable, {patient_dx_names.begin(), patient_dx_names.end()});
  return vocab;
}

inline FactSet summary_facts(const ExamSummary& s) {
  auto count_class = [](std::size_t n) { return n == 0 ? "zero" : n == 1 ? "one" : "two_or_more"; };
  const auto non_diffuse_affected = s.affected_nerves.size() - s.diffuse_nerves;
  FactSet facts;
  facts.insert("total_affected_class", count_class(s.total_affected));
  facts.insert("diffuse_nerve_count_class", count_class(s.diffuse_nerves));
  facts.insert("has_diffuse_pair", s.diffuse_pairs.empty() ? "no" : "yes");
  facts.insert("non_diffuse_affected_class", non_diffuse_affected == 0 ? "zero" : "some");
  return facts;
}

struct PatientDecision {
  PatientDx dx = PatientDx::uncertain_diagnosis;
  std::string rule_name;
  std::size_t precedence = 0;  // 1-based position of the selected rule
  FactSet facts;
};

/// First level-3 rule whose premises hold. If none does, the result is
/// uncertain_diagnosis under the pseudo-rule `fallback`.
inline PatientDecision patient_dx(const ExamSummary& s, const RuleSet& level3) {
  PatientDecision out;
  out.facts = summary_facts(s);
  if (auto f = fire(level3, out.facts)) {
    auto dx = patient_dx_from_string(f->value);
    if (!dx) throw Error(ErrorKind::kb_invalid, "rule '" + f->rule_name + "' concludes unknown diagnosis '" + f->value + "'");
    out.dx = *dx;
    out.rule_name = f->rule_name;
    out.precedence = f->rule_index + 1;
  } else {
    out.dx = PatientDx::uncertain_diagnosis;
    out.rule_name = "fallback";
    out.precedence = level3.rules.size() + 1;
  }
  return out;
}

}  // namespace neurop
