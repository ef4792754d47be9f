#pragma once

// Level 1: interpret a segment's measurements, then fire the ruleset for its
// segment type. A segment no rule covers is `unclassified`.

#include <optional>
#include <string>
#include <vector>

#include "neurop/domain.hpp"
#include "neurop/facts.hpp"
#include "neurop/interpret.hpp"
#include "neurop/rules.hpp"

namespace neurop {

inline constexpr std::string_view lesion_variable = "lesion";

inline std::vector<std::string> lesion_domain() {
  std::vector<std::string> out;
  for (auto name : segment_dx_names)
    if (name != to_string(SegmentDx::unclassified)) out.emplace_back(name);
  return out;
}

/// Premise variables for one segment type, each ranging over the categories
/// its direction allows, plus the `lesion` conclusion.
inline Vocabulary level1_vocabulary(SegmentType type, const ThresholdTable& table) {
  Vocabulary vocab;
  for (auto v : table.declared(type)) {
    std::vector<std::string> domain;
    for (auto c : category_domain(table.find(type, v)->direction)) domain.emplace_back(to_string(c));
    vocab.declare(to_string(v), std::move(domain));
  }
  vocab.declare(lesion_variable, lesion_domain());
  return vocab;
}

/// Used to syntax-check rules when no threshold table is available: every
/// protocol variable over all five categories.
inline Vocabulary level1_vocabulary_unchecked(SegmentType type) {
  Vocabulary vocab;
  std::vector<std::string> all(category_names.begin(), category_names.end());
  for (int index : {1, 2})
    for (auto v : protocol_variables(type, index)) vocab.declare(to_string(v), all);
  vocab.declare(lesion_variable, lesion_domain());
  return vocab;
}

struct Level1Rules {
  RuleSet sensory;
  RuleSet motor_first;
  RuleSet motor_subsequent;

  const RuleSet& for_type(SegmentType t) const {
    switch (t) {
      case SegmentType::sensory_any: return sensory;
      case SegmentType::motor_first: return motor_first;
      case SegmentType::motor_subsequent: break;
    }
    return motor_subsequent;
  }
};

struct SegmentDiagnosis {
  FactSet facts;
  SegmentDx dx = SegmentDx::unclassified;
  std::optional<Firing> firing;  // empty when unclassified
};

inline SegmentDiagnosis classify_facts(const FactSet& facts, const RuleSet& rules) {
  SegmentDiagnosis out{facts, SegmentDx::unclassified, fire(rules, facts)};
  if (out.firing) {
    auto dx = segment_dx_from_string(out.firing->value);
    if (!dx) throw Error(ErrorKind::kb_invalid, "rule '" + out.firing->rule_name + "' concludes unknown lesion '" +
                                                     out.firing->value + "'");
    out.dx = *dx;
  }
  return out;
}

inline SegmentDiagnosis diagnose_segment(const SegmentMeasurements& m, SegmentType type, const ThresholdTable& table,
                                         const Level1Rules& rules) {
  return classify_facts(interpret_segment(m, type, table), rules.for_type(type));
}

}  // namespace neurop
