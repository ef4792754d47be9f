#pragma once

// Phase 1: continuous measurements -> semantic categories via a threshold
// table loaded from `thresholds.tbl`.
//
// Table format, one record per (segment type, variable):
//
//   <segment_type> <variable> <low_is_abnormal|high_is_abnormal> <mild> <severe> [at_index <k>]
//
// Every record also declares the variable as required for that segment type;
// `at_index k` narrows the requirement to segment index k.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "neurop/detail/text.hpp"
#include "neurop/domain.hpp"
#include "neurop/error.hpp"
#include "neurop/facts.hpp"

namespace neurop {

enum class Direction { low_is_abnormal, high_is_abnormal };
inline constexpr std::array<std::string_view, 2> direction_names{"low_is_abnormal", "high_is_abnormal"};
inline std::string_view to_string(Direction d) { return detail::enum_name(direction_names, d); }

/// Amplitudes, velocity and the amplitude ratio are abnormal when low;
/// distal latency when high.
inline Direction natural_direction(Variable v) {
  return v == Variable::distal_latency ? Direction::high_is_abnormal : Direction::low_is_abnormal;
}

/// The three categories a variable with this direction can take, least abnormal first.
inline std::array<SemanticCategory, 3> category_domain(Direction d) {
  if (d == Direction::low_is_abnormal)
    return {SemanticCategory::normal, SemanticCategory::decreased, SemanticCategory::very_decreased};
  return {SemanticCategory::normal, SemanticCategory::increased, SemanticCategory::very_increased};
}

struct VariableSpec {
  Variable variable = Variable::amplitude;
  Direction direction = Direction::low_is_abnormal;
  double mild_cutoff = 0.0;
  double severe_cutoff = 0.0;
  std::optional<int> only_index;  // required only at this segment index

  bool well_ordered() const {
    return direction == Direction::low_is_abnormal ? severe_cutoff < mild_cutoff : severe_cutoff > mild_cutoff;
  }
};

/// Cutoff values classify toward the less abnormal category: for a
/// low_is_abnormal spec, value == mild_cutoff is normal and value ==
/// severe_cutoff is decreased.
inline SemanticCategory classify(double value, const VariableSpec& spec) {
  if (!std::isfinite(value) || value <= 0.0)
    throw Error(ErrorKind::diagnosis, "cannot classify " + std::string(to_string(spec.variable)) +
                                          ": value must be finite and > 0");
  if (spec.direction == Direction::low_is_abnormal) {
    if (value >= spec.mild_cutoff) return SemanticCategory::normal;
    if (value >= spec.severe_cutoff) return SemanticCategory::decreased;
    return SemanticCategory::very_decreased;
  }
  if (value <= spec.mild_cutoff) return SemanticCategory::normal;
  if (value <= spec.severe_cutoff) return SemanticCategory::increased;
  return SemanticCategory::very_increased;
}

/// Variables each segment type must carry, from the examination protocol.
/// Sensory amplitude_ratio is required only on the second segment.
inline std::vector<Variable> protocol_variables(SegmentType t, int index) {
  switch (t) {
    case SegmentType::sensory_any:
      if (index == 2) return {Variable::amplitude, Variable::velocity, Variable::amplitude_ratio};
      return {Variable::amplitude, Variable::velocity};
    case SegmentType::motor_first: return {Variable::amplitude, Variable::distal_latency};
    case SegmentType::motor_subsequent: break;
  }
  return {Variable::amplitude, Variable::velocity, Variable::amplitude_ratio};
}

class ThresholdTable {
 public:
  /// Returns false if (type, variable) already has a record.
  bool add(SegmentType type, const VariableSpec& spec) { return entries_.emplace(Key{type, spec.variable}, spec).second; }

  const VariableSpec* find(SegmentType type, Variable v) const {
    auto it = entries_.find(Key{type, v});
    return it == entries_.end() ? nullptr : &it->second;
  }

  /// Required variables for a segment at `index`, in Variable order.
  std::vector<Variable> required(SegmentType type, int index) const {
    std::vector<Variable> out;
    for (auto v : all_variables)
      if (const auto* spec = find(type, v); spec && (!spec->only_index || *spec->only_index == index))
        out.push_back(v);
    return out;
  }

  /// Every variable with a record for this type, regardless of index.
  std::vector<Variable> declared(SegmentType type) const {
    std::vector<Variable> out;
    for (auto v : all_variables)
      if (find(type, v)) out.push_back(v);
    return out;
  }

  std::size_t size() const { return entries_.size(); }

 private:
  using Key = std::pair<SegmentType, Variable>;
  std::map<Key, VariableSpec> entries_;
};

inline ThresholdTable parse_threshold_table(std::string_view text, std::string_view source = "thresholds.tbl") {
  ThresholdTable table;
  std::vector<Diagnostic> errors;
  auto fail = [&](std::size_t line, std::size_t col, std::string msg) {
    errors.push_back({std::string(source), line, col, std::move(msg)});
  };

  auto lines = detail::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto line_no = i + 1;
    auto w = detail::split_words(detail::strip_comment(lines[i]));
    if (w.empty()) continue;
    if (w.size() != 5 && w.size() != 7) {
      fail(line_no, w[0].column,
           "expected '<segment_type> <variable> <direction> <mild> <severe> [at_index <k>]'");
      continue;
    }
    auto type = detail::enum_from_name<SegmentType>(segment_type_names, w[0].text);
    if (!type) {
      fail(line_no, w[0].column, "unknown segment type '" + std::string(w[0].text) + "'");
      continue;
    }
    auto var = detail::enum_from_name<Variable>(variable_names, w[1].text);
    if (!var) {
      fail(line_no, w[1].column, "unknown variable '" + std::string(w[1].text) + "'");
      continue;
    }
    auto dir = detail::enum_from_name<Direction>(direction_names, w[2].text);
    if (!dir) {
      fail(line_no, w[2].column, "unknown direction '" + std::string(w[2].text) + "'");
      continue;
    }
    if (*dir != natural_direction(*var)) {
      fail(line_no, w[2].column,
           std::string(to_string(*var)) + " must be " + std::string(to_string(natural_direction(*var))));
      continue;
    }
    auto mild = detail::parse_double(w[3].text);
    auto severe = detail::parse_double(w[4].text);
    if (!mild || !std::isfinite(*mild) || *mild <= 0.0) {
      fail(line_no, w[3].column, "mild cutoff must be a positive number");
      continue;
    }
    if (!severe || !std::isfinite(*severe) || *severe <= 0.0) {
      fail(line_no, w[4].column, "severe cutoff must be a positive number");
      continue;
    }
    VariableSpec spec{*var, *dir, *mild, *severe, std::nullopt};
    if (w.size() == 7) {
      auto k = detail::parse_double(w[6].text);
      if (w[5].text != "at_index") {
        fail(line_no, w[5].column, "expected 'at_index'");
        continue;
      }
      if (!k || *k < 1 || *k > 5 || *k != std::floor(*k)) {
        fail(line_no, w[6].column, "at_index expects an integer 1..5");
        continue;
      }
      spec.only_index = static_cast<int>(*k);
    }
    if (!spec.well_ordered()) {
      fail(line_no, w[3].column,
           spec.direction == Direction::low_is_abnormal ? "low_is_abnormal requires severe cutoff < mild cutoff"
                                                        : "high_is_abnormal requires severe cutoff > mild cutoff");
      continue;
    }
    if (!table.add(*type, spec))
      fail(line_no, w[0].column,
           "duplicate record for (" + std::string(w[0].text) + ", " + std::string(w[1].text) + ")");
  }

  if (errors.empty()) {
    for (auto type : {SegmentType::sensory_any, SegmentType::motor_first, SegmentType::motor_subsequent}) {
      for (int index = 1; index <= 5; ++index) {
        if (type == SegmentType::motor_first && index != 1) continue;
        if (type == SegmentType::motor_subsequent && index == 1) continue;
        if (type == SegmentType::sensory_any && index > 2) continue;
        if (table.required(type, index) != protocol_variables(type, index)) {
          std::string want;
          for (auto v : protocol_variables(type, index)) want += (want.empty() ? "" : ", ") + std::string(to_string(v));
          fail(0, 0, "required variables for " + std::string(to_string(type)) + " segment " + std::to_string(index) +
                         " must be {" + want + "}");
        }
      }
    }
  }
  if (!errors.empty()) throw Error(ErrorKind::kb_invalid, std::move(errors));
  return table;
}

/// One fact per required variable of the segment type. Fails if a required
/// value is missing or a value is present that the type does not declare at
/// this index.
inline FactSet interpret_segment(const SegmentMeasurements& m, SegmentType type, const ThresholdTable& table) {
  FactSet facts;
  auto required = table.required(type, m.index);
  for (auto v : all_variables) {
    const bool needed = std::find(required.begin(), required.end(), v) != required.end();
    const auto& value = m.get(v);
    if (needed && !value)
      throw Error(ErrorKind::diagnosis, "required variable missing: " + std::string(to_string(v)) + " (" +
                                            std::string(to_string(type)) + " segment " + std::to_string(m.index) + ")");
    if (!needed && value)
      throw Error(ErrorKind::diagnosis, "variable not declared for segment type: " + std::string(to_string(v)) + " (" +
                                            std::string(to_string(type)) + " segment " + std::to_string(m.index) + ")");
    if (needed) facts.insert(to_string(v), to_string(classify(*value, *table.find(type, v))));
  }
  return facts;
}

}  // namespace neurop
