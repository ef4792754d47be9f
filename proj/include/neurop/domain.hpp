#pragma once

// Vocabulary shared by every phase: nerves, segments, measurements, semantic
// categories and the three diagnosis taxonomies (segment, nerve, patient).

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "neurop/detail/text.hpp"
#include "neurop/error.hpp"

namespace neurop {

enum class FibreType { sensory, motor };
enum class Side { left, right };

inline constexpr std::array<std::string_view, 2> fibre_names{"sensory", "motor"};
inline constexpr std::array<std::string_view, 2> side_names{"left", "right"};

inline std::string_view to_string(FibreType f) { return detail::enum_name(fibre_names, f); }
inline std::string_view to_string(Side s) { return detail::enum_name(side_names, s); }

struct NerveId {
  std::string name;
  Side side = Side::left;
  FibreType fibre = FibreType::motor;

  friend auto operator<=>(const NerveId&, const NerveId&) = default;

  /// `name:side:fibre`, the form accepted by `parse_selector`.
  std::string selector() const {
    return name + ':' + std::string(to_string(side)) + ':' + std::string(to_string(fibre));
  }
};

/// Canonical report ordering: by name, then fibre, then side.
inline bool canonical_less(const NerveId& a, const NerveId& b) {
  if (a.name != b.name) return a.name < b.name;
  if (a.fibre != b.fibre) return a.fibre < b.fibre;
  return a.side < b.side;
}

inline std::optional<NerveId> parse_selector(std::string_view text) {
  auto first = text.find(':');
  if (first == std::string_view::npos) return std::nullopt;
  auto second = text.find(':', first + 1);
  if (second == std::string_view::npos || text.find(':', second + 1) != std::string_view::npos) return std::nullopt;
  auto name = text.substr(0, first);
  auto side = detail::enum_from_name<Side>(side_names, text.substr(first + 1, second - first - 1));
  auto fibre = detail::enum_from_name<FibreType>(fibre_names, text.substr(second + 1));
  if (!detail::is_identifier(name) || !side || !fibre) return std::nullopt;
  return NerveId{std::string(name), *side, *fibre};
}

/// Same nerve and fibre on the opposite body side.
inline bool homologous(const NerveId& a, const NerveId& b) {
  return a.name == b.name && a.fibre == b.fibre && a.side != b.side;
}

enum class SegmentType { sensory_any, motor_first, motor_subsequent };
inline constexpr std::array<std::string_view, 3> segment_type_names{"sensory_any", "motor_first", "motor_subsequent"};
inline std::string_view to_string(SegmentType t) { return detail::enum_name(segment_type_names, t); }

inline SegmentType segment_type_for(FibreType fibre, int index) {
  if (fibre == FibreType::sensory) return SegmentType::sensory_any;
  return index == 1 ? SegmentType::motor_first : SegmentType::motor_subsequent;
}

inline constexpr int max_segments(FibreType fibre) { return fibre == FibreType::sensory ? 2 : 5; }

enum class Variable { amplitude, velocity, distal_latency, amplitude_ratio };
inline constexpr std::array<std::string_view, 4> variable_names{"amplitude", "velocity", "distal_latency",
                                                                "amplitude_ratio"};
inline constexpr std::array<Variable, 4> all_variables{Variable::amplitude, Variable::velocity,
                                                       Variable::distal_latency, Variable::amplitude_ratio};
inline std::string_view to_string(Variable v) { return detail::enum_name(variable_names, v); }

/// Raw values for one segment. Amplitude is mV for motor CMAP, µV for sensory
/// SAP; velocity m/s; distal latency ms; amplitude ratio is dimensionless.
struct SegmentMeasurements {
  int index = 1;
  std::optional<double> amplitude;
  std::optional<double> velocity;
  std::optional<double> distal_latency;
  std::optional<double> amplitude_ratio;

  const std::optional<double>& get(Variable v) const {
    switch (v) {
      case Variable::amplitude: return amplitude;
      case Variable::velocity: return velocity;
      case Variable::distal_latency: return distal_latency;
      case Variable::amplitude_ratio: break;
    }
    return amplitude_ratio;
  }
  std::optional<double>& get(Variable v) {
    return const_cast<std::optional<double>&>(std::as_const(*this).get(v));
  }

  friend bool operator==(const SegmentMeasurements&, const SegmentMeasurements&) = default;
};

enum class SemanticCategory { normal, decreased, very_decreased, increased, very_increased };
inline constexpr std::array<std::string_view, 5> category_names{"normal", "decreased", "very_decreased", "increased",
                                                                "very_increased"};
inline std::string_view to_string(SemanticCategory c) { return detail::enum_name(category_names, c); }

enum class SegmentDx {
  normal,
  mild_axonal,
  severe_axonal,
  mild_demyelinating,
  severe_demyelinating,
  mild_mixed,
  severe_mixed,
  unclassified,  // no level-1 rule matched; counted as pathological
};
inline constexpr std::array<std::string_view, 8> segment_dx_names{
    "normal",     "mild_axonal", "severe_axonal", "mild_demyelinating", "severe_demyelinating",
    "mild_mixed", "severe_mixed", "unclassified"};
inline std::string_view to_string(SegmentDx d) { return detail::enum_name(segment_dx_names, d); }
inline std::optional<SegmentDx> segment_dx_from_string(std::string_view s) {
  return detail::enum_from_name<SegmentDx>(segment_dx_names, s);
}
inline bool is_pathological(SegmentDx d) { return d != SegmentDx::normal; }

enum class NerveDx { normal, focal, multiple_focal, diffuse };
inline constexpr std::array<std::string_view, 4> nerve_dx_names{"normal", "focal", "multiple_focal", "diffuse"};
inline std::string_view to_string(NerveDx d) { return detail::enum_name(nerve_dx_names, d); }

enum class PatientDx {
  focal_mono_neuropathy,
  multiple_focal_neuropathy,
  diffuse_mono_neuropathy,
  symmetrical_poly_neuropathy,
  asymmetrical_poly_neuropathy,
  uncertain_diagnosis,
  normal_examination,
};
inline constexpr std::array<std::string_view, 7> patient_dx_names{
    "focal_mono_neuropathy",        "multiple_focal_neuropathy", "diffuse_mono_neuropathy",
    "symmetrical_poly_neuropathy",  "asymmetrical_poly_neuropathy", "uncertain_diagnosis",
    "normal_examination"};
inline std::string_view to_string(PatientDx d) { return detail::enum_name(patient_dx_names, d); }
inline std::optional<PatientDx> patient_dx_from_string(std::string_view s) {
  return detail::enum_from_name<PatientDx>(patient_dx_names, s);
}

struct NerveStudy {
  NerveId nerve;
  std::vector<SegmentMeasurements> segments;

  friend bool operator==(const NerveStudy&, const NerveStudy&) = default;
};

struct Exam {
  std::string patient_id;
  std::vector<NerveStudy> nerves;

  friend bool operator==(const Exam&, const Exam&) = default;
};

/// Legal nerve names, one per line in `nerves.cat`.
class NerveCatalogue {
 public:
  NerveCatalogue() = default;
  explicit NerveCatalogue(std::set<std::string, std::less<>> names) : names_(std::move(names)) {}

  bool contains(std::string_view name) const { return names_.find(name) != names_.end(); }
  const std::set<std::string, std::less<>>& names() const { return names_; }
  std::size_t size() const { return names_.size(); }

 private:
  std::set<std::string, std::less<>> names_;
};

inline NerveCatalogue parse_nerve_catalogue(std::string_view text, std::string_view source = "nerves.cat") {
  std::set<std::string, std::less<>> names;
  std::vector<Diagnostic> errors;
  auto lines = detail::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto words = detail::split_words(detail::strip_comment(lines[i]));
    if (words.empty()) continue;
    if (words.size() > 1) {
      errors.push_back({std::string(source), i + 1, words[1].column, "expected one nerve name per line"});
      continue;
    }
    if (!detail::is_identifier(words[0].text)) {
      errors.push_back({std::string(source), i + 1, words[0].column,
                        "invalid nerve name '" + std::string(words[0].text) + "'"});
      continue;
    }
    if (!names.emplace(words[0].text).second)
      errors.push_back({std::string(source), i + 1, words[0].column,
                        "duplicate nerve name '" + std::string(words[0].text) + "'"});
  }
  if (errors.empty() && names.empty()) errors.push_back({std::string(source), 0, 0, "catalogue declares no nerves"});
  if (!errors.empty()) throw Error(ErrorKind::kb_invalid, std::move(errors));
  return NerveCatalogue(std::move(names));
}

struct ExamViolation {
  std::string where;  // e.g. nerves[1].segments[0].amplitude
  std::string message;

  std::string str() const { return where.empty() ? message : where + ": " + message; }
};

struct ExamValidation {
  std::vector<ExamViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks structural exam invariants. With a catalogue, nerve names must
/// also be declared there.
inline ExamValidation validate_exam(const Exam& exam, const NerveCatalogue* catalogue = nullptr) {
  ExamValidation result;
  auto report = [&](std::string where, std::string message) {
    result.violations.push_back({std::move(where), std::move(message)});
  };
  if (exam.nerves.empty()) report("nerves", "exam lists no nerves");

  std::set<NerveId> seen;
  for (std::size_t n = 0; n < exam.nerves.size(); ++n) {
    const auto& study = exam.nerves[n];
    const std::string where = "nerves[" + std::to_string(n) + "]";
    if (!detail::is_identifier(study.nerve.name))
      report(where + ".name", "invalid nerve name '" + study.nerve.name + "'");
    else if (catalogue && !catalogue->contains(study.nerve.name))
      report(where + ".name", "nerve '" + study.nerve.name + "' is not in the nerve catalogue");
    if (!seen.insert(study.nerve).second) report(where, "duplicate nerve " + study.nerve.selector());

    const auto count = static_cast<int>(study.segments.size());
    if (count < 1 || count > max_segments(study.nerve.fibre))
      report(where + ".segments", "segment count out of range: " + std::to_string(count) + " (allowed 1.." +
                                      std::to_string(max_segments(study.nerve.fibre)) + " for " +
                                      std::string(to_string(study.nerve.fibre)) + ")");

    for (std::size_t s = 0; s < study.segments.size(); ++s) {
      const auto& seg = study.segments[s];
      const std::string seg_where = where + ".segments[" + std::to_string(s) + "]";
      if (seg.index != static_cast<int>(s) + 1)
        report(seg_where + ".index", "non-contiguous segment indices: expected " + std::to_string(s + 1) + ", got " +
                                         std::to_string(seg.index));
      for (auto v : all_variables) {
        const auto& value = seg.get(v);
        if (value && (!std::isfinite(*value) || *value <= 0.0))
          report(seg_where + "." + std::string(to_string(v)), "measurement must be finite and > 0");
      }
    }
  }
  return result;
}

inline const Exam& require_valid(const Exam& exam, const NerveCatalogue* catalogue = nullptr) {
  auto validation = validate_exam(exam, catalogue);
  if (!validation.ok()) {
    std::vector<Diagnostic> diags;
    for (const auto& v : validation.violations) diags.push_back({{}, 0, 0, v.str()});
    throw Error(ErrorKind::exam_invalid, std::move(diags));
  }
  return exam;
}

}  // namespace neurop
