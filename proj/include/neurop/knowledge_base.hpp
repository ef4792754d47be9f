#pragma once

// Knowledge-base directory loading. Every file is checked independently so
// that `validate-kb` can list all violations at once.

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "neurop/automaton.hpp"
#include "neurop/detail/text.hpp"
#include "neurop/domain.hpp"
#include "neurop/error.hpp"
#include "neurop/interpret.hpp"
#include "neurop/rules.hpp"
#include "neurop/segment_diagnosis.hpp"
#include "neurop/synthesis.hpp"

namespace neurop {

namespace kb_files {
inline constexpr std::string_view catalogue = "nerves.cat";
inline constexpr std::string_view thresholds = "thresholds.tbl";
inline constexpr std::string_view sensory = "level1_sensory.rules";
inline constexpr std::string_view motor_first = "level1_motor_first.rules";
inline constexpr std::string_view motor_subsequent = "level1_motor_subsequent.rules";
inline constexpr std::string_view automaton = "automaton.tr";
inline constexpr std::string_view level3 = "level3.rules";
inline constexpr std::array<std::string_view, 7> all{catalogue,        thresholds, sensory, motor_first,
                                                     motor_subsequent, automaton,  level3};
}  // namespace kb_files

struct KnowledgeBase {
  NerveCatalogue catalogue;
  ThresholdTable thresholds;
  Level1Rules level1;
  NerveAutomaton automaton;
  RuleSet level3;
  std::string fingerprint;  // "fnv1a64:<hex>" over file names and contents
};

struct KbFileCheck {
  std::string file;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return diagnostics.empty(); }
};

struct KbCheck {
  std::vector<KbFileCheck> files;  // kb_files::all order
  std::optional<KnowledgeBase> kb;  // set iff every file passed
  bool ok() const { return kb.has_value(); }

  std::vector<Diagnostic> all_diagnostics() const {
    std::vector<Diagnostic> out;
    for (const auto& f : files) out.insert(out.end(), f.diagnostics.begin(), f.diagnostics.end());
    return out;
  }
};

namespace detail {

template <class Parse>
auto checked(KbFileCheck& check, const std::optional<std::string>& text, Parse&& parse)
    -> std::optional<decltype(parse(std::string_view{}))> {
  if (!text) return std::nullopt;
  try {
    return parse(std::string_view(*text));
  } catch (const Error& e) {
    check.diagnostics.insert(check.diagnostics.end(), e.diagnostics().begin(), e.diagnostics().end());
  }
  return std::nullopt;
}

inline void require_target(KbFileCheck& check, const std::optional<RuleSet>& rs, std::string_view target) {
  if (rs && rs->target_variable != target)
    check.diagnostics.push_back(
        {check.file, 0, 0, "ruleset target must be '" + std::string(target) + "', got '" + rs->target_variable + "'"});
}

}  // namespace detail

inline KbCheck check_kb(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw Error(ErrorKind::io, "knowledge base directory not found: " + dir.string());

  KbCheck result;
  std::vector<std::optional<std::string>> texts;
  detail::Fnv1a64 hash;
  for (auto name : kb_files::all) {
    KbFileCheck check{std::string(name), {}};
    auto path = dir / std::string(name);
    std::optional<std::string> text;
    if (!std::filesystem::is_regular_file(path)) {
      check.diagnostics.push_back({check.file, 0, 0, "missing file"});
    } else {
      text = detail::read_file(path);
      hash.update(name);
      hash.update(std::string_view("\0", 1));
      hash.update(*text);
      hash.update(std::string_view("\0", 1));
    }
    texts.push_back(std::move(text));
    result.files.push_back(std::move(check));
  }
  auto& f = result.files;

  auto catalogue = detail::checked(f[0], texts[0], [&](std::string_view t) { return parse_nerve_catalogue(t, f[0].file); });
  auto thresholds =
      detail::checked(f[1], texts[1], [&](std::string_view t) { return parse_threshold_table(t, f[1].file); });

  auto vocab = [&](SegmentType type) {
    return thresholds ? level1_vocabulary(type, *thresholds) : level1_vocabulary_unchecked(type);
  };
  auto level1 = [&](std::size_t i, SegmentType type) {
    auto rs = detail::checked(f[i], texts[i], [&](std::string_view t) { return parse_ruleset(t, vocab(type), f[i].file); });
    detail::require_target(f[i], rs, lesion_variable);
    return rs;
  };
  auto sensory = level1(2, SegmentType::sensory_any);
  auto motor_first = level1(3, SegmentType::motor_first);
  auto motor_subsequent = level1(4, SegmentType::motor_subsequent);
  auto automaton = detail::checked(f[5], texts[5], [&](std::string_view t) { return parse_automaton(t, f[5].file); });
  auto level3 =
      detail::checked(f[6], texts[6], [&](std::string_view t) { return parse_ruleset(t, level3_vocabulary(), f[6].file); });
  detail::require_target(f[6], level3, patient_variable);

  bool all_ok = true;
  for (const auto& c : f) all_ok = all_ok && c.ok();
  if (all_ok)
    result.kb = KnowledgeBase{std::move(*catalogue),
                              std::move(*thresholds),
                              Level1Rules{std::move(*sensory), std::move(*motor_first), std::move(*motor_subsequent)},
                              std::move(*automaton),
                              std::move(*level3),
                              "fnv1a64:" + hash.hex()};
  return result;
}

/// Loads and validates a KB directory; throws Error(kb_invalid) listing every
/// violation, or Error(io) if the directory does not exist.
inline KnowledgeBase load_kb(const std::filesystem::path& dir) {
  auto check = check_kb(dir);
  if (!check.ok()) throw Error(ErrorKind::kb_invalid, check.all_diagnostics());
  return std::move(*check.kb);
}

}  // namespace neurop
