#pragma once

// Command implementations behind the `neurop` executable. Each command
// writes to the given streams and returns the process exit code.

#include <filesystem>
#include <iomanip>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "neurop/automaton.hpp"
#include "neurop/error.hpp"
#include "neurop/exam_io.hpp"
#include "neurop/knowledge_base.hpp"
#include "neurop/level2_oracle.hpp"
#include "neurop/pipeline.hpp"
#include "neurop/report.hpp"

namespace neurop::cli {

enum ExitCode : int {
  exit_ok = 0,
  exit_usage = 1,
  exit_io = 2,
  exit_exam_parse = 3,
  exit_exam_invalid = 4,
  exit_kb_invalid = 5,
  exit_diagnosis = 6,
  exit_selector = 7,
};

inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::io: return exit_io;
    case ErrorKind::exam_parse: return exit_exam_parse;
    case ErrorKind::exam_invalid: return exit_exam_invalid;
    case ErrorKind::kb_invalid: return exit_kb_invalid;
    case ErrorKind::diagnosis: return exit_diagnosis;
    case ErrorKind::selector: return exit_selector;
    case ErrorKind::usage: break;
  }
  return exit_usage;
}

inline constexpr const char* exit_code_help =
    "Exit codes:\n"
    "  0  success\n"
    "  1  usage error\n"
    "  2  file or directory not found / unreadable\n"
    "  3  exam file malformed (JSON syntax or field types)\n"
    "  4  exam fails validation (duplicate nerve, segment count, indices, values, catalogue)\n"
    "  5  knowledge base invalid\n"
    "  6  diagnosis failed (e.g. a required measurement is missing)\n"
    "  7  unknown nerve selector\n";

enum class Format { text, json };

inline Exam load_exam(const std::filesystem::path& path) {
  if (!std::filesystem::is_regular_file(path)) throw Error(ErrorKind::io, "exam file not found: " + path.string());
  try {
    return parse_exam(detail::read_file(path));
  } catch (const Error& e) {
    std::vector<Diagnostic> diags;
    for (auto d : e.diagnostics()) {
      d.source = path.string();
      diags.push_back(std::move(d));
    }
    throw Error(e.kind(), std::move(diags));
  }
}

inline int report_error(const Error& e, std::ostream& err) {
  for (const auto& d : e.diagnostics()) err << "error: " << d.str() << '\n';
  return exit_code(e.kind());
}

inline int cmd_diagnose(const std::filesystem::path& exam_path, const std::filesystem::path& kb_path, Format format,
                        std::ostream& out, std::ostream& err) {
  try {
    auto kb = load_kb(kb_path);
    auto exam = load_exam(exam_path);
    auto report = run_exam(exam, kb);
    if (format == Format::json)
      out << to_json(report).dump(2) << '\n';
    else
      out << to_text(report);
    return exit_ok;
  } catch (const Error& e) {
    return report_error(e, err);
  }
}

inline int cmd_validate_kb(const std::filesystem::path& kb_path, std::ostream& out, std::ostream& err) {
  try {
    auto check = check_kb(kb_path);
    for (const auto& f : check.files) {
      out << (f.ok() ? "PASS  " : "FAIL  ") << f.file << '\n';
      for (const auto& d : f.diagnostics) out << "      " << d.str() << '\n';
    }
    if (check.ok()) {
      const auto& kb = *check.kb;
      out << "knowledge base OK: " << kb.catalogue.size() << " nerves, " << kb.thresholds.size()
          << " threshold records, " << kb.level1.sensory.rules.size() + kb.level1.motor_first.rules.size() +
                                           kb.level1.motor_subsequent.rules.size()
          << " level-1 rules, " << kb.automaton.size() << " transitions, " << kb.level3.rules.size()
          << " level-3 rules\n";
      out << "fingerprint: " << kb.fingerprint << '\n';
      return exit_ok;
    }
    return exit_kb_invalid;
  } catch (const Error& e) {
    return report_error(e, err);
  }
}

inline int cmd_enumerate(const std::filesystem::path& kb_path, Format format, std::ostream& out, std::ostream& err) {
  try {
    auto kb = load_kb(kb_path);
    auto rows = enumerate_all(kb.automaton);
    std::size_t agree = 0;
    nlohmann::json table = nlohmann::json::array();
    if (format == Format::text)
      out << std::left << std::setw(12) << "chain" << std::setw(8) << "state" << std::setw(16) << "automaton"
          << std::setw(16) << "oracle" << "agree\n";
    for (const auto& row : rows) {
      const auto oracle = oracle_dx(row.chain);
      const bool same = oracle == row.dx;
      agree += same ? 1 : 0;
      std::string chain;
      for (auto s : row.chain.symbols()) chain += static_cast<char>('0' + s);
      if (format == Format::text)
        out << std::left << std::setw(12) << chain << std::setw(8) << to_string(row.final_state) << std::setw(16)
            << to_string(row.dx) << std::setw(16) << to_string(oracle) << (same ? "true" : "false") << '\n';
      else
        table.push_back({{"chain", chain},
                         {"final_state", std::string(to_string(row.final_state))},
                         {"automaton", std::string(to_string(row.dx))},
                         {"oracle", std::string(to_string(oracle))},
                         {"agree", same}});
    }
    if (format == Format::text)
      out << "rows: " << rows.size() << ", agree: " << agree << "/" << rows.size() << '\n';
    else
      out << nlohmann::json{{"rows", table}, {"agree", agree}, {"total", rows.size()}}.dump(2) << '\n';
    return agree == rows.size() ? exit_ok : exit_kb_invalid;
  } catch (const Error& e) {
    return report_error(e, err);
  }
}

inline int cmd_trace(const std::filesystem::path& exam_path, const std::filesystem::path& kb_path,
                     const std::string& selector, std::ostream& out, std::ostream& err) {
  try {
    auto kb = load_kb(kb_path);
    auto exam = load_exam(exam_path);
    auto wanted = parse_selector(selector);
    const NerveStudy* study = nullptr;
    for (const auto& n : exam.nerves)
      if (wanted && n.nerve == *wanted) study = &n;
    if (!study) {
      std::string available;
      for (const auto& n : exam.nerves) available += "\n  " + n.nerve.selector();
      throw Error(ErrorKind::selector, "unknown nerve selector '" + selector + "'; available selectors:" + available);
    }

    auto report = run_exam(exam, kb);
    out << "nerve " << study->nerve.selector() << '\n';
    for (const auto& s : report.segments) {
      if (s.nerve != study->nerve) continue;
      out << "  segment " << s.index << " (" << to_string(s.type) << "): " << detail::facts_str(s.facts) << '\n';
      if (s.dx == SegmentDx::unclassified)
        out << "    no rule matched -> unclassified (pathological)\n";
      else
        out << "    rule " << s.rule << " fired -> " << to_string(s.dx) << '\n';
    }
    for (const auto& n : report.nerves) {
      if (n.nerve != study->nerve) continue;
      out << "chain [" << n.chain.str() << "]\n";
      std::size_t i = 0;
      for (const auto& st : n.steps) {
        out << "  step " << ++i << ": (" << to_string(st.from) << ", " << st.symbol << ") -> " << to_string(st.to);
        if (st.absorbed) out << "  (absorbing, no lookup)";
        out << '\n';
      }
      out << "final state: " << to_string(n.final_state) << '\n';
      out << "nerve diagnosis: " << to_string(n.dx) << '\n';
    }
    return exit_ok;
  } catch (const Error& e) {
    return report_error(e, err);
  }
}

}  // namespace neurop::cli
