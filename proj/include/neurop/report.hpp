#pragma once

// Report serialization. Both formats list segments and nerves in the
// canonical nerve order the pipeline uses, so identical (exam, KB) inputs
// give byte-identical output whatever order the exam lists its nerves in.

#include <array>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "neurop/automaton.hpp"
#include "neurop/domain.hpp"
#include "neurop/error.hpp"
#include "neurop/pipeline.hpp"

namespace neurop {

namespace detail {

inline nlohmann::json facts_json(const FactSet& facts) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [k, v] : facts) out[k] = v;
  return out;
}

inline FactSet facts_from_json(const nlohmann::json& j) {
  FactSet out;
  for (const auto& [k, v] : j.items()) out.insert(k, v.get<std::string>());
  return out;
}

template <class Enum, std::size_t N>
Enum enum_or_throw(const std::array<std::string_view, N>& names, const nlohmann::json& j, const char* what) {
  auto v = enum_from_name<Enum>(names, j.get<std::string>());
  if (!v) throw Error(ErrorKind::exam_parse, std::string("report: unknown ") + what + " '" + j.get<std::string>() + "'");
  return *v;
}

inline NerveId selector_or_throw(const nlohmann::json& j) {
  auto id = parse_selector(j.get<std::string>());
  if (!id) throw Error(ErrorKind::exam_parse, "report: bad nerve selector '" + j.get<std::string>() + "'");
  return *id;
}

}  // namespace detail

inline nlohmann::json to_json(const DiagnosisReport& r) {
  nlohmann::json segments = nlohmann::json::array();
  for (const auto& s : r.segments)
    segments.push_back({{"nerve", s.nerve.selector()},
                        {"index", s.index},
                        {"segment_type", std::string(to_string(s.type))},
                        {"facts", detail::facts_json(s.facts)},
                        {"dx", std::string(to_string(s.dx))},
                        {"rule", s.rule},
                        {"provenance", s.provenance}});

  nlohmann::json nerves = nlohmann::json::array();
  for (const auto& n : r.nerves) {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& st : n.steps)
      steps.push_back({{"from", std::string(to_string(st.from))},
                       {"symbol", st.symbol},
                       {"to", std::string(to_string(st.to))},
                       {"absorbed", st.absorbed}});
    nlohmann::json chain = nlohmann::json::array();
    for (auto s : n.chain.symbols()) chain.push_back(s);
    nerves.push_back({{"nerve", n.nerve.selector()},
                      {"chain", std::move(chain)},
                      {"steps", std::move(steps)},
                      {"final_state", std::string(to_string(n.final_state))},
                      {"dx", std::string(to_string(n.dx))}});
  }

  nlohmann::json trace = nlohmann::json::array();
  for (const auto& e : r.trace) trace.push_back({{"phase", e.phase}, {"subject", e.subject}, {"message", e.message}});

  return {{"patient_id", r.patient_id},
          {"kb_fingerprint", r.kb_fingerprint},
          {"segments", std::move(segments)},
          {"unclassified_segments", r.unclassified_segments()},
          {"nerves", std::move(nerves)},
          {"patient",
           {{"dx", std::string(to_string(r.patient_dx))},
            {"rule", r.patient_rule},
            {"precedence", r.precedence},
            {"summary", detail::facts_json(r.summary)}}},
          {"trace", std::move(trace)}};
}

inline DiagnosisReport report_from_json(const nlohmann::json& j) {
  DiagnosisReport r;
  try {
    r.patient_id = j.at("patient_id").get<std::string>();
    r.kb_fingerprint = j.at("kb_fingerprint").get<std::string>();
    for (const auto& s : j.at("segments")) {
      auto dx = segment_dx_from_string(s.at("dx").get<std::string>());
      if (!dx) throw Error(ErrorKind::exam_parse, "report: unknown segment dx");
      r.segments.push_back({detail::selector_or_throw(s.at("nerve")), s.at("index").get<int>(),
                            detail::enum_or_throw<SegmentType>(segment_type_names, s.at("segment_type"), "segment type"),
                            detail::facts_from_json(s.at("facts")), *dx, s.at("rule").get<std::string>(),
                            s.at("provenance").get<std::string>()});
    }
    for (const auto& n : j.at("nerves")) {
      std::vector<NerveStep> steps;
      for (const auto& st : n.at("steps"))
        steps.push_back({detail::enum_or_throw<NerveState>(nerve_state_names, st.at("from"), "state"),
                         st.at("symbol").get<SegmentSymbol>(),
                         detail::enum_or_throw<NerveState>(nerve_state_names, st.at("to"), "state"),
                         st.at("absorbed").get<bool>()});
      r.nerves.push_back({detail::selector_or_throw(n.at("nerve")),
                          SegmentStateChain(n.at("chain").get<std::vector<SegmentSymbol>>()),
                          detail::enum_or_throw<NerveState>(nerve_state_names, n.at("final_state"), "state"),
                          std::move(steps),
                          detail::enum_or_throw<NerveDx>(nerve_dx_names, n.at("dx"), "nerve dx")});
    }
    const auto& p = j.at("patient");
    r.patient_dx = detail::enum_or_throw<PatientDx>(patient_dx_names, p.at("dx"), "patient dx");
    r.patient_rule = p.at("rule").get<std::string>();
    r.precedence = p.at("precedence").get<std::size_t>();
    r.summary = detail::facts_from_json(p.at("summary"));
    for (const auto& e : j.at("trace"))
      r.trace.push_back({e.at("phase").get<int>(), e.at("subject").get<std::string>(), e.at("message").get<std::string>()});
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::exam_parse, std::string("report: ") + e.what());
  }
  return r;
}

/// Human-readable report. The last line is always `patient diagnosis: <dx>`.
inline std::string to_text(const DiagnosisReport& r) {
  std::ostringstream out;
  out << "patient: " << r.patient_id << '\n';
  out << "knowledge base: " << r.kb_fingerprint << '\n';

  out << "\nsegments (phases 1-2)\n";
  for (const auto& s : r.segments) {
    out << "  " << segment_subject(s.nerve, s.index) << "  " << to_string(s.type) << "  "
        << detail::facts_str(s.facts) << "  -> " << to_string(s.dx);
    if (s.dx == SegmentDx::unclassified)
      out << "  !! UNCLASSIFIED: no rule matched, counted as pathological";
    else
      out << "  [" << s.rule << ", " << s.provenance << "]";
    out << '\n';
  }
  if (auto n = r.unclassified_segments(); n > 0)
    out << "  WARNING: " << n << " unclassified segment(s); the knowledge base does not cover these findings\n";

  out << "\nnerves (phase 3)\n";
  for (const auto& n : r.nerves) {
    out << "  " << n.nerve.selector() << "  chain [" << n.chain.str() << "]  start";
    for (const auto& st : n.steps) out << (st.absorbed ? " =" : " -") << st.symbol << (st.absorbed ? "=> " : "-> ") << to_string(st.to);
    out << "  final " << to_string(n.final_state) << "  -> " << to_string(n.dx) << '\n';
  }

  out << "\npatient (phase 4)\n";
  out << "  summary: " << detail::facts_str(r.summary) << '\n';
  out << "  precedence rule " << r.precedence << ": " << r.patient_rule << '\n';

  out << "\ntrace\n";
  for (const auto& e : r.trace) out << "  [phase " << e.phase << "] " << e.subject << ": " << e.message << '\n';

  out << "\npatient diagnosis: " << to_string(r.patient_dx) << '\n';
  return out.str();
}

}  // namespace neurop
