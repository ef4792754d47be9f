#pragma once

// The supervising engine: four phases over a per-exam working memory.
//
//   phase 1  interpret every segment            exam          -> facts
//   phase 2  fire level-1 rules per segment     facts         -> segment dx
//   phase 3  run the automaton per nerve        segment dx    -> nerve dx
//   phase 4  level-3 synthesis                  nerve results -> patient dx
//
// Each phase writes only its own store and reads only the previous one.
// Nerves are processed in canonical order (name, fibre, side) regardless of
// their order in the exam, so reports do not depend on input ordering.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "neurop/automaton.hpp"
#include "neurop/domain.hpp"
#include "neurop/error.hpp"
#include "neurop/facts.hpp"
#include "neurop/knowledge_base.hpp"
#include "neurop/segment_diagnosis.hpp"
#include "neurop/synthesis.hpp"

namespace neurop {

struct InterpretedSegment {
  NerveId nerve;
  int index = 1;
  SegmentType type = SegmentType::sensory_any;
  FactSet facts;
};

struct DiagnosedSegment {
  NerveId nerve;
  int index = 1;
  SegmentType type = SegmentType::sensory_any;
  SegmentDx dx = SegmentDx::unclassified;
  std::optional<Firing> firing;
  std::string provenance;  // of the fired rule
};

struct NerveRecord {
  NerveResult result;
  NerveState final_state = NerveState::start;
  std::vector<NerveStep> steps;
  std::size_t lookups = 0;
};

struct TraceEvent {
  int phase = 0;
  std::string subject;  // segment "median:left:motor#2", nerve selector, or "patient"
  std::string message;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

/// Blackboard for one exam. Stores are write-once.
class WorkingMemory {
 public:
  void write_interpretations(std::vector<InterpretedSegment> v) { write(phase1_, std::move(v), 1); }
  void write_segment_diagnoses(std::vector<DiagnosedSegment> v) { write(phase2_, std::move(v), 2); }
  void write_nerve_records(std::vector<NerveRecord> v) { write(phase3_, std::move(v), 3); }
  void write_patient_decision(PatientDecision d) { write(phase4_, std::move(d), 4); }

  const std::vector<InterpretedSegment>& interpretations() const { return read(phase1_, 1); }
  const std::vector<DiagnosedSegment>& segment_diagnoses() const { return read(phase2_, 2); }
  const std::vector<NerveRecord>& nerve_records() const { return read(phase3_, 3); }
  const PatientDecision& patient_decision() const { return read(phase4_, 4); }

  bool has_interpretations() const { return phase1_.has_value(); }
  bool has_segment_diagnoses() const { return phase2_.has_value(); }

  /// Drops a completed store. Later phases must not need it.
  void discard_interpretations() { phase1_.reset(); }
  void discard_segment_diagnoses() { phase2_.reset(); }

  void log(int phase, std::string subject, std::string message) {
    trace_.push_back({phase, std::move(subject), std::move(message)});
  }
  const std::vector<TraceEvent>& trace() const { return trace_; }

 private:
  template <class T>
  static void write(std::optional<T>& store, T value, int phase) {
    if (store) throw std::logic_error("phase " + std::to_string(phase) + " store already written");
    store = std::move(value);
  }
  template <class T>
  static const T& read(const std::optional<T>& store, int phase) {
    if (!store) throw std::logic_error("phase " + std::to_string(phase) + " store not available");
    return *store;
  }

  std::optional<std::vector<InterpretedSegment>> phase1_;
  std::optional<std::vector<DiagnosedSegment>> phase2_;
  std::optional<std::vector<NerveRecord>> phase3_;
  std::optional<PatientDecision> phase4_;
  std::vector<TraceEvent> trace_;
};

inline std::string segment_subject(const NerveId& nerve, int index) {
  return nerve.selector() + "#" + std::to_string(index);
}

namespace detail {

inline std::string facts_str(const FactSet& facts) {
  std::string out;
  for (const auto& [k, v] : facts) out += (out.empty() ? "" : " ") + k + "=" + v;
  return out;
}

[[noreturn]] inline void rethrow_in_phase(const Error& e, int phase, const std::string& subject) {
  std::vector<Diagnostic> diags;
  for (auto d : e.diagnostics()) {
    d.message = "phase " + std::to_string(phase) + ", " + subject + ": " + d.message;
    diags.push_back(std::move(d));
  }
  throw Error(e.kind(), std::move(diags));
}

}  // namespace detail

/// Exam nerves in canonical order.
inline std::vector<const NerveStudy*> canonical_nerves(const Exam& exam) {
  std::vector<const NerveStudy*> out;
  for (const auto& n : exam.nerves) out.push_back(&n);
  std::stable_sort(out.begin(), out.end(),
                   [](const NerveStudy* a, const NerveStudy* b) { return canonical_less(a->nerve, b->nerve); });
  return out;
}

inline void phase1_interpret(const Exam& exam, const KnowledgeBase& kb, WorkingMemory& wm) {
  std::vector<InterpretedSegment> store;
  for (const auto* study : canonical_nerves(exam)) {
    for (const auto& seg : study->segments) {
      const auto type = segment_type_for(study->nerve.fibre, seg.index);
      const auto subject = segment_subject(study->nerve, seg.index);
      FactSet facts;
      try {
        facts = interpret_segment(seg, type, kb.thresholds);
      } catch (const Error& e) {
        detail::rethrow_in_phase(e, 1, subject);
      }
      wm.log(1, subject, std::string(to_string(type)) + ": " + detail::facts_str(facts));
      store.push_back({study->nerve, seg.index, type, std::move(facts)});
    }
  }
  wm.write_interpretations(std::move(store));
}

inline void phase2_segment_diagnosis(const KnowledgeBase& kb, WorkingMemory& wm) {
  std::vector<DiagnosedSegment> store;
  for (const auto& in : wm.interpretations()) {
    const auto& rules = kb.level1.for_type(in.type);
    auto d = classify_facts(in.facts, rules);
    const auto subject = segment_subject(in.nerve, in.index);
    std::string provenance;
    if (d.firing) {
      provenance = rules.rules[d.firing->rule_index].provenance;
      wm.log(2, subject, "rule " + d.firing->rule_name + " (" + rules.name + ") fired: lesion = " + d.firing->value);
    } else {
      wm.log(2, subject, "no rule in " + rules.name + " matched: unclassified, counted as pathological");
    }
    store.push_back({in.nerve, in.index, in.type, d.dx, std::move(d.firing), std::move(provenance)});
  }
  wm.write_segment_diagnoses(std::move(store));
}

/// Pure per-nerve level-2 step; safe to run concurrently for distinct nerves.
inline NerveRecord diagnose_nerve(const NerveId& nerve, std::span<const SegmentDx> segments,
                                  const NerveAutomaton& automaton) {
  NerveRecord rec{{nerve, to_chain(segments), NerveDx::normal}, NerveState::start, {}, 0};
  NerveRunTrace trace;
  rec.final_state = run(rec.result.chain, automaton, &trace);
  rec.result.dx = state_to_dx(rec.final_state);
  rec.steps = std::move(trace.steps);
  rec.lookups = trace.lookups;
  return rec;
}

inline void phase3_nerve_diagnosis(const KnowledgeBase& kb, WorkingMemory& wm) {
  // Group segment diagnoses by nerve, preserving phase-2 order.
  std::vector<std::pair<NerveId, std::vector<SegmentDx>>> groups;
  for (const auto& s : wm.segment_diagnoses()) {
    if (groups.empty() || groups.back().first != s.nerve) groups.push_back({s.nerve, {}});
    groups.back().second.push_back(s.dx);
  }
  std::vector<NerveRecord> store;
  for (const auto& [nerve, dxs] : groups) {
    std::optional<NerveRecord> rec;
    try {
      rec = diagnose_nerve(nerve, dxs, kb.automaton);
    } catch (const Error& e) {
      detail::rethrow_in_phase(e, 3, nerve.selector());
    }
    std::string path = "start";
    for (const auto& st : rec->steps)
      path += (st.absorbed ? " =" : " -") + std::to_string(st.symbol) + (st.absorbed ? "=> " : "-> ") +
              std::string(to_string(st.to));
    wm.log(3, nerve.selector(), "chain [" + rec->result.chain.str() + "]: " + path + " => " +
                                    std::string(to_string(rec->result.dx)));
    store.push_back(std::move(*rec));
  }
  wm.write_nerve_records(std::move(store));
}

inline void phase4_patient_diagnosis(const KnowledgeBase& kb, WorkingMemory& wm) {
  std::vector<NerveResult> results;
  for (const auto& r : wm.nerve_records()) results.push_back(r.result);
  auto decision = patient_dx(summarize(std::move(results)), kb.level3);
  wm.log(4, "patient",
         detail::facts_str(decision.facts) + ": precedence rule " + std::to_string(decision.precedence) + " (" +
             decision.rule_name + ") selected: " + std::string(to_string(decision.dx)));
  wm.write_patient_decision(std::move(decision));
}

struct SegmentReport {
  NerveId nerve;
  int index = 1;
  SegmentType type = SegmentType::sensory_any;
  FactSet facts;
  SegmentDx dx = SegmentDx::unclassified;
  std::string rule;  // empty when unclassified
  std::string provenance;
};

struct NerveReport {
  NerveId nerve;
  SegmentStateChain chain{std::vector<SegmentSymbol>{0}};
  NerveState final_state = NerveState::start;
  std::vector<NerveStep> steps;
  NerveDx dx = NerveDx::normal;
};

struct DiagnosisReport {
  std::string patient_id;
  std::string kb_fingerprint;
  std::vector<SegmentReport> segments;
  std::vector<NerveReport> nerves;
  FactSet summary;  // level-3 predicates
  PatientDx patient_dx = PatientDx::uncertain_diagnosis;
  std::string patient_rule;
  std::size_t precedence = 0;
  std::vector<TraceEvent> trace;

  std::size_t unclassified_segments() const {
    return static_cast<std::size_t>(std::count_if(segments.begin(), segments.end(), [](const SegmentReport& s) {
      return s.dx == SegmentDx::unclassified;
    }));
  }
};

inline DiagnosisReport build_report(const Exam& exam, const KnowledgeBase& kb, const WorkingMemory& wm) {
  DiagnosisReport r;
  r.patient_id = exam.patient_id;
  r.kb_fingerprint = kb.fingerprint;
  const auto& facts = wm.interpretations();
  const auto& dxs = wm.segment_diagnoses();
  for (std::size_t i = 0; i < dxs.size(); ++i) {
    const auto& d = dxs[i];
    r.segments.push_back({d.nerve, d.index, d.type, facts[i].facts, d.dx, d.firing ? d.firing->rule_name : "",
                          d.provenance});
  }
  for (const auto& n : wm.nerve_records())
    r.nerves.push_back({n.result.nerve, n.result.chain, n.final_state, n.steps, n.result.dx});
  const auto& decision = wm.patient_decision();
  r.summary = decision.facts;
  r.patient_dx = decision.dx;
  r.patient_rule = decision.rule_name;
  r.precedence = decision.precedence;
  r.trace = wm.trace();
  return r;
}

/// Validates the exam against the KB's nerve catalogue, then runs phases 1-4.
inline DiagnosisReport run_exam(const Exam& exam, const KnowledgeBase& kb) {
  require_valid(exam, &kb.catalogue);
  WorkingMemory wm;
  phase1_interpret(exam, kb, wm);
  phase2_segment_diagnosis(kb, wm);
  phase3_nerve_diagnosis(kb, wm);
  phase4_patient_diagnosis(kb, wm);
  return build_report(exam, kb, wm);
}

}  // namespace neurop
