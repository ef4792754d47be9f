#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <stdexcept>
#include <thread>

#include "neurop/exam_io.hpp"
#include "neurop/knowledge_base.hpp"
#include "neurop/pipeline.hpp"
#include "neurop/report.hpp"
#include "test_support.hpp"

using namespace neurop;

namespace {

const KnowledgeBase& kb() {
  static const auto k = load_kb(fixtures::default_kb());
  return k;
}

Exam sample(const std::string& name) { return parse_exam(fixtures::read(fixtures::samples() / name)); }

// Motor nerve; listed segment indices carry a severe axonal drop.
NerveStudy motor(const char* name, Side side, int segments, std::vector<int> lesions = {}) {
  NerveStudy n{{name, side, FibreType::motor}, {}};
  for (int i = 1; i <= segments; ++i) {
    SegmentMeasurements m{i, 7.0, std::nullopt, std::nullopt, std::nullopt};
    if (i == 1) {
      m.distal_latency = 3.5;
    } else {
      m.velocity = 55.0;
      m.amplitude_ratio = 0.95;
    }
    if (std::find(lesions.begin(), lesions.end(), i) != lesions.end()) m.amplitude = 1.5;
    n.segments.push_back(m);
  }
  return n;
}

std::string error_text(const std::filesystem::path& dir) {
  try {
    load_kb(dir);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

std::string json_of(const Exam& e, const KnowledgeBase& k = kb()) { return to_json(run_exam(e, k)).dump(2); }

}  // namespace

TEST(LoadKb, ShippedKnowledgeBase) {
  const auto& k = kb();
  EXPECT_EQ(k.automaton.size(), 14u);
  EXPECT_EQ(k.level3.rules.size(), 7u);
  EXPECT_EQ(k.fingerprint.rfind("fnv1a64:", 0), 0u);
  EXPECT_EQ(k.fingerprint.size(), 8u + 16u);
  EXPECT_EQ(load_kb(fixtures::default_kb()).fingerprint, k.fingerprint);
}

TEST(LoadKb, FingerprintTracksContent) {
  fixtures::KbCopy copy;
  EXPECT_EQ(load_kb(copy.path()).fingerprint, kb().fingerprint);
  copy.write_file("nerves.cat", copy.read_file("nerves.cat") + "# trailing comment\n");
  EXPECT_NE(load_kb(copy.path()).fingerprint, kb().fingerprint);
}

TEST(LoadKb, RemovedTransition) {
  fixtures::KbCopy copy;
  ASSERT_TRUE(copy.replace("automaton.tr", "d     1 d\n", ""));
  EXPECT_NE(error_text(copy.path()).find("δ not total at (d,1)"), std::string::npos);
}

TEST(LoadKb, EmptyRuleFile) {
  fixtures::KbCopy copy;
  copy.write_file("level1_motor_first.rules", "ruleset motor_first target lesion\n");
  EXPECT_NE(error_text(copy.path()).find("ruleset has no rules"), std::string::npos);
}

TEST(LoadKb, MissingFileAndPerFileReport) {
  fixtures::KbCopy copy;
  std::filesystem::remove(copy / "level3.rules");
  auto check = check_kb(copy.path());
  EXPECT_FALSE(check.ok());
  for (const auto& f : check.files) {
    if (f.file == "level3.rules") {
      ASSERT_EQ(f.diagnostics.size(), 1u);
      EXPECT_EQ(f.diagnostics[0].message, "missing file");
    } else {
      EXPECT_TRUE(f.ok()) << f.file;
    }
  }
  try {
    load_kb(copy.path());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kb_invalid);
  }
  try {
    load_kb(copy / "nowhere");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::io);
  }
}

TEST(LoadKb, WrongTargetVariable) {
  fixtures::KbCopy copy;
  ASSERT_TRUE(copy.replace("level3.rules", "target patient", "target lesion"));
  EXPECT_FALSE(error_text(copy.path()).empty());
}

TEST(RunExam, AllNormal) {
  Exam e{"p", {motor("median", Side::left, 3), motor("ulnar", Side::right, 2)}};
  auto r = run_exam(e, kb());
  EXPECT_EQ(r.patient_dx, PatientDx::normal_examination);
  for (const auto& n : r.nerves) {
    EXPECT_EQ(n.chain.affected(), 0u);
    EXPECT_EQ(n.dx, NerveDx::normal);
  }
  EXPECT_EQ(r.segments.size(), 5u);
}

TEST(RunExam, Samples) {
  EXPECT_EQ(run_exam(sample("focal_exam.json"), kb()).patient_dx, PatientDx::focal_mono_neuropathy);
  EXPECT_EQ(run_exam(sample("sample_exam.json"), kb()).patient_dx, PatientDx::symmetrical_poly_neuropathy);
  EXPECT_EQ(run_exam(sample("multifocal_exam.json"), kb()).patient_dx, PatientDx::multiple_focal_neuropathy);

  auto r = run_exam(sample("focal_exam.json"), kb());
  ASSERT_EQ(r.nerves.size(), 1u);
  EXPECT_EQ(r.nerves[0].chain.str(), "0 1 0 0 0");
  EXPECT_EQ(r.nerves[0].final_state, NerveState::f_b);
  EXPECT_EQ(r.segments[1].dx, SegmentDx::severe_axonal);
  EXPECT_EQ(r.segments[1].provenance, "published");
}

TEST(RunExam, UnclassifiedSegmentIsPathologicalAndReported) {
  fixtures::KbCopy copy;
  auto text = copy.read_file("level1_motor_first.rules");
  auto begin = text.find("rule all_normal");
  auto end = text.find("rule severe_mixed");
  text.erase(begin, end - begin);
  copy.write_file("level1_motor_first.rules", text);
  auto k = load_kb(copy.path());

  auto r = run_exam(Exam{"p", {motor("median", Side::left, 3)}}, k);
  EXPECT_EQ(r.unclassified_segments(), 1u);
  EXPECT_EQ(r.segments[0].dx, SegmentDx::unclassified);
  EXPECT_TRUE(r.segments[0].rule.empty());
  EXPECT_EQ(r.nerves[0].chain.str(), "1 0 0");
  EXPECT_EQ(r.patient_dx, PatientDx::focal_mono_neuropathy);
  EXPECT_NE(to_text(r).find("UNCLASSIFIED"), std::string::npos);
}

TEST(RunExam, ReproducibleAndOrderIndependent) {
  auto e = sample("sample_exam.json");
  const auto base = json_of(e);
  EXPECT_EQ(json_of(e), base);
  std::mt19937 rng(11);
  for (int i = 0; i < 10; ++i) {
    std::shuffle(e.nerves.begin(), e.nerves.end(), rng);
    EXPECT_EQ(json_of(e), base);
  }
}

TEST(RunExam, RejectsInvalidExams) {
  Exam unknown{"p", {motor("brachial", Side::left, 2)}};
  try {
    run_exam(unknown, kb());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::exam_invalid);
  }
  Exam empty{"p", {}};
  EXPECT_THROW(run_exam(empty, kb()), Error);
}

TEST(RunExam, PhaseErrorsNameThePhaseAndSubject) {
  auto n = motor("median", Side::left, 2);
  n.segments[0].distal_latency.reset();
  try {
    run_exam(Exam{"p", {n}}, kb());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::diagnosis);
    EXPECT_NE(std::string(e.what()).find("phase 1, median:left:motor#1: required variable missing: distal_latency"),
              std::string::npos);
  }
}

TEST(WorkingMemory, WriteOnceAndReadAfterWrite) {
  WorkingMemory wm;
  EXPECT_THROW(wm.interpretations(), std::logic_error);
  EXPECT_THROW(wm.patient_decision(), std::logic_error);
  wm.write_interpretations({});
  EXPECT_THROW(wm.write_interpretations({}), std::logic_error);
}

TEST(Phases, LaterPhasesReadOnlyTheirPredecessor) {
  auto e = sample("sample_exam.json");
  const auto& k = kb();
  WorkingMemory wm;
  phase1_interpret(e, k, wm);
  phase2_segment_diagnosis(k, wm);
  const auto segs = wm.segment_diagnoses().size();
  wm.discard_interpretations();
  phase3_nerve_diagnosis(k, wm);
  wm.discard_segment_diagnoses();
  phase4_patient_diagnosis(k, wm);
  EXPECT_EQ(wm.patient_decision().dx, PatientDx::symmetrical_poly_neuropathy);
  EXPECT_EQ(segs, 15u);
  EXPECT_EQ(wm.nerve_records().size(), 4u);
  EXPECT_THROW(phase2_segment_diagnosis(k, wm), std::logic_error);
}

TEST(Phases, NerveDiagnosisIsIndependentPerNerve) {
  auto e = sample("multifocal_exam.json");
  e.nerves.push_back(motor("median", Side::left, 5, {2, 3}));
  e.nerves.push_back(motor("median", Side::right, 4, {4}));
  const auto& k = kb();
  WorkingMemory wm;
  phase1_interpret(e, k, wm);
  phase2_segment_diagnosis(k, wm);
  phase3_nerve_diagnosis(k, wm);

  const auto& records = wm.nerve_records();
  std::vector<std::vector<SegmentDx>> inputs(records.size());
  for (const auto& s : wm.segment_diagnoses())
    for (std::size_t i = 0; i < records.size(); ++i)
      if (records[i].result.nerve == s.nerve) inputs[i].push_back(s.dx);

  std::vector<std::optional<NerveRecord>> parallel(records.size());
  std::vector<std::thread> threads;
  for (std::size_t i = records.size(); i-- > 0;)
    threads.emplace_back([&, i] { parallel[i] = diagnose_nerve(records[i].result.nerve, inputs[i], k.automaton); });
  for (auto& t : threads) t.join();

  for (std::size_t i = 0; i < records.size(); ++i) {
    ASSERT_TRUE(parallel[i]);
    EXPECT_EQ(parallel[i]->result.dx, records[i].result.dx);
    EXPECT_EQ(parallel[i]->result.chain, records[i].result.chain);
    EXPECT_EQ(parallel[i]->final_state, records[i].final_state);
    EXPECT_EQ(parallel[i]->lookups, records[i].lookups);
  }
}

TEST(Trace, CoversEverySegmentNerveAndThePatient) {
  auto r = run_exam(sample("sample_exam.json"), kb());
  auto count = [&](int phase, const std::string& subject) {
    return std::count_if(r.trace.begin(), r.trace.end(),
                         [&](const TraceEvent& t) { return t.phase == phase && t.subject == subject; });
  };
  for (const auto& s : r.segments) {
    EXPECT_EQ(count(1, segment_subject(s.nerve, s.index)), 1);
    EXPECT_EQ(count(2, segment_subject(s.nerve, s.index)), 1);
  }
  for (const auto& n : r.nerves) EXPECT_EQ(count(3, n.nerve.selector()), 1);
  EXPECT_EQ(count(4, "patient"), 1);
  EXPECT_EQ(r.trace.size(), 2 * r.segments.size() + r.nerves.size() + 1);
  EXPECT_TRUE(std::is_sorted(r.trace.begin(), r.trace.end(),
                             [](const TraceEvent& a, const TraceEvent& b) { return a.phase < b.phase; }));
  EXPECT_NE(r.trace.back().message.find("symmetrical_poly_neuropathy"), std::string::npos);
}
