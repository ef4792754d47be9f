#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "neurop/cli.hpp"
#include "test_support.hpp"

using namespace neurop;
using namespace neurop::cli;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

template <class F>
Run capture(F&& f) {
  std::ostringstream out, err;
  Run r;
  r.code = f(out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::filesystem::path sample(const char* name) { return fixtures::samples() / name; }

Run diagnose(const std::filesystem::path& exam, Format format = Format::text,
             const std::filesystem::path& kb = fixtures::default_kb()) {
  return capture([&](std::ostream& o, std::ostream& e) { return cmd_diagnose(exam, kb, format, o, e); });
}

Run trace(const std::filesystem::path& exam, const std::string& selector) {
  return capture([&](std::ostream& o, std::ostream& e) { return cmd_trace(exam, fixtures::default_kb(), selector, o, e); });
}

Run validate(const std::filesystem::path& kb) {
  return capture([&](std::ostream& o, std::ostream& e) { return cmd_validate_kb(kb, o, e); });
}

bool contains(const std::string& haystack, const std::string& needle) { return haystack.find(needle) != std::string::npos; }

}  // namespace

TEST(Diagnose, TextReportEndsWithPatientLine) {
  auto r = diagnose(sample("sample_exam.json"));
  EXPECT_EQ(r.code, exit_ok);
  EXPECT_TRUE(r.err.empty());
  const std::string last = "patient diagnosis: symmetrical_poly_neuropathy\n";
  ASSERT_GE(r.out.size(), last.size());
  EXPECT_EQ(r.out.substr(r.out.size() - last.size()), last);
  EXPECT_TRUE(contains(r.out, "median:left:motor"));
}

TEST(Diagnose, MalformedExamNamesThePath) {
  fixtures::TempDir dir;
  fixtures::write(dir / "bad.json",
                  R"({"patient_id": "x", "nerves": [{"name": "median", "side": "left", "fibre": "motor",
                      "segments": [{"index": 1, "amplitude": "big", "distal_latency": 3.0}]}]})");
  auto r = diagnose(dir / "bad.json");
  EXPECT_EQ(r.code, exit_exam_parse);
  EXPECT_TRUE(r.out.empty());
  EXPECT_TRUE(contains(r.err, "bad.json"));
  EXPECT_TRUE(contains(r.err, "nerves[0].segments[0].amplitude"));

  fixtures::write(dir / "syntax.json", "{ not json");
  EXPECT_EQ(diagnose(dir / "syntax.json").code, exit_exam_parse);
  EXPECT_EQ(diagnose(dir / "absent.json").code, exit_io);
}

TEST(Diagnose, InvalidExamAndKb) {
  fixtures::TempDir dir;
  fixtures::write(dir / "dup.json",
                  R"({"patient_id": "x", "nerves": [
                      {"name": "median", "side": "left", "fibre": "sensory", "segments": [{"index": 1, "amplitude": 12, "velocity": 50}]},
                      {"name": "median", "side": "left", "fibre": "sensory", "segments": [{"index": 1, "amplitude": 12, "velocity": 50}]}]})");
  auto r = diagnose(dir / "dup.json");
  EXPECT_EQ(r.code, exit_exam_invalid);
  EXPECT_TRUE(contains(r.err, "duplicate nerve"));

  fixtures::KbCopy kb;
  std::filesystem::remove(kb / "automaton.tr");
  EXPECT_EQ(diagnose(sample("sample_exam.json"), Format::text, kb.path()).code, exit_kb_invalid);
}

TEST(Diagnose, JsonReportCarriesTraceAndRoundTrips) {
  auto r = diagnose(sample("sample_exam.json"), Format::json);
  ASSERT_EQ(r.code, exit_ok);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["patient"]["dx"], "symmetrical_poly_neuropathy");
  EXPECT_FALSE(j["trace"].empty());
  EXPECT_EQ(j["nerves"].size(), 4u);
  EXPECT_EQ(j["kb_fingerprint"], load_kb(fixtures::default_kb()).fingerprint);

  auto report = report_from_json(j);
  EXPECT_EQ(to_json(report), j);
  auto direct = run_exam(load_exam(sample("sample_exam.json")), load_kb(fixtures::default_kb()));
  EXPECT_EQ(to_text(report), to_text(direct));
}

TEST(ValidateKb, ShippedKbPasses) {
  auto r = validate(fixtures::default_kb());
  EXPECT_EQ(r.code, exit_ok);
  EXPECT_TRUE(contains(r.out, "14 transitions"));
  EXPECT_TRUE(contains(r.out, "fingerprint: fnv1a64:"));
  EXPECT_FALSE(contains(r.out, "FAIL"));
}

TEST(ValidateKb, DuplicatedTransitionFails) {
  fixtures::KbCopy kb;
  kb.write_file("automaton.tr", kb.read_file("automaton.tr") + "n 1 d\n");
  auto r = validate(kb.path());
  EXPECT_EQ(r.code, exit_kb_invalid);
  EXPECT_TRUE(contains(r.out, "FAIL  automaton.tr"));
  EXPECT_TRUE(contains(r.out, "δ not functional at (n,1)"));
  EXPECT_TRUE(contains(r.out, "PASS  level3.rules"));
}

TEST(ValidateKb, MissingFileAndMissingDirectory) {
  fixtures::KbCopy kb;
  std::filesystem::remove(kb / "level3.rules");
  auto r = validate(kb.path());
  EXPECT_EQ(r.code, exit_kb_invalid);
  EXPECT_TRUE(contains(r.out, "FAIL  level3.rules"));
  EXPECT_TRUE(contains(r.out, "missing file"));
  EXPECT_EQ(validate(kb / "nowhere").code, exit_io);
}

TEST(Enumerate, SixtyTwoRowsAllAgree) {
  auto r = capture([](std::ostream& o, std::ostream& e) { return cmd_enumerate(fixtures::default_kb(), Format::text, o, e); });
  EXPECT_EQ(r.code, exit_ok);
  EXPECT_TRUE(contains(r.out, "rows: 62, agree: 62/62"));
  std::istringstream lines(r.out);
  std::string line;
  std::size_t rows = 0;
  bool focal = false, diffuse = false;
  while (std::getline(lines, line)) {
    if (line.empty() || (line[0] != '0' && line[0] != '1')) continue;
    ++rows;
    EXPECT_TRUE(line.size() >= 4 && line.substr(line.size() - 4) == "true") << line;
    if (line.rfind("01000 ", 0) == 0) focal = contains(line, "f_b") && contains(line, "focal");
    if (line.rfind("10110 ", 0) == 0) diffuse = contains(line, " d ") && contains(line, "diffuse");
  }
  EXPECT_EQ(rows, 62u);
  EXPECT_TRUE(focal);
  EXPECT_TRUE(diffuse);

  auto j = capture([](std::ostream& o, std::ostream& e) { return cmd_enumerate(fixtures::default_kb(), Format::json, o, e); });
  auto doc = nlohmann::json::parse(j.out);
  EXPECT_EQ(doc["rows"].size(), 62u);
  EXPECT_EQ(doc["agree"], 62);
}

TEST(Trace, MultipleFocalNerve) {
  auto r = trace(sample("multifocal_exam.json"), "ulnar:right:motor");
  ASSERT_EQ(r.code, exit_ok) << r.err;
  EXPECT_TRUE(contains(r.out, "chain [0 1 0 1 0]"));
  EXPECT_TRUE(contains(r.out, "step 5: (m_f_a, 0) -> m_f_b"));
  EXPECT_FALSE(contains(r.out, "step 6"));
  EXPECT_TRUE(contains(r.out, "final state: m_f_b"));
  EXPECT_TRUE(contains(r.out, "nerve diagnosis: multiple_focal"));
}

TEST(Trace, SingleSegmentSensoryNerve) {
  auto r = trace(sample("multifocal_exam.json"), "sural:left:sensory");
  ASSERT_EQ(r.code, exit_ok) << r.err;
  EXPECT_TRUE(contains(r.out, "chain [0]"));
  EXPECT_TRUE(contains(r.out, "step 1: (start, 0) -> n"));
  EXPECT_FALSE(contains(r.out, "step 2"));
  EXPECT_TRUE(contains(r.out, "nerve diagnosis: normal"));
}

TEST(Trace, AbsorbedStepsAreMarked) {
  auto r = trace(sample("sample_exam.json"), "median:right:motor");
  ASSERT_EQ(r.code, exit_ok) << r.err;
  EXPECT_TRUE(contains(r.out, "chain [0 1 1 0 0]"));
  EXPECT_TRUE(contains(r.out, "step 4: (d, 0) -> d  (absorbing, no lookup)"));
}

TEST(Trace, UnknownSelectorListsAvailable) {
  auto r = trace(sample("multifocal_exam.json"), "median:left:motor");
  EXPECT_EQ(r.code, exit_selector);
  EXPECT_TRUE(contains(r.err, "ulnar:right:motor"));
  EXPECT_TRUE(contains(r.err, "sural:left:sensory"));
  EXPECT_EQ(trace(sample("multifocal_exam.json"), "garbage").code, exit_selector);
}

TEST(ExitCodes, DistinctPerErrorKind) {
  std::set<int> codes;
  for (auto k : {ErrorKind::io, ErrorKind::exam_parse, ErrorKind::exam_invalid, ErrorKind::kb_invalid,
                 ErrorKind::diagnosis, ErrorKind::selector, ErrorKind::usage})
    codes.insert(exit_code(k));
  EXPECT_EQ(codes.size(), 7u);
  EXPECT_EQ(codes.count(exit_ok), 0u);
}
