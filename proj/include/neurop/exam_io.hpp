#pragma once

// Exam documents (JSON):
//
//   {
//     "patient_id": "P-001",
//     "nerves": [
//       { "name": "median", "side": "left", "fibre": "motor",
//         "segments": [ { "index": 1, "amplitude": 7.1, "distal_latency": 3.4 }, ... ] }
//     ]
//   }
//
// Units: amplitude mV (motor) or µV (sensory), velocity m/s, distal_latency
// ms, amplitude_ratio dimensionless. Type errors are reported with the JSON
// path of the offending value.

#include <array>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "neurop/domain.hpp"
#include "neurop/error.hpp"

namespace neurop {

namespace detail {

class ExamReader {
 public:
  Exam read(const nlohmann::json& doc) {
    Exam exam;
    if (!doc.is_object()) {
      fail("$", "exam document must be an object");
      return exam;
    }
    check_keys(doc, "", {"patient_id", "nerves"});
    if (auto it = doc.find("patient_id"); it == doc.end() || !it->is_string())
      fail("patient_id", "expected a string");
    else
      exam.patient_id = it->get<std::string>();

    auto nerves = doc.find("nerves");
    if (nerves == doc.end() || !nerves->is_array()) {
      fail("nerves", "expected an array");
      return exam;
    }
    for (std::size_t i = 0; i < nerves->size(); ++i) exam.nerves.push_back(read_nerve((*nerves)[i], "nerves[" + std::to_string(i) + "]"));
    return exam;
  }

  std::vector<Diagnostic> errors;

 private:
  void fail(const std::string& path, const std::string& message) { errors.push_back({{}, 0, 0, path + ": " + message}); }

  void check_keys(const nlohmann::json& obj, const std::string& path, std::set<std::string_view> allowed) {
    for (const auto& [key, _] : obj.items())
      if (!allowed.count(key)) fail(path.empty() ? key : path + "." + key, "unknown field");
  }

  template <class Enum, std::size_t N>
  Enum read_enum(const nlohmann::json& obj, const std::string& path, const char* key,
                 const std::array<std::string_view, N>& names) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string()) {
      fail(path + "." + key, "expected a string");
      return Enum{};
    }
    auto v = enum_from_name<Enum>(names, it->get<std::string>());
    if (!v) {
      std::string allowed;
      for (auto n : names) allowed += (allowed.empty() ? "" : ", ") + std::string(n);
      fail(path + "." + key, "expected one of {" + allowed + "}");
      return Enum{};
    }
    return *v;
  }

  NerveStudy read_nerve(const nlohmann::json& obj, const std::string& path) {
    NerveStudy study;
    if (!obj.is_object()) {
      fail(path, "expected an object");
      return study;
    }
    check_keys(obj, path, {"name", "side", "fibre", "segments"});
    if (auto it = obj.find("name"); it == obj.end() || !it->is_string())
      fail(path + ".name", "expected a string");
    else
      study.nerve.name = it->get<std::string>();
    study.nerve.side = read_enum<Side>(obj, path, "side", side_names);
    study.nerve.fibre = read_enum<FibreType>(obj, path, "fibre", fibre_names);

    auto segs = obj.find("segments");
    if (segs == obj.end() || !segs->is_array()) {
      fail(path + ".segments", "expected an array");
      return study;
    }
    for (std::size_t i = 0; i < segs->size(); ++i)
      study.segments.push_back(read_segment((*segs)[i], path + ".segments[" + std::to_string(i) + "]"));
    return study;
  }

  SegmentMeasurements read_segment(const nlohmann::json& obj, const std::string& path) {
    SegmentMeasurements m;
    if (!obj.is_object()) {
      fail(path, "expected an object");
      return m;
    }
    check_keys(obj, path, {"index", "amplitude", "velocity", "distal_latency", "amplitude_ratio"});
    if (auto it = obj.find("index"); it == obj.end() || !it->is_number_integer())
      fail(path + ".index", "expected an integer");
    else
      m.index = it->get<int>();
    for (auto v : all_variables) {
      const std::string key(to_string(v));
      auto it = obj.find(key);
      if (it == obj.end() || it->is_null()) continue;
      if (!it->is_number()) {
        fail(path + "." + key, "expected a number");
        continue;
      }
      m.get(v) = it->get<double>();
    }
    return m;
  }
};

}  // namespace detail

inline Exam exam_from_json(const nlohmann::json& doc) {
  detail::ExamReader reader;
  auto exam = reader.read(doc);
  if (!reader.errors.empty()) throw Error(ErrorKind::exam_parse, std::move(reader.errors));
  return exam;
}

inline Exam parse_exam(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::exam_parse, std::string("$: invalid JSON: ") + e.what());
  }
  return exam_from_json(doc);
}

inline nlohmann::json exam_to_json(const Exam& exam) {
  nlohmann::json nerves = nlohmann::json::array();
  for (const auto& n : exam.nerves) {
    nlohmann::json segs = nlohmann::json::array();
    for (const auto& s : n.segments) {
      nlohmann::json seg{{"index", s.index}};
      for (auto v : all_variables)
        if (const auto& value = s.get(v)) seg[std::string(to_string(v))] = *value;
      segs.push_back(std::move(seg));
    }
    nerves.push_back({{"name", n.nerve.name},
                      {"side", std::string(to_string(n.nerve.side))},
                      {"fibre", std::string(to_string(n.nerve.fibre))},
                      {"segments", std::move(segs)}});
  }
  return {{"patient_id", exam.patient_id}, {"nerves", std::move(nerves)}};
}

}  // namespace neurop
