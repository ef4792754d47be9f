#pragma once

#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace neurop {

/// Failure classes. The CLI maps each one to a stable exit code.
enum class ErrorKind {
  io,          // file missing or unreadable
  exam_parse,  // exam document malformed
  exam_invalid,
  kb_invalid,  // any knowledge-base parse or invariant failure
  diagnosis,   // a phase failed on a validated exam
  selector,    // unknown nerve selector
  usage,
};

/// A located message. `line`/`column` are 1-based; 0 means "not applicable".
struct Diagnostic {
  std::string source;
  std::size_t line = 0;
  std::size_t column = 0;
  std::string message;

  std::string str() const {
    std::ostringstream out;
    if (!source.empty()) out << source;
    if (line != 0) {
      out << ':' << line;
      if (column != 0) out << ':' << column;
    }
    if (!source.empty() || line != 0) out << ": ";
    out << message;
    return out.str();
  }
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(message), kind_(kind), diagnostics_{Diagnostic{{}, 0, 0, std::move(message)}} {}

  Error(ErrorKind kind, std::vector<Diagnostic> diagnostics)
      : std::runtime_error(join(diagnostics)), kind_(kind), diagnostics_(std::move(diagnostics)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

 private:
  static std::string join(const std::vector<Diagnostic>& diagnostics) {
    std::string out;
    for (const auto& d : diagnostics) {
      if (!out.empty()) out += '\n';
      out += d.str();
    }
    return out;
  }

  ErrorKind kind_;
  std::vector<Diagnostic> diagnostics_;
};

}  // namespace neurop
