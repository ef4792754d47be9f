#pragma once

// Level 2: nerve diagnosis from the spatial distribution of pathological
// segments. A chain of segment states (0 normal, 1 affected) is read by a
// finite automaton whose transition table comes from `automaton.tr`:
//
//   <state> <symbol> <state>      # 14 lines, one per (state, symbol)
//
// States: start (initial, non-final), n, f_a, f_b, m_f_a, m_f_b, d.

#include <array>
#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "neurop/detail/text.hpp"
#include "neurop/domain.hpp"
#include "neurop/error.hpp"
#include "neurop/fsm.hpp"

namespace neurop {

enum class NerveState { start, n, f_a, f_b, m_f_a, m_f_b, d };
inline constexpr std::array<std::string_view, 7> nerve_state_names{"start", "n", "f_a", "f_b", "m_f_a", "m_f_b", "d"};
inline constexpr std::array<NerveState, 7> all_nerve_states{NerveState::start, NerveState::n,     NerveState::f_a,
                                                            NerveState::f_b,   NerveState::m_f_a, NerveState::m_f_b,
                                                            NerveState::d};
inline std::string_view to_string(NerveState s) { return detail::enum_name(nerve_state_names, s); }

using SegmentSymbol = int;  // 0 normal, 1 affected
inline constexpr std::array<SegmentSymbol, 2> segment_alphabet{0, 1};
inline constexpr std::size_t max_chain_length = 5;

/// Non-empty word over {0, 1} of length at most 5.
class SegmentStateChain {
 public:
  explicit SegmentStateChain(std::vector<SegmentSymbol> symbols) : symbols_(std::move(symbols)) {
    if (symbols_.empty()) throw Error(ErrorKind::diagnosis, "segment state chain is empty");
    if (symbols_.size() > max_chain_length)
      throw Error(ErrorKind::diagnosis, "segment state chain longer than " + std::to_string(max_chain_length));
    for (auto s : symbols_)
      if (s != 0 && s != 1) throw Error(ErrorKind::diagnosis, "segment state symbol must be 0 or 1");
  }

  std::span<const SegmentSymbol> symbols() const { return symbols_; }
  std::size_t size() const { return symbols_.size(); }
  SegmentSymbol operator[](std::size_t i) const { return symbols_[i]; }

  std::size_t affected() const {
    std::size_t n = 0;
    for (auto s : symbols_) n += static_cast<std::size_t>(s);
    return n;
  }

  SegmentStateChain reversed() const { return SegmentStateChain({symbols_.rbegin(), symbols_.rend()}); }

  /// e.g. "0 1 0 0 0"
  std::string str() const {
    std::string out;
    for (auto s : symbols_) {
      if (!out.empty()) out += ' ';
      out += static_cast<char>('0' + s);
    }
    return out;
  }

  friend bool operator==(const SegmentStateChain&, const SegmentStateChain&) = default;

 private:
  std::vector<SegmentSymbol> symbols_;
};

/// 1 for every segment whose diagnosis is not normal; lesion kind is dropped.
inline SegmentStateChain to_chain(std::span<const SegmentDx> diagnoses) {
  if (diagnoses.empty()) throw Error(ErrorKind::diagnosis, "cannot build a chain from zero segments");
  std::vector<SegmentSymbol> symbols;
  symbols.reserve(diagnoses.size());
  for (auto d : diagnoses) symbols.push_back(is_pathological(d) ? 1 : 0);
  return SegmentStateChain(std::move(symbols));
}

using NerveAutomaton = fsm::Dfa<NerveState, SegmentSymbol>;
using NerveRunTrace = fsm::RunTrace<NerveState, SegmentSymbol>;
using NerveStep = fsm::Step<NerveState, SegmentSymbol>;

inline std::set<NerveState> nerve_final_states() {
  return {NerveState::n, NerveState::f_a, NerveState::f_b, NerveState::m_f_a, NerveState::m_f_b, NerveState::d};
}

inline constexpr std::size_t nerve_transition_count = all_nerve_states.size() * segment_alphabet.size();

inline NerveAutomaton parse_automaton(std::string_view text, std::string_view source = "automaton.tr") {
  NerveAutomaton dfa(NerveState::start, nerve_final_states(), {segment_alphabet.begin(), segment_alphabet.end()});
  std::vector<Diagnostic> errors;
  auto fail = [&](std::size_t line, std::size_t col, std::string msg) {
    errors.push_back({std::string(source), line, col, std::move(msg)});
  };

  auto lines = detail::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto ln = i + 1;
    auto w = detail::split_words(detail::strip_comment(lines[i]));
    if (w.empty()) continue;
    if (w.size() != 3) {
      fail(ln, w[0].column, "expected '<state> <symbol> <state>'");
      continue;
    }
    auto from = detail::enum_from_name<NerveState>(nerve_state_names, w[0].text);
    auto to = detail::enum_from_name<NerveState>(nerve_state_names, w[2].text);
    std::optional<SegmentSymbol> symbol;
    if (w[1].text == "0") symbol = 0;
    if (w[1].text == "1") symbol = 1;

    if (!from) {
      fail(ln, w[0].column, "unknown state '" + std::string(w[0].text) + "'");
      continue;
    }
    if (!symbol) {
      const bool looks_like_state = detail::enum_from_name<NerveState>(nerve_state_names, w[1].text).has_value();
      fail(ln, w[1].column,
           looks_like_state ? "misordered fields: found state '" + std::string(w[1].text) +
                                  "' where the input symbol (0 or 1) belongs"
                            : "input symbol must be 0 or 1, got '" + std::string(w[1].text) + "'");
      continue;
    }
    if (!to) {
      fail(ln, w[2].column, "unknown state '" + std::string(w[2].text) + "'");
      continue;
    }
    if (!dfa.is_final(*to)) {
      fail(ln, w[2].column, "resulting state '" + std::string(w[2].text) + "' is not final");
      continue;
    }
    if (!dfa.add_transition(*from, *symbol, *to))
      fail(ln, w[0].column,
           "δ not functional at (" + std::string(w[0].text) + "," + std::string(w[1].text) + ")");
  }

  for (auto [q, a] : dfa.missing(all_nerve_states))
    fail(0, 0, "δ not total at (" + std::string(to_string(q)) + "," + std::to_string(a) + ")");
  if (errors.empty() && dfa.size() != nerve_transition_count)
    fail(0, 0, "expected " + std::to_string(nerve_transition_count) + " transitions, found " +
                   std::to_string(dfa.size()));
  if (!errors.empty()) throw Error(ErrorKind::kb_invalid, std::move(errors));
  return dfa;
}

inline NerveState step(NerveState s, SegmentSymbol a, const NerveAutomaton& def) {
  if (a != 0 && a != 1) throw Error(ErrorKind::diagnosis, "input symbol must be 0 or 1");
  auto next = def.transition(s, a);
  if (!next)
    throw Error(ErrorKind::kb_invalid,
                "missing transition at (" + std::string(to_string(s)) + "," + std::to_string(a) + ")");
  return *next;
}

inline NerveState run(const SegmentStateChain& chain, const NerveAutomaton& def, NerveRunTrace* trace = nullptr) {
  return def.run(chain.symbols(), trace);
}

inline NerveDx state_to_dx(NerveState s) {
  switch (s) {
    case NerveState::n: return NerveDx::normal;
    case NerveState::f_a:
    case NerveState::f_b: return NerveDx::focal;
    case NerveState::m_f_a:
    case NerveState::m_f_b: return NerveDx::multiple_focal;
    case NerveState::d: return NerveDx::diffuse;
    case NerveState::start: break;
  }
  throw Error(ErrorKind::diagnosis, "state 'start' is not final: the chain was empty");
}

inline NerveDx nerve_diagnosis(const SegmentStateChain& chain, const NerveAutomaton& def) {
  return state_to_dx(run(chain, def));
}

/// Every chain of length 1..5 in length-then-lexicographic order (62 chains).
inline std::vector<SegmentStateChain> all_chains() {
  std::vector<SegmentStateChain> out;
  for (std::size_t len = 1; len <= max_chain_length; ++len)
    for (unsigned bits = 0; bits < (1u << len); ++bits) {
      std::vector<SegmentSymbol> s(len);
      for (std::size_t i = 0; i < len; ++i) s[i] = static_cast<SegmentSymbol>((bits >> (len - 1 - i)) & 1u);
      out.emplace_back(std::move(s));
    }
  return out;
}

struct EnumerationRow {
  SegmentStateChain chain;
  NerveState final_state;
  NerveDx dx;
};

inline std::vector<EnumerationRow> enumerate_all(const NerveAutomaton& def) {
  std::vector<EnumerationRow> rows;
  for (auto& chain : all_chains()) {
    auto q = run(chain, def);
    rows.push_back({chain, q, state_to_dx(q)});
  }
  return rows;
}

}  // namespace neurop
