#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

namespace neurop::fsm {

/// One consumed symbol. `absorbed` marks symbols read while already in an
/// absorbing state; those are not table lookups.
template <class State, class Symbol>
struct Step {
  State from;
  Symbol symbol;
  State to;
  bool absorbed = false;

  friend bool operator==(const Step&, const Step&) = default;
};

template <class State, class Symbol>
struct RunTrace {
  std::vector<Step<State, Symbol>> steps;
  std::size_t lookups = 0;
};

/// Deterministic automaton over a finite alphabet with a table-driven
/// transition function. The table is built incrementally; `missing()` and
/// the insert result let loaders check totality and functionality.
template <class State, class Symbol>
class Dfa {
 public:
  Dfa(State initial, std::set<State> finals, std::vector<Symbol> alphabet)
      : initial_(initial), finals_(std::move(finals)), alphabet_(std::move(alphabet)) {}

  /// False if (from, symbol) already has a successor.
  bool add_transition(State from, Symbol symbol, State to) {
    if (!delta_.emplace(std::pair{from, symbol}, to).second) return false;
    if (is_self_loop_on_all(from))
      absorbing_.insert(from);
    else
      absorbing_.erase(from);
    return true;
  }

  std::optional<State> transition(State from, Symbol symbol) const {
    auto it = delta_.find(std::pair{from, symbol});
    if (it == delta_.end()) return std::nullopt;
    return it->second;
  }

  std::vector<std::pair<State, Symbol>> missing(std::span<const State> states) const {
    std::vector<std::pair<State, Symbol>> out;
    for (auto q : states)
      for (auto a : alphabet_)
        if (!delta_.count(std::pair{q, a})) out.emplace_back(q, a);
    return out;
  }

  /// A state every symbol of the alphabet maps back to itself.
  bool absorbing(State q) const { return absorbing_.count(q) != 0; }

  State initial() const { return initial_; }
  const std::set<State>& finals() const { return finals_; }
  bool is_final(State q) const { return finals_.count(q) != 0; }
  std::size_t size() const { return delta_.size(); }
  const std::vector<Symbol>& alphabet() const { return alphabet_; }
  const std::map<std::pair<State, Symbol>, State>& table() const { return delta_; }

  /// δ(q, a). Throws std::out_of_range for a missing entry.
  State step(State q, Symbol a) const { return delta_.at(std::pair{q, a}); }

  /// Left fold of `step` from the initial state. Once an absorbing state is
  /// reached the remaining symbols are consumed without lookups.
  State run(std::span<const Symbol> input, RunTrace<State, Symbol>* trace = nullptr) const {
    State q = initial_;
    bool absorbed = false;
    for (auto a : input) {
      if (!absorbed) {
        State next = step(q, a);
        if (trace) {
          trace->steps.push_back({q, a, next, false});
          ++trace->lookups;
        }
        q = next;
        absorbed = absorbing(q);
      } else if (trace) {
        trace->steps.push_back({q, a, q, true});
      }
    }
    return q;
  }

 private:
  bool is_self_loop_on_all(State q) const {
    return std::all_of(alphabet_.begin(), alphabet_.end(), [&](Symbol a) {
      auto it = delta_.find(std::pair{q, a});
      return it != delta_.end() && it->second == q;
    });
  }

  State initial_;
  std::set<State> finals_;
  std::vector<Symbol> alphabet_;
  std::map<std::pair<State, Symbol>, State> delta_;
  std::set<State> absorbing_;
};

}  // namespace neurop::fsm
