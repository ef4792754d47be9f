#pragma once

// Direct reading of the level-2 rules, independent of the automaton. Used as
// a reference by `enumerate` and the test suites.

#include <cstddef>

#include "neurop/automaton.hpp"
#include "neurop/domain.hpp"

namespace neurop {

/// diffuse: two adjacent affected segments; multiple_focal: several isolated
/// ones; focal: exactly one; normal: none. Adjacency is checked first.
inline NerveDx oracle_dx(const SegmentStateChain& chain) {
  for (std::size_t i = 1; i < chain.size(); ++i)
    if (chain[i - 1] == 1 && chain[i] == 1) return NerveDx::diffuse;
  const auto affected = chain.affected();
  if (affected >= 2) return NerveDx::multiple_focal;
  if (affected == 1) return NerveDx::focal;
  return NerveDx::normal;
}

}  // namespace neurop
