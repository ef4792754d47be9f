#pragma once

#include <cstddef>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace neurop {

/// A (variable, value) binding such as (amplitude, very_decreased).
struct SemanticFact {
  std::string variable;
  std::string value;

  friend bool operator==(const SemanticFact&, const SemanticFact&) = default;
};

/// At most one value per variable, iterated in variable-name order.
class FactSet {
 public:
  using container = std::map<std::string, std::string, std::less<>>;

  FactSet() = default;
  FactSet(std::initializer_list<SemanticFact> facts) {
    for (const auto& f : facts) insert(f.variable, f.value);
  }

  /// Returns false (and leaves the set unchanged) if the variable is already bound.
  bool insert(std::string_view variable, std::string_view value) {
    return values_.emplace(std::string(variable), std::string(value)).second;
  }

  void assign(std::string_view variable, std::string_view value) { values_[std::string(variable)] = value; }

  std::optional<std::string_view> find(std::string_view variable) const {
    if (auto it = values_.find(variable); it != values_.end()) return std::string_view(it->second);
    return std::nullopt;
  }

  bool contains(std::string_view variable) const { return values_.find(variable) != values_.end(); }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  std::vector<SemanticFact> facts() const {
    std::vector<SemanticFact> out;
    out.reserve(values_.size());
    for (const auto& [k, v] : values_) out.push_back({k, v});
    return out;
  }

  friend bool operator==(const FactSet&, const FactSet&) = default;

 private:
  container values_;
};

}  // namespace neurop
