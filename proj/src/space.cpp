#include "infprod/space.hpp"

#include <algorithm>
#include <set>

#include "infprod/error.hpp"

namespace infprod {

CoordinateSpace::CoordinateSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw Error(ErrorKind::Validation, "coordinate space needs at least one symbol");
  std::set<std::string> seen;
  for (const auto& l : labels_) {
    if (!seen.insert(l).second) throw Error(ErrorKind::Validation, "duplicate symbol '" + l + "'");
  }
}

std::optional<Symbol> CoordinateSpace::find(std::string_view label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<Symbol>(it - labels_.begin());
}

Symbol CoordinateSpace::symbol(std::string_view label) const {
  if (auto s = find(label)) return *s;
  throw Error(ErrorKind::Validation, "unknown symbol '" + std::string(label) + "'");
}

bool SpaceFamily::frozen_from(Index from) const {
  if (tail_.size() > 1) return false;
  for (Index i = from; i <= head_.size(); ++i) {
    if (head_[i - 1].size() > 1) return false;
  }
  return true;
}

Symbol rule_symbol(const SymbolRule& rule, Index i) {
  if (const auto* c = std::get_if<ConstantSymbol>(&rule)) return c->symbol;
  const auto& cycle = std::get<PeriodicSymbols>(rule).cycle;
  return cycle[(i - 1) % cycle.size()];
}

std::size_t rule_period(const SymbolRule& rule) {
  if (std::holds_alternative<ConstantSymbol>(rule)) return 1;
  return std::get<PeriodicSymbols>(rule).cycle.size();
}

}  // namespace infprod
