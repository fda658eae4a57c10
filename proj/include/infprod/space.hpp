#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace infprod {

/// 1-based coordinate index.
using Index = std::size_t;
/// Position of a symbol within its coordinate's alphabet.
using Symbol = std::uint32_t;

class CoordinateSpace {
 public:
  explicit CoordinateSpace(std::vector<std::string> labels);

  static CoordinateSpace binary() { return CoordinateSpace({"0", "1"}); }

  std::size_t size() const { return labels_.size(); }
  const std::string& label(Symbol s) const { return labels_.at(s); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<Symbol> find(std::string_view label) const;
  /// Throws Validation when the label is not in the alphabet.
  Symbol symbol(std::string_view label) const;

  friend bool operator==(const CoordinateSpace&, const CoordinateSpace&) = default;

 private:
  std::vector<std::string> labels_;
};

/// Explicit spaces for coordinates 1..T, then one template repeated forever.
class SpaceFamily {
 public:
  SpaceFamily(std::vector<CoordinateSpace> head, CoordinateSpace tail)
      : head_(std::move(head)), tail_(std::move(tail)) {}

  static std::shared_ptr<const SpaceFamily> uniform(CoordinateSpace space) {
    return std::make_shared<const SpaceFamily>(std::vector<CoordinateSpace>{}, std::move(space));
  }
  static std::shared_ptr<const SpaceFamily> binary() { return uniform(CoordinateSpace::binary()); }

  const CoordinateSpace& at(Index i) const { return i <= head_.size() ? head_[i - 1] : tail_; }
  std::size_t head_size() const { return head_.size(); }
  const std::vector<CoordinateSpace>& head() const { return head_; }
  const CoordinateSpace& tail() const { return tail_; }

  /// True when every coordinate has at most one symbol from index `from` on.
  bool frozen_from(Index from) const;

 private:
  std::vector<CoordinateSpace> head_;
  CoordinateSpace tail_;
};

using SpacesPtr = std::shared_ptr<const SpaceFamily>;

// Symbol tails are indexed absolutely: a periodic cycle assigns
// cycle[(i - 1) % period] to coordinate i, independent of where the explicit
// head of a point ends. Symbols are positions in the tail template alphabet.
struct ConstantSymbol {
  Symbol symbol = 0;
  friend bool operator==(const ConstantSymbol&, const ConstantSymbol&) = default;
};
struct PeriodicSymbols {
  std::vector<Symbol> cycle;
  friend bool operator==(const PeriodicSymbols&, const PeriodicSymbols&) = default;
};
using SymbolRule = std::variant<ConstantSymbol, PeriodicSymbols>;

Symbol rule_symbol(const SymbolRule& rule, Index i);
std::size_t rule_period(const SymbolRule& rule);

}  // namespace infprod
