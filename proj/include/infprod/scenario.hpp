#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "infprod/function.hpp"
#include "infprod/games.hpp"
#include "infprod/measure.hpp"
#include "infprod/point.hpp"

namespace infprod {

/// Command defaults a scenario may declare; flags override them.
struct ScenarioDefaults {
  std::optional<double> epsilon;
  std::optional<Index> n_max;
  std::optional<Index> horizon;
  std::optional<Index> depth;
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<std::string> point;
};

enum class GameKind { None, Finite, Naming };

struct Scenario {
  std::string name;
  SpacesPtr spaces;
  std::shared_ptr<const ProductMeasure> measure;
  std::optional<TailFunction> function;
  std::map<std::string, PointSpec> points;
  /// Minimum certified fraction per command, e.g. "verify-strong".
  std::map<std::string, double> thresholds;
  ScenarioDefaults defaults;
  GameKind game_kind = GameKind::None;
  std::optional<GameSpec> game;
  /// FNV-1a 64 of the canonical (sorted-key, compact) form, as 16 hex digits.
  std::string digest;

  /// Named point, or one of "all-<label>" for a constant described point.
  PointSpec point(const std::string& name) const;
  const TailFunction& require_function() const;
};

/// Parse errors carry "line L, column C"; validation errors carry the JSON
/// path of the offending entry.
Scenario parse_scenario(std::string_view text, const std::string& origin = "<input>");
Scenario load_scenario(const std::filesystem::path& path);

std::vector<std::string> builtin_scenarios();
Scenario builtin_scenario(std::string_view name);
std::string_view builtin_scenario_text(std::string_view name);

/// A path to an existing file, otherwise a built-in name.
Scenario resolve_scenario(const std::string& path_or_name);

}  // namespace infprod
