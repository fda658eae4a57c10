#pragma once

#include <memory>
#include <string>
#include <vector>

#include "infprod/expectation.hpp"
#include "infprod/martingale.hpp"

namespace infprod {

struct GameAction {
  std::string name;
  TailFunction payoff;  // f_a = u(a, .)
};

/// Player 0 with finitely many actions against countably many opponents.
class GameSpec {
 public:
  /// Every payoff must live on `opponents` and inside `payoff_range`.
  GameSpec(SpacesPtr opponents, std::vector<GameAction> actions, Interval payoff_range);
  /// Range taken as the hull of the payoff ranges.
  GameSpec(SpacesPtr opponents, std::vector<GameAction> actions);

  const SpacesPtr& opponents() const { return opponents_; }
  const std::vector<GameAction>& actions() const { return actions_; }
  const Interval& payoff_range() const { return range_; }

 private:
  SpacesPtr opponents_;
  std::vector<GameAction> actions_;
  Interval range_;
};

/// A profile that is pure from its switch index on.
using FinitisticProfile = HybridMeasure;

struct BestResponse {
  /// Sound enclosure of max_a E[f_a].
  Interval value;
  /// First action whose upper bound is largest.
  std::size_t argmax = 0;
  std::vector<ExpectationResult> per_action;
};

BestResponse best_response_value(const GameSpec& game, const ProductMeasure& pi, const EngineOptions& options = {},
                                 unsigned threads = 1);
BestResponse best_response_value(const GameSpec& game, const FinitisticProfile& pi,
                                 const EngineOptions& options = {}, unsigned threads = 1);

struct PurifyOptions {
  double epsilon = 0.1;
  Index n_max = 60;
  EngineOptions engine;
  TailPolicy policy;
  std::uint64_t seed = 0;
  std::size_t retries = 8;
  unsigned threads = 1;
};

struct ActionCheck {
  std::string action;
  StrongApproxResult search;
  Interval under_profile;  // E_{a (x) tau}[u]
  Interval under_sigma;    // E_{a (x) sigma}[u]
  bool holds = false;      // under_profile.hi <= under_sigma.lo + eps, rounded down
};

struct PurifyResult {
  FinitisticProfile profile;
  Index n = 1;
  PointSpec point;
  std::uint64_t substream = 0;
  std::size_t attempts = 0;
  double residual = 0.0;
  std::vector<ActionCheck> checks;
  BestResponse profile_value;
  BestResponse sigma_value;
};

/// One purification attempt at a given sample; nullopt-like failure is
/// reported through `failure` so callers can collect diagnostics.
struct PurifyAttempt {
  std::optional<PurifyResult> result;
  std::string failure;
};

PurifyAttempt purify_at(const GameSpec& game, const ProductMeasure& sigma, const PointSpec& x,
                        const PurifyOptions& options);

/// Samples x from sigma with substream(seed, attempt) until every payoff
/// admits a common certified switch index n, and returns
/// tau = sigma_1 (x) ... (x) sigma_{n-1} (x) x_n (x) ...
PurifyResult purify(const GameSpec& game, const std::shared_ptr<const ProductMeasure>& sigma,
                    const PurifyOptions& options);

// Naming game: actions (n, j) pay 1 when opponent n plays j.

struct NamingAction {
  Index coordinate = 1;
  Symbol symbol = 0;
};

/// sup_n max_j sigma_n({j}) in closed form over the head and the tail rule.
double naming_game_value(const ProductMeasure& sigma);

/// Smallest Dirac coordinate at or past the switch index, with its symbol.
NamingAction naming_game_exploit(const FinitisticProfile& tau);
/// Product profiles count as finitistic when every coordinate from some
/// index on is Dirac; throws NotFinitistic otherwise.
NamingAction naming_game_exploit(const ProductMeasure& tau);

/// Exact probability that opponent `a.coordinate` plays `a.symbol`.
double naming_payoff(const NamingAction& a, const FinitisticProfile& tau);
double naming_payoff(const NamingAction& a, const ProductMeasure& tau);

/// A seeded finitistic profile on binary coordinates: switch index in
/// 1..max_switch, non-degenerate mixed coordinates below it (some pinned),
/// and a described tail point.
FinitisticProfile random_finitistic_profile(SpacesPtr binary, std::uint64_t seed, Index max_switch = 12);

/// The two-point restriction {(n, 0), (n, 1)} as an ordinary game.
GameSpec naming_game_restriction(SpacesPtr binary, Index coordinate);

}  // namespace infprod
