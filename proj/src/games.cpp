#include "infprod/games.hpp"

#include <algorithm>
#include <sstream>

#include "infprod/error.hpp"
#include "infprod/rng.hpp"
#include "parallel.hpp"

namespace infprod {

namespace {

Interval hull_of_ranges(const std::vector<GameAction>& actions) {
  if (actions.empty()) throw Error(ErrorKind::Validation, "a game needs at least one action");
  Interval r = actions.front().payoff.range();
  for (const auto& a : actions) r = join(r, a.payoff.range());
  return r;
}

template <class Measure>
BestResponse best_response(const GameSpec& game, const Measure& pi, const EngineOptions& opt, unsigned threads) {
  const auto& actions = game.actions();
  BestResponse br;
  br.per_action.resize(actions.size());
  detail::parallel_for(actions.size(), threads,
                       [&](std::size_t a) { br.per_action[a] = expect(actions[a].payoff, pi, opt); });
  br.value = br.per_action.front().interval;
  for (std::size_t a = 1; a < actions.size(); ++a) {
    const Interval& v = br.per_action[a].interval;
    if (v.hi > br.per_action[br.argmax].interval.hi) br.argmax = a;
    br.value = {std::max(br.value.lo, v.lo), std::max(br.value.hi, v.hi)};
  }
  return br;
}

}  // namespace

GameSpec::GameSpec(SpacesPtr opponents, std::vector<GameAction> actions, Interval payoff_range)
    : opponents_(std::move(opponents)), actions_(std::move(actions)), range_(payoff_range) {
  if (!opponents_) throw Error(ErrorKind::InvalidArgument, "game without opponent spaces");
  if (actions_.empty()) throw Error(ErrorKind::Validation, "a game needs at least one action");
  for (const auto& a : actions_) {
    if (a.payoff.spaces() != opponents_ && !(a.payoff.spaces()->head() == opponents_->head() &&
                                             a.payoff.spaces()->tail() == opponents_->tail())) {
      throw Error(ErrorKind::Validation, "action '" + a.name + "' is defined on different opponent spaces");
    }
    const Interval r = a.payoff.range();
    if (r.lo < range_.lo || r.hi > range_.hi) {
      std::ostringstream msg;
      msg << "action '" << a.name << "' has range " << r << " outside the declared " << range_;
      throw Error(ErrorKind::Validation, msg.str());
    }
  }
}

GameSpec::GameSpec(SpacesPtr opponents, std::vector<GameAction> actions)
    : GameSpec(opponents, actions, hull_of_ranges(actions)) {}

BestResponse best_response_value(const GameSpec& game, const ProductMeasure& pi, const EngineOptions& opt,
                                 unsigned threads) {
  return best_response(game, pi, opt, threads);
}

BestResponse best_response_value(const GameSpec& game, const FinitisticProfile& pi, const EngineOptions& opt,
                                 unsigned threads) {
  return best_response(game, pi, opt, threads);
}

PurifyAttempt purify_at(const GameSpec& game, const ProductMeasure& sigma, const PointSpec& x,
                        const PurifyOptions& opt) {
  if (!(opt.epsilon > 0.0)) throw Error(ErrorKind::InvalidArgument, "epsilon must be positive");
  const auto& actions = game.actions();

  // One point serves every action: close it once per indicator payoff.
  PointSpec point = x;
  double residual = 0.0;
  for (const auto& a : actions) {
    const ClosedPoint cp = close_for(a.payoff, sigma, point, opt.policy);
    if (!cp.closed) {
      std::ostringstream msg;
      msg << "action '" << a.name << "': tail residual " << cp.residual << " exceeds eta";
      return {std::nullopt, msg.str()};
    }
    point = cp.point;
    residual += cp.residual;
  }

  PurifyResult out;
  out.point = point;
  out.residual = residual;
  out.checks.resize(actions.size());
  detail::parallel_for(actions.size(), opt.threads, [&](std::size_t a) {
    out.checks[a].action = actions[a].name;
    out.checks[a].search =
        find_strong_approx(actions[a].payoff, sigma, point, opt.epsilon, opt.n_max, opt.engine, opt.policy);
  });

  Index n = 1;
  for (const auto& c : out.checks) {
    if (!c.search.member()) {
      return {std::nullopt, "action '" + c.action + "': no certified index up to " + std::to_string(opt.n_max)};
    }
    n = std::max(n, *c.search.certified_n);
  }

  // Closeness at one index says nothing about a larger one, so every action
  // is re-certified at the common index.
  bool common = false;
  for (; n <= opt.n_max && !common; ++n) {
    std::vector<Closeness> verdicts(actions.size());
    detail::parallel_for(actions.size(), opt.threads, [&](std::size_t a) {
      const Interval g = g_n(actions[a].payoff, sigma, point, n, opt.engine).interval;
      verdicts[a] = certify_close(g, out.checks[a].search.reference, opt.epsilon);
    });
    common = std::all_of(verdicts.begin(), verdicts.end(), [](Closeness c) { return c == Closeness::Satisfied; });
    if (common) break;
  }
  if (!common) return {std::nullopt, "no common certified index up to " + std::to_string(opt.n_max)};

  out.n = n;
  out.profile = HybridMeasure::switch_at(sigma, point, n);
  out.profile_value = best_response_value(game, out.profile, opt.engine, opt.threads);
  out.sigma_value = best_response_value(game, sigma, opt.engine, opt.threads);
  std::string failure;
  for (std::size_t a = 0; a < actions.size(); ++a) {
    ActionCheck& c = out.checks[a];
    c.under_profile = out.profile_value.per_action[a].interval;
    c.under_sigma = out.sigma_value.per_action[a].interval;
    c.holds = out.profile_value.per_action[a].certified() && out.sigma_value.per_action[a].certified() &&
              c.under_profile.hi <= rounding::add_down(c.under_sigma.lo, opt.epsilon);
    if (!c.holds) failure += "action '" + c.action + "': post-hoc bound not certified; ";
  }
  if (!failure.empty()) return {std::nullopt, failure};
  return {std::move(out), {}};
}

PurifyResult purify(const GameSpec& game, const std::shared_ptr<const ProductMeasure>& sigma,
                    const PurifyOptions& opt) {
  if (!sigma) throw Error(ErrorKind::InvalidArgument, "purify needs a sampling measure");
  std::string diagnostics;
  for (std::size_t attempt = 0; attempt < opt.retries; ++attempt) {
    const std::uint64_t sub = rng::substream(opt.seed, attempt);
    PurifyAttempt r = purify_at(game, *sigma, PointSpec::lazy(sigma, sub), opt);
    if (r.result) {
      r.result->substream = sub;
      r.result->attempts = attempt + 1;
      return std::move(*r.result);
    }
    diagnostics += "attempt " + std::to_string(attempt + 1) + ": " + r.failure + "\n";
  }
  throw Error(ErrorKind::PurificationFailed, "purification failed after " + std::to_string(opt.retries) +
                                                 " samples\n" + diagnostics);
}

// --- naming game ---------------------------------------------------------------

double naming_game_value(const ProductMeasure& sigma) {
  const SpaceFamily& spaces = *sigma.spaces();
  for (Index i = 1; i <= spaces.head_size(); ++i) {
    if (spaces.at(i).size() != 2) {
      throw Error(ErrorKind::Validation, "coordinate " + std::to_string(i) + " is not binary");
    }
  }
  if (spaces.tail().size() != 2) throw Error(ErrorKind::Validation, "tail coordinates are not binary");
  double best = 0.0;
  for (const auto& m : sigma.head()) best = std::max({best, m.weight(0), m.weight(1)});
  return std::max(best, sigma.tail_sup_max_weight(sigma.head().size() + 1));
}

NamingAction naming_game_exploit(const FinitisticProfile& tau) {
  const Index n = tau.switch_index();
  return {n, tau.tail_point().at(n)};
}

NamingAction naming_game_exploit(const ProductMeasure& tau) {
  auto all_dirac = [](const std::vector<CoordinateMeasure>& ms) {
    return std::all_of(ms.begin(), ms.end(), [](const CoordinateMeasure& m) { return m.dirac_symbol().has_value(); });
  };
  bool dirac_tail = false;
  if (const auto* c = std::get_if<ConstantMeasure>(&tau.tail())) dirac_tail = all_dirac({c->measure});
  if (const auto* p = std::get_if<PeriodicMeasures>(&tau.tail())) dirac_tail = all_dirac(p->cycle);
  if (!dirac_tail) throw Error(ErrorKind::NotFinitistic, "profile declares no Dirac tail");
  Index n = tau.head().size() + 1;
  while (n > 1 && tau.head()[n - 2].dirac_symbol()) --n;
  return {n, *tau.resolve(n).dirac_symbol()};
}

double naming_payoff(const NamingAction& a, const FinitisticProfile& tau) {
  const Assignment at = tau.at(a.coordinate);
  if (const auto* s = std::get_if<Symbol>(&at)) return *s == a.symbol ? 1.0 : 0.0;
  return std::get<CoordinateMeasure>(at).weight(a.symbol);
}

double naming_payoff(const NamingAction& a, const ProductMeasure& tau) {
  return tau.resolve(a.coordinate).weight(a.symbol);
}

FinitisticProfile random_finitistic_profile(SpacesPtr binary, std::uint64_t seed, Index max_switch) {
  if (max_switch == 0) throw Error(ErrorKind::InvalidArgument, "max_switch must be >= 1");
  std::uint64_t state = seed;
  auto next = [&state] { return rng::mix(state++); };
  const Index n = 1 + next() % max_switch;
  std::vector<Assignment> head;
  for (Index i = 1; i < n; ++i) {
    if (next() % 4 == 0) {
      head.emplace_back(static_cast<Symbol>(next() & 1));
    } else {
      // Weights bounded away from 0 and 1 so no head coordinate is Dirac.
      const double p = 0.05 + 0.9 * rng::unit(next());
      head.emplace_back(CoordinateMeasure({1.0 - p, p}));
    }
  }
  std::vector<Symbol> prefix;
  const Index explicit_len = next() % 6;
  for (Index i = 0; i < explicit_len; ++i) prefix.push_back(static_cast<Symbol>(next() & 1));
  SymbolRule rule = ConstantSymbol{static_cast<Symbol>(next() & 1)};
  if (next() & 1) {
    PeriodicSymbols cycle;
    const Index period = 1 + next() % 4;
    for (Index k = 0; k < period; ++k) cycle.cycle.push_back(static_cast<Symbol>(next() & 1));
    rule = std::move(cycle);
  }
  return HybridMeasure(std::move(head), PointSpec::described(std::move(binary), std::move(prefix), std::move(rule)));
}

GameSpec naming_game_restriction(SpacesPtr binary, Index coordinate) {
  if (coordinate == 0) throw Error(ErrorKind::InvalidArgument, "coordinates start at 1");
  std::vector<GameAction> actions;
  for (Symbol j = 0; j < 2; ++j) {
    std::vector<double> table;
    const std::size_t cells = std::size_t{1} << coordinate;
    for (std::size_t k = 0; k < cells; ++k) table.push_back((k & 1) == j ? 1.0 : 0.0);
    actions.push_back({"(" + std::to_string(coordinate) + "," + std::to_string(j) + ")",
                       TailFunction::cylinder(binary, coordinate, std::move(table))});
  }
  return GameSpec(binary, std::move(actions), Interval(0.0, 1.0));
}

}  // namespace infprod
