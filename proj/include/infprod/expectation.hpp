#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "infprod/function.hpp"
#include "infprod/hybrid.hpp"
#include "infprod/interval.hpp"
#include "infprod/measure.hpp"

namespace infprod {

struct EngineOptions {
  /// Certified results have width <= 2 * tol.
  double tol = 1e-9;
  std::size_t node_budget = std::size_t{1} << 20;
  /// Coordinates of lazy Dirac tails are realized up to this index.
  Index horizon = 64;
  /// Closed-form oracles take precedence over refinement when available.
  bool use_oracle = true;
};

enum class ExpectStatus { Certified, BudgetExhausted };
enum class ExpectMethod { Oracle, Refinement };

struct ExpectationResult {
  Interval interval;
  std::size_t nodes_expanded = 0;
  ExpectStatus status = ExpectStatus::Certified;
  ExpectMethod method = ExpectMethod::Refinement;

  bool certified() const { return status == ExpectStatus::Certified; }
};

std::string_view to_string(ExpectStatus s);
std::string_view to_string(ExpectMethod m);

/// E_mu[f] as a sound interval.
///
/// Refinement is best-first over the prefix tree: every frontier node carries
/// its cylinder mass and the family's bound of f over the cylinder; the node
/// with the largest mass * width is expanded next (ties: lexicographically
/// smallest prefix). Dirac coordinates are substituted instead of branched.
/// The reported interval is summed over the final frontier in prefix order,
/// so it does not depend on expansion history.
ExpectationResult expect(const TailFunction& f, const ProductMeasure& mu, const EngineOptions& options = {});
ExpectationResult expect(const TailFunction& f, const HybridMeasure& mu, const EngineOptions& options = {});

/// Closed forms: ProductIndicator (product of target weights) and
/// DiscountedSum (linearity plus geometric tails). nullopt when none applies.
std::optional<Interval> exact_expectation(const TailFunction& f, const ProductMeasure& mu);
std::optional<Interval> exact_expectation(const TailFunction& f, const HybridMeasure& mu, Index horizon = 64);

/// prod_i mu_i(target_i); throws UnsupportedTail when the tail admits no
/// closed form or bound.
Interval exact_expectation_product_indicator(const TailFunction& f, const ProductMeasure& mu);
Interval exact_expectation_product_indicator(const TailFunction& f, const HybridMeasure& mu);

}  // namespace infprod
