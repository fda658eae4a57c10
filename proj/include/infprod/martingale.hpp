#pragma once

#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "infprod/expectation.hpp"

namespace infprod {

/// How lazily sampled points are turned into decidable ones.
struct TailPolicy {
  /// Coordinates 1..horizon are realized from the sample stream.
  Index horizon = 60;
  /// Largest acceptable sigma-probability that the assumed tail is wrong.
  double eta = 1e-6;
};

struct ClosedPoint {
  PointSpec point;
  /// Upper bound on the probability that the sample disagrees with the
  /// assumed tail; 0 when nothing was assumed.
  double residual = 0.0;
  bool closed = true;
};

/// A ProductIndicator value at a lazy point is not decided by any finite
/// prefix. The point is realized up to the horizon and continued with the
/// indicator's targets; the residual is the tail-rule bound on
/// sum_{i > horizon} sigma_i(x_i != target_i). Other families and described
/// points pass through unchanged.
ClosedPoint close_for(const TailFunction& f, const ProductMeasure& sigma, const PointSpec& x,
                      const TailPolicy& policy);

/// g_n(x) = E_{sigma_1 (x) ... (x) sigma_{n-1} (x) x_n (x) ...}[f]; g_1 = f(x).
ExpectationResult g_n(const TailFunction& f, const ProductMeasure& sigma, const PointSpec& x, Index n,
                      const EngineOptions& options = {});

struct TraceEntry {
  Index n = 0;
  Interval value;
  ExpectStatus status = ExpectStatus::Certified;
};

struct MartingaleTrace {
  std::vector<TraceEntry> entries;  // n = 1..N
  ExpectationResult reference;      // E_sigma[f]
  double residual = 0.0;
};

MartingaleTrace trace(const TailFunction& f, const ProductMeasure& sigma, const PointSpec& x, Index n_max,
                      const EngineOptions& options = {}, const TailPolicy& policy = {});

enum class Closeness { Satisfied, Violated, Undecided };

/// Decides |g - e| <= eps over every pair of values in the two intervals.
Closeness certify_close(const Interval& g, const Interval& e, double eps);

enum class StrongOutcome { Found, NotFoundUpTo, Inconclusive };
std::string_view to_string(StrongOutcome o);

struct StrongApproxResult {
  StrongOutcome outcome = StrongOutcome::Inconclusive;
  double epsilon = 0.0;
  Index n_max = 0;
  /// Smallest n with a certified |g_n - E| <= eps. Found additionally
  /// requires every smaller n to be certified violating; otherwise the
  /// result is Inconclusive and lists the undecided indices.
  std::optional<Index> certified_n;
  std::vector<Index> inconclusive;
  Interval reference;
  std::optional<Interval> value_at_certified;
  double residual = 0.0;

  bool member() const { return certified_n.has_value(); }
};

/// Scans n = 1..n_max. Requires eps >= 0 and, for eps > 0, tol < eps / 4.
StrongApproxResult find_strong_approx(const TailFunction& f, const ProductMeasure& sigma, const PointSpec& x,
                                      double eps, Index n_max, const EngineOptions& options = {},
                                      const TailPolicy& policy = {});

}  // namespace infprod
