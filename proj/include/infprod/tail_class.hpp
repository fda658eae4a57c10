#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "infprod/expectation.hpp"
#include "infprod/martingale.hpp"

namespace infprod {

struct HullOptions {
  /// Exhaustive search when prod_{i<=m} |X_i| is at most this many points.
  std::size_t enumeration_budget = std::size_t{1} << 20;
  Index horizon = 64;
  /// f values narrower than this, relative to max(1, |f|), count as determined.
  double value_resolution = 1e-13;
};

/// Range of f over all modifications of coordinates 1..depth of a base point.
/// `interval` is an inner bound: both ends are attained by the witnesses.
struct HullEstimate {
  Index depth = 0;
  Interval interval;
  PointSpec argmin;
  PointSpec argmax;
  Interval min_value;
  Interval max_value;
  /// False when the budget forced bound-guided greedy search.
  bool exhaustive = true;
};

HullEstimate hull_estimate(const TailFunction& f, const PointSpec& x, Index depth, const HullOptions& options = {});

enum class ClassStatus { Z0Certified, UndeterminedAtDepth };
std::string_view to_string(ClassStatus s);

struct ClassVerdict {
  ClassStatus status = ClassStatus::UndeterminedAtDepth;
  Index depth = 0;
  double r = 0.0;
  HullEstimate hull;
};

/// Certifies r in I_Z for the tail class Z of x when a depth-m modification
/// hull contains r. Never certifies the complementary classes.
ClassVerdict classify(const TailFunction& f, const PointSpec& x, double r, Index depth,
                      const HullOptions& options = {});

/// Weak 0-approximation with a single mixed coordinate:
/// E_{z_1 (x) ... (x) z_{k-1} (x) tau_k (x) z_{k+1} (x) ...}[f] = r, where
/// tau_k puts alpha on `x_symbol` and 1 - alpha on `y_symbol`.
struct WeakApproxCertificate {
  PointSpec base;  // z_k = (y_1..y_{k-1}, x_k, x_{k+1}, ...)
  Index coordinate = 1;
  double alpha = 1.0;
  Symbol x_symbol = 0;
  Symbol y_symbol = 0;
  CoordinateMeasure mixing = CoordinateMeasure({1.0});
  double r = 0.0;
  Interval value_x;  // f(z_k)
  Interval value_y;  // f(z_{k+1})
  Interval achieved;
  Index agreement = 0;
  std::vector<Interval> walk;  // f(z_1), ..., f(z_{n+1})
};

/// Mixes the walk z_1 = x, ..., z_{n+1} = y at the first coordinate whose
/// step straddles r.
WeakApproxCertificate construct_weak_zero(const TailFunction& f, const PointSpec& x, const PointSpec& y, double r,
                                          std::optional<Index> agreement, const HullOptions& options = {});

/// alpha * f(z[k -> x_k]) + (1 - alpha) * f(z[k -> y_k]) by direct evaluation.
Interval certificate_value(const TailFunction& f, const WeakApproxCertificate& c, Index horizon = 64);

/// The certificate as a measure: Dirac everywhere except tau_k at k.
HybridMeasure certificate_measure(const WeakApproxCertificate& c);

/// Certificate checks: alpha in [0, 1] and mixed value within tolerance of r.
bool certificate_holds(const TailFunction& f, const WeakApproxCertificate& c, double tolerance = 1e-12,
                       Index horizon = 64);

struct WeakSampleOptions {
  EngineOptions engine;
  TailPolicy policy;
  HullOptions hull;
  Index depth = 1;
  std::uint64_t seed = 0;
  std::size_t retries = 16;
  std::optional<double> r;  // defaults to the midpoint of E_sigma[f]
};

struct WeakSampleResult {
  WeakApproxCertificate certificate;
  std::size_t attempts = 0;
  std::uint64_t substream = 0;
  double residual = 0.0;
};

WeakSampleResult weak_zero_from_sample(const TailFunction& f, const std::shared_ptr<const ProductMeasure>& sigma,
                                       const WeakSampleOptions& options);

}  // namespace infprod
