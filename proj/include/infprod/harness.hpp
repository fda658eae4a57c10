#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "infprod/expectation.hpp"
#include "infprod/martingale.hpp"
#include "infprod/tail_class.hpp"

namespace infprod {

enum class Verdict { Certified, Inconclusive, Failed };
std::string_view to_string(Verdict v);

struct SampleRecord {
  std::size_t index = 0;
  std::uint64_t substream = 0;
  Verdict verdict = Verdict::Inconclusive;
  /// Found n (strong) or the certificate coordinate (weak).
  std::optional<Index> n;
  double residual = 0.0;
  std::string detail;
};

struct VerificationReport {
  std::string theorem;  // "Strong-eps" or "Weak-0"
  std::string scenario;
  std::string digest;
  std::uint64_t master_seed = 0;
  std::size_t samples = 0;
  std::size_t certified = 0;
  std::size_t inconclusive = 0;
  std::size_t failed = 0;
  /// Echo of the parameters that determine the run.
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<SampleRecord> records;  // by sample index

  double certified_fraction() const { return samples ? static_cast<double>(certified) / samples : 0.0; }
  double inconclusive_fraction() const { return samples ? static_cast<double>(inconclusive) / samples : 0.0; }
};

struct StrongCampaign {
  double epsilon = 0.1;
  Index n_max = 60;
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  EngineOptions engine;
  TailPolicy policy;
  unsigned threads = 1;
};

/// Sample s is the lazy point with seed substream(seed, s); each runs
/// find_strong_approx. Certified means a certified index exists.
VerificationReport verify_strong(const TailFunction& f, const std::shared_ptr<const ProductMeasure>& sigma,
                                 const StrongCampaign& campaign);

struct WeakCampaign {
  Index depth = 1;
  std::size_t samples = 500;
  std::uint64_t seed = 0;
  std::optional<double> r;  // defaults to the midpoint of E_sigma[f]
  EngineOptions engine;
  TailPolicy policy;
  HullOptions hull;
  double certificate_tolerance = 1e-12;
  unsigned threads = 1;
};

/// Per sample: classify at the given depth and, when certified, build the
/// single-coordinate certificate from the hull witnesses and check it.
VerificationReport verify_weak(const TailFunction& f, const std::shared_ptr<const ProductMeasure>& sigma,
                               const WeakCampaign& campaign);

/// JSON object with `schema_version`; byte-identical for identical inputs.
std::string report_json(const VerificationReport& report);
std::string report_text(const VerificationReport& report);

inline constexpr int kReportSchemaVersion = 1;

}  // namespace infprod
