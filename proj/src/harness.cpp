#include "infprod/harness.hpp"

#include <charconv>
#include <sstream>

#include <json.hpp>

#include "infprod/error.hpp"
#include "infprod/rng.hpp"
#include "parallel.hpp"

namespace infprod {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Certified: return "certified";
    case Verdict::Inconclusive: return "inconclusive";
    case Verdict::Failed: return "failed";
  }
  return "unknown";
}

namespace {

void tally(VerificationReport& rep) {
  for (const auto& r : rep.records) {
    switch (r.verdict) {
      case Verdict::Certified: ++rep.certified; break;
      case Verdict::Inconclusive: ++rep.inconclusive; break;
      case Verdict::Failed: ++rep.failed; break;
    }
  }
}

// Shortest text that reads back as the same double.
std::string fmt(double v) {
  char buf[32];
  const auto end = std::to_chars(buf, buf + sizeof buf, v).ptr;
  return std::string(buf, end);
}

}  // namespace

VerificationReport verify_strong(const TailFunction& f, const std::shared_ptr<const ProductMeasure>& sigma,
                                 const StrongCampaign& c) {
  if (!sigma) throw Error(ErrorKind::InvalidArgument, "verification needs a sampling measure");
  if (!(c.epsilon >= 0.0)) throw Error(ErrorKind::InvalidArgument, "epsilon must be >= 0");
  if (c.epsilon > 0.0 && !(c.engine.tol < c.epsilon / 4.0)) {
    throw Error(ErrorKind::InvalidTolerance, "engine tolerance must be below epsilon / 4");
  }
  VerificationReport rep;
  rep.theorem = "Strong-eps";
  rep.master_seed = c.seed;
  rep.samples = c.samples;
  rep.parameters = {{"epsilon", fmt(c.epsilon)},
                    {"n_max", std::to_string(c.n_max)},
                    {"tol", fmt(c.engine.tol)},
                    {"horizon", std::to_string(c.policy.horizon)},
                    {"eta", fmt(c.policy.eta)}};
  rep.records.resize(c.samples);
  detail::parallel_for(c.samples, c.threads, [&](std::size_t s) {
    SampleRecord& r = rep.records[s];
    r.index = s;
    r.substream = rng::substream(c.seed, s);
    const StrongApproxResult res =
        find_strong_approx(f, *sigma, PointSpec::lazy(sigma, r.substream), c.epsilon, c.n_max, c.engine, c.policy);
    r.residual = res.residual;
    r.n = res.certified_n;
    r.detail = std::string(to_string(res.outcome));
    if (res.member()) {
      r.verdict = Verdict::Certified;
    } else if (res.outcome == StrongOutcome::Inconclusive) {
      r.verdict = Verdict::Inconclusive;
    } else {
      r.verdict = Verdict::Failed;
    }
  });
  tally(rep);
  return rep;
}

VerificationReport verify_weak(const TailFunction& f, const std::shared_ptr<const ProductMeasure>& sigma,
                               const WeakCampaign& c) {
  if (!sigma) throw Error(ErrorKind::InvalidArgument, "verification needs a sampling measure");
  if (c.depth == 0) throw Error(ErrorKind::InvalidArgument, "depth must be >= 1");
  const double r = c.r ? *c.r : expect(f, *sigma, c.engine).interval.mid();
  VerificationReport rep;
  rep.theorem = "Weak-0";
  rep.master_seed = c.seed;
  rep.samples = c.samples;
  rep.parameters = {{"depth", std::to_string(c.depth)},
                    {"r", fmt(r)},
                    {"horizon", std::to_string(c.policy.horizon)},
                    {"eta", fmt(c.policy.eta)},
                    {"certificate_tolerance", fmt(c.certificate_tolerance)}};
  rep.records.resize(c.samples);
  detail::parallel_for(c.samples, c.threads, [&](std::size_t s) {
    SampleRecord& rec = rep.records[s];
    rec.index = s;
    rec.substream = rng::substream(c.seed, s);
    const ClosedPoint cp = close_for(f, *sigma, PointSpec::lazy(sigma, rec.substream), c.policy);
    rec.residual = cp.residual;
    if (!cp.closed) {
      rec.detail = "tail residual above eta";
      return;
    }
    try {
      const ClassVerdict v = classify(f, cp.point, r, c.depth, c.hull);
      if (v.status != ClassStatus::Z0Certified) {
        rec.detail = "UndeterminedAtDepth";
        return;
      }
      const WeakApproxCertificate cert = construct_weak_zero(f, v.hull.argmin, v.hull.argmax, r, c.depth, c.hull);
      rec.n = cert.coordinate;
      if (certificate_holds(f, cert, c.certificate_tolerance, c.hull.horizon)) {
        rec.verdict = Verdict::Certified;
        rec.detail = "Z0Certified";
      } else {
        rec.verdict = Verdict::Failed;
        rec.detail = "certificate check failed";
      }
    } catch (const Error& e) {
      rec.verdict = e.kind() == ErrorKind::Undetermined ? Verdict::Inconclusive : Verdict::Failed;
      rec.detail = std::string(to_string(e.kind()));
    }
  });
  tally(rep);
  return rep;
}

std::string report_json(const VerificationReport& rep) {
  nlohmann::ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["theorem"] = rep.theorem;
  j["scenario"] = rep.scenario;
  j["scenario_digest"] = rep.digest;
  j["master_seed"] = rep.master_seed;
  auto& params = j["parameters"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : rep.parameters) params[k] = v;
  j["samples"] = rep.samples;
  j["certified"] = rep.certified;
  j["inconclusive"] = rep.inconclusive;
  j["failed"] = rep.failed;
  j["certified_fraction"] = rep.certified_fraction();
  j["inconclusive_fraction"] = rep.inconclusive_fraction();
  auto& records = j["records"] = nlohmann::ordered_json::array();
  for (const auto& r : rep.records) {
    nlohmann::ordered_json e;
    e["index"] = r.index;
    e["substream"] = r.substream;
    e["verdict"] = to_string(r.verdict);
    e["n"] = r.n ? nlohmann::ordered_json(*r.n) : nlohmann::ordered_json(nullptr);
    e["residual"] = r.residual;
    e["detail"] = r.detail;
    records.push_back(std::move(e));
  }
  return j.dump(2) + "\n";
}

std::string report_text(const VerificationReport& rep) {
  std::ostringstream out;
  out << rep.theorem << " verification on " << rep.scenario << " (digest " << rep.digest << ")\n";
  out << "master seed " << rep.master_seed;
  for (const auto& [k, v] : rep.parameters) out << ", " << k << " " << v;
  out << "\n";
  out << "samples " << rep.samples << ": certified " << rep.certified << ", inconclusive " << rep.inconclusive
      << ", failed " << rep.failed << "\n";
  out << "certified_fraction " << fmt(rep.certified_fraction()) << "\n";
  double worst = 0.0;
  Index max_n = 0;
  for (const auto& r : rep.records) {
    worst = std::max(worst, r.residual);
    if (r.n) max_n = std::max(max_n, *r.n);
  }
  out << "largest index " << max_n << ", largest residual " << fmt(worst) << "\n";
  for (const auto& r : rep.records) {
    if (r.verdict == Verdict::Certified) continue;
    out << "  sample " << r.index << " (substream " << r.substream << "): " << to_string(r.verdict) << " "
        << r.detail << "\n";
  }
  return out.str();
}

}  // namespace infprod
