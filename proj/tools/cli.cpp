#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "infprod/error.hpp"
#include "infprod/games.hpp"
#include "infprod/harness.hpp"
#include "infprod/rng.hpp"
#include "infprod/scenario.hpp"
#include "infprod/tail_class.hpp"

namespace infprod::cli {

namespace {

using ojson = nlohmann::ordered_json;

struct Flags {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  unsigned threads = 1;
  std::string report_dir;
  std::string report = "text";
  std::optional<std::size_t> node_budget;
  std::optional<Index> horizon;
  std::optional<double> eta;
  std::optional<std::string> point;
  std::optional<double> epsilon;
  std::optional<Index> n_max;
  std::optional<Index> depth;
  std::optional<std::size_t> retries;
  std::optional<double> r;
  std::optional<std::size_t> samples;
};

struct Output {
  std::string name;
  ojson json;
  std::string text;
  int status = kExitOk;
};

// Settings after layering flags over scenario defaults over built-ins.
struct Settings {
  EngineOptions engine;
  TailPolicy policy;
  HullOptions hull;
  std::uint64_t seed = 0;
  double epsilon = 0.1;
  Index n_max = 60;
  Index depth = 1;
  std::size_t samples = 100;
  std::size_t retries = 16;
};

Settings settle(const Flags& f, const Scenario& s) {
  const ScenarioDefaults& d = s.defaults;
  Settings out;
  out.engine.tol = f.tol.value_or(d.tol.value_or(out.engine.tol));
  if (f.node_budget) out.engine.node_budget = *f.node_budget;
  out.policy.horizon = f.horizon.value_or(d.horizon.value_or(out.policy.horizon));
  if (out.policy.horizon == 0) throw Error(ErrorKind::InvalidArgument, "--horizon must be >= 1");
  out.policy.eta = f.eta.value_or(out.policy.eta);
  out.engine.horizon = std::max(out.engine.horizon, out.policy.horizon);
  out.hull.horizon = out.engine.horizon;
  out.seed = f.seed.value_or(d.seed.value_or(0));
  out.epsilon = f.epsilon.value_or(d.epsilon.value_or(out.epsilon));
  out.n_max = f.n_max.value_or(d.n_max.value_or(out.n_max));
  out.depth = f.depth.value_or(d.depth.value_or(out.depth));
  out.samples = f.samples.value_or(d.samples.value_or(out.samples));
  out.retries = f.retries.value_or(out.retries);
  return out;
}

std::string fmt(double v) {
  std::ostringstream o;
  o.precision(12);
  o << v;
  return o.str();
}

std::string fmt(const Interval& v) { return "[" + fmt(v.lo) + ", " + fmt(v.hi) + "]"; }

ojson interval_json(const Interval& v) { return ojson{{"lo", v.lo}, {"hi", v.hi}}; }

// Continued-fraction approximant p/q with |p/q - x| <= 1e-12, q <= 1e9.
std::string rational(double x) {
  long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double rest = x;
  for (int step = 0; step < 40; ++step) {
    const double a = std::floor(rest);
    const long long h = static_cast<long long>(a) * h1 + h0;
    const long long k = static_cast<long long>(a) * k1 + k0;
    if (k > 1000000000LL) break;
    h0 = h1, h1 = h;
    k0 = k1, k1 = k;
    if (std::fabs(static_cast<double>(h1) / static_cast<double>(k1) - x) <= 1e-12) break;
    const double frac = rest - a;
    if (frac < 1e-15) break;
    rest = 1.0 / frac;
  }
  return std::to_string(h1) + "/" + std::to_string(k1);
}

ojson header(const std::string& command, const Scenario& s) {
  return ojson{{"schema_version", kReportSchemaVersion},
               {"command", command},
               {"scenario", s.name},
               {"scenario_digest", s.digest}};
}

PointSpec choose_point(const Flags& f, const Scenario& s, const Settings& st) {
  const std::optional<std::string> name = f.point ? f.point : s.defaults.point;
  if (!name) throw Error(ErrorKind::InvalidArgument, "no --point given and the scenario declares no default");
  if (*name == "sample") return PointSpec::lazy(s.measure, rng::substream(st.seed, 0));
  return s.point(*name);
}

std::string point_prefix(const PointSpec& x, Index n) {
  std::string out;
  for (Index i = 1; i <= n; ++i) {
    if (i > 1) out += ' ';
    out += x.spaces()->at(i).label(x.at(i));
  }
  return out;
}

Output cmd_expect(const Flags& f, const Scenario& s) {
  const Settings st = settle(f, s);
  const ExpectationResult r = expect(s.require_function(), *s.measure, st.engine);
  Output o{"expect", header("expect", s), {}, r.certified() ? kExitOk : kExitThreshold};
  o.json["tol"] = st.engine.tol;
  o.json["lo"] = r.interval.lo;
  o.json["hi"] = r.interval.hi;
  o.json["width"] = r.interval.width();
  o.json["status"] = to_string(r.status);
  o.json["method"] = to_string(r.method);
  o.json["nodes_expanded"] = r.nodes_expanded;
  std::ostringstream t;
  t.precision(12);
  t << "E[f] in " << fmt(r.interval) << " (width " << r.interval.width() << ", " << to_string(r.status) << ", "
    << to_string(r.method) << ", " << r.nodes_expanded << " nodes)\n";
  o.text = t.str();
  return o;
}

Output cmd_trace(const Flags& f, const Scenario& s) {
  const Settings st = settle(f, s);
  const PointSpec x = choose_point(f, s, st);
  const Index n_max = f.n_max.value_or(std::min<Index>(st.n_max, 8));
  const MartingaleTrace tr = trace(s.require_function(), *s.measure, x, n_max, st.engine, st.policy);
  Output o{"gn-trace", header("gn-trace", s), {}, kExitOk};
  o.json["reference"] = interval_json(tr.reference.interval);
  o.json["residual"] = tr.residual;
  ojson entries = ojson::array();
  std::ostringstream t;
  t << "E[f] in " << fmt(tr.reference.interval) << ", residual " << tr.residual << "\n";
  for (const auto& e : tr.entries) {
    entries.push_back(ojson{{"n", e.n}, {"lo", e.value.lo}, {"hi", e.value.hi}, {"status", to_string(e.status)}});
    t << "g_" << e.n << " in " << fmt(e.value) << "\n";
    if (e.status != ExpectStatus::Certified) o.status = kExitThreshold;
  }
  o.json["entries"] = std::move(entries);
  o.text = t.str();
  return o;
}

Output cmd_strong(const Flags& f, const Scenario& s) {
  const Settings st = settle(f, s);
  const PointSpec x = choose_point(f, s, st);
  const StrongApproxResult r =
      find_strong_approx(s.require_function(), *s.measure, x, st.epsilon, st.n_max, st.engine, st.policy);
  Output o{"strong-approx", header("strong-approx", s), {}, r.member() ? kExitOk : kExitThreshold};
  o.json["epsilon"] = r.epsilon;
  o.json["n_max"] = r.n_max;
  o.json["outcome"] = to_string(r.outcome);
  o.json["certified_n"] = r.certified_n ? ojson(*r.certified_n) : ojson(nullptr);
  o.json["reference"] = interval_json(r.reference);
  o.json["value_at_certified"] = r.value_at_certified ? interval_json(*r.value_at_certified) : ojson(nullptr);
  o.json["inconclusive"] = r.inconclusive;
  o.json["residual"] = r.residual;
  std::ostringstream t;
  t << to_string(r.outcome);
  if (r.outcome == StrongOutcome::Found) t << "(" << *r.certified_n << ")";
  if (r.outcome == StrongOutcome::NotFoundUpTo) t << "(" << r.n_max << ")";
  t << " for epsilon " << r.epsilon << "; E[f] in " << fmt(r.reference);
  if (r.value_at_certified) t << ", g_" << *r.certified_n << " in " << fmt(*r.value_at_certified);
  t << "\n";
  if (!r.inconclusive.empty()) {
    t << "undecided at n =";
    for (Index n : r.inconclusive) t << " " << n;
    t << "\n";
  }
  if (r.residual > 0.0) t << "tail residual " << r.residual << "\n";
  o.text = t.str();
  return o;
}

ojson certificate_json(const WeakApproxCertificate& c, const SpacesPtr& spaces) {
  const CoordinateSpace& space = spaces->at(c.coordinate);
  return ojson{{"coordinate", c.coordinate},
               {"alpha", c.alpha},
               {"alpha_rational", rational(c.alpha)},
               {"x_symbol", space.label(c.x_symbol)},
               {"y_symbol", space.label(c.y_symbol)},
               {"r", c.r},
               {"value_x", interval_json(c.value_x)},
               {"value_y", interval_json(c.value_y)},
               {"achieved", interval_json(c.achieved)},
               {"agreement", c.agreement},
               {"switch_index", c.coordinate + 1}};
}

Output cmd_weak(const Flags& f, const Scenario& s) {
  const Settings st = settle(f, s);
  const TailFunction& fn = s.require_function();
  Output o{"weak-approx", header("weak-approx", s), {}, kExitOk};
  WeakApproxCertificate cert;
  if (f.point) {
    const PointSpec x = choose_point(f, s, st);
    const double r = f.r ? *f.r : expect(fn, *s.measure, st.engine).interval.mid();
    const ClosedPoint cp = close_for(fn, *s.measure, x, st.policy);
    if (!cp.closed) throw Error(ErrorKind::Undetermined, "point tail residual exceeds eta");
    const ClassVerdict v = classify(fn, cp.point, r, st.depth, st.hull);
    o.json["class_status"] = to_string(v.status);
    o.json["hull"] = interval_json(v.hull.interval);
    if (v.status != ClassStatus::Z0Certified) {
      o.status = kExitThreshold;
      o.text = "UndeterminedAtDepth(" + std::to_string(st.depth) + "): hull " + fmt(v.hull.interval) +
               " does not contain r = " + fmt(r) + "\n";
      return o;
    }
    cert = construct_weak_zero(fn, v.hull.argmin, v.hull.argmax, r, st.depth, st.hull);
  } else {
    WeakSampleOptions w;
    w.engine = st.engine;
    w.policy = st.policy;
    w.hull = st.hull;
    w.depth = st.depth;
    w.seed = st.seed;
    w.retries = st.retries;
    w.r = f.r;
    const WeakSampleResult res = weak_zero_from_sample(fn, s.measure, w);
    cert = res.certificate;
    o.json["attempts"] = res.attempts;
    o.json["substream"] = res.substream;
    o.json["residual"] = res.residual;
  }
  const bool holds = certificate_holds(fn, cert, 1e-12, st.hull.horizon);
  o.json["certificate"] = certificate_json(cert, s.spaces);
  o.json["holds"] = holds;
  if (!holds) o.status = kExitThreshold;
  const CoordinateSpace& space = s.spaces->at(cert.coordinate);
  std::ostringstream t;
  t << "mix coordinate " << cert.coordinate << ": alpha = " << fmt(cert.alpha) << " (" << rational(cert.alpha)
    << ") on '" << space.label(cert.x_symbol) << "', 1 - alpha on '" << space.label(cert.y_symbol) << "'\n";
  t << "f(z_k) in " << fmt(cert.value_x) << ", f(z_k+1) in " << fmt(cert.value_y) << "\n";
  t << "mixed value in " << fmt(cert.achieved) << " for r = " << fmt(cert.r) << (holds ? " (verified)" : " (NOT verified)")
    << "\n";
  t << "profile is pure from coordinate " << cert.coordinate + 1 << " on\n";
  o.text = t.str();
  return o;
}

Output verification_output(const std::string& command, const Scenario& s, VerificationReport rep) {
  rep.scenario = s.name;
  rep.digest = s.digest;
  Output o{command, ojson::parse(report_json(rep)), report_text(rep), kExitOk};
  o.json["command"] = command;
  const auto it = s.thresholds.find(command);
  if (it == s.thresholds.end()) {
    o.json["threshold"] = nullptr;
    o.json["threshold_met"] = nullptr;
    return o;
  }
  const bool met = rep.certified_fraction() >= it->second;
  o.json["threshold"] = it->second;
  o.json["threshold_met"] = met;
  o.text += "threshold " + fmt(it->second) + (met ? " met\n" : " MISSED\n");
  if (!met) o.status = kExitThreshold;
  return o;
}

Output cmd_verify_strong(const Flags& f, const Scenario& s) {
  const Settings st = settle(f, s);
  StrongCampaign c;
  c.epsilon = st.epsilon;
  c.n_max = st.n_max;
  c.samples = st.samples;
  c.seed = st.seed;
  c.engine = st.engine;
  c.policy = st.policy;
  c.threads = f.threads;
  return verification_output("verify-strong", s, verify_strong(s.require_function(), s.measure, c));
}

Output cmd_verify_weak(const Flags& f, const Scenario& s) {
  const Settings st = settle(f, s);
  WeakCampaign c;
  c.depth = st.depth;
  c.samples = st.samples;
  c.seed = st.seed;
  c.r = f.r;
  c.engine = st.engine;
  c.policy = st.policy;
  c.hull = st.hull;
  c.threads = f.threads;
  return verification_output("verify-weak", s, verify_weak(s.require_function(), s.measure, c));
}

ojson best_response_json(const GameSpec& g, const BestResponse& br) {
  ojson per = ojson::array();
  for (std::size_t a = 0; a < g.actions().size(); ++a) {
    per.push_back(ojson{{"action", g.actions()[a].name},
                        {"lo", br.per_action[a].interval.lo},
                        {"hi", br.per_action[a].interval.hi},
                        {"status", to_string(br.per_action[a].status)}});
  }
  return ojson{{"value", interval_json(br.value)}, {"argmax", g.actions()[br.argmax].name}, {"actions", per}};
}

const GameSpec& require_game(const Scenario& s) {
  if (!s.game) throw Error(ErrorKind::Validation, "scenario '" + s.name + "' declares no finite game");
  return *s.game;
}

Output cmd_game_value(const Flags& f, const Scenario& s) {
  const Settings st = settle(f, s);
  Output o{"game-value", header("game value", s), {}, kExitOk};
  if (s.game_kind == GameKind::Naming) {
    const double v = naming_game_value(*s.measure);
    o.json["value"] = v;
    o.text = "naming game value sup_n max_j sigma_n(j) = " + fmt(v) + "\n";
    return o;
  }
  const GameSpec& g = require_game(s);
  BestResponse br;
  if (f.point) {
    br = best_response_value(g, HybridMeasure::dirac(choose_point(f, s, st)), st.engine, f.threads);
    o.json["against"] = "point " + *f.point;
  } else {
    br = best_response_value(g, *s.measure, st.engine, f.threads);
    o.json["against"] = "sigma";
  }
  o.json.update(best_response_json(g, br));
  std::ostringstream t;
  for (std::size_t a = 0; a < g.actions().size(); ++a) {
    t << "E[u(" << g.actions()[a].name << ", .)] in " << fmt(br.per_action[a].interval) << "\n";
  }
  t << "max in " << fmt(br.value) << ", best response " << g.actions()[br.argmax].name << "\n";
  o.text = t.str();
  return o;
}

Output cmd_game_purify(const Flags& f, const Scenario& s) {
  const Settings st = settle(f, s);
  const GameSpec& g = require_game(s);
  PurifyOptions p;
  p.epsilon = st.epsilon;
  p.n_max = st.n_max;
  p.engine = st.engine;
  p.policy = st.policy;
  p.seed = st.seed;
  p.retries = f.retries.value_or(8);
  p.threads = f.threads;
  PurifyResult res;
  if (f.point) {
    PurifyAttempt a = purify_at(g, *s.measure, choose_point(f, s, st), p);
    if (!a.result) throw Error(ErrorKind::PurificationFailed, a.failure);
    res = std::move(*a.result);
    res.attempts = 1;
  } else {
    res = purify(g, s.measure, p);
  }
  Output o{"game-purify", header("game purify", s), {}, kExitOk};
  o.json["epsilon"] = p.epsilon;
  o.json["switch_index"] = res.n;
  o.json["dirac_tail"] = true;
  o.json["point_prefix"] = point_prefix(res.point, res.n + 3);
  o.json["substream"] = res.substream;
  o.json["attempts"] = res.attempts;
  o.json["residual"] = res.residual;
  ojson checks = ojson::array();
  std::ostringstream t;
  if (res.n > 1) t << "profile: sigma on coordinates 1.." << res.n - 1 << ", ";
  else t << "profile: ";
  t << "pure from " << res.n << " on (x = " << point_prefix(res.point, res.n + 3) << " ...)\n";
  bool all = true;
  for (const auto& c : res.checks) {
    all = all && c.holds;
    checks.push_back(ojson{{"action", c.action},
                           {"certified_n", c.search.certified_n ? ojson(*c.search.certified_n) : ojson(nullptr)},
                           {"outcome", to_string(c.search.outcome)},
                           {"under_profile", interval_json(c.under_profile)},
                           {"under_sigma", interval_json(c.under_sigma)},
                           {"holds", c.holds}});
    t << "action " << c.action << ": E under profile " << fmt(c.under_profile) << " <= E under sigma "
      << fmt(c.under_sigma) << " + " << p.epsilon << (c.holds ? " (certified)" : " (NOT certified)") << "\n";
  }
  o.json["checks"] = std::move(checks);
  o.json["profile_value"] = best_response_json(g, res.profile_value);
  o.json["sigma_value"] = best_response_json(g, res.sigma_value);
  o.json["all_hold"] = all;
  t << "max under profile " << fmt(res.profile_value.value) << ", max under sigma " << fmt(res.sigma_value.value)
    << "\n";
  o.text = t.str();
  if (!all) o.status = kExitThreshold;
  return o;
}

Output cmd_naming_demo(const Flags& f, const Scenario& s) {
  const Settings st = settle(f, s);
  if (s.game_kind != GameKind::Naming) throw Error(ErrorKind::Validation, "scenario is not a naming game");
  const double v = naming_game_value(*s.measure);
  Output o{"game-naming-demo", header("game naming-demo", s), {}, kExitOk};
  o.json["value"] = v;
  ojson profiles = ojson::array();
  bool all = true;
  for (std::size_t k = 0; k < st.samples; ++k) {
    const FinitisticProfile tau = random_finitistic_profile(s.spaces, rng::substream(st.seed, k));
    const NamingAction a = naming_game_exploit(tau);
    const double payoff = naming_payoff(a, tau);
    all = all && payoff == 1.0;
    profiles.push_back(ojson{{"switch_index", tau.switch_index()},
                             {"action", ojson::array({a.coordinate, a.symbol})},
                             {"payoff", payoff}});
  }
  o.json["profiles"] = std::move(profiles);
  o.json["all_exploited"] = all;
  std::ostringstream t;
  t << "value against sigma: " << fmt(v) << "\n";
  t << st.samples << " finitistic profiles, " << (all ? "every one" : "NOT every one")
    << " answered by a naming action with payoff 1\n";
  o.text = t.str();
  if (!all) o.status = kExitThreshold;
  return o;
}

void emit(const Output& o, const Flags& f, std::ostream& out) {
  const std::string json = o.json.dump(2) + "\n";
  out << (f.report == "json" ? json : o.text);
  if (f.report_dir.empty()) return;
  std::filesystem::create_directories(f.report_dir);
  const std::filesystem::path base = std::filesystem::path(f.report_dir) / o.name;
  std::ofstream(base.string() + ".json", std::ios::binary) << json;
  std::ofstream(base.string() + ".txt", std::ios::binary) << o.text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Certified expectations and approximation procedures for infinite product measures", "infprod"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  app.add_option("--seed", f.seed, "master seed (64-bit unsigned)");
  app.add_option("--tol", f.tol, "engine tolerance; certified widths are <= 2 tol");
  app.add_option("--threads", f.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--report-dir", f.report_dir, "write <command>.txt and <command>.json here");
  app.add_option("--report", f.report, "stdout format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--node-budget", f.node_budget, "refinement node budget");
  app.add_option("--horizon", f.horizon, "realization horizon for sampled points");
  app.add_option("--eta", f.eta, "largest accepted tail residual");
  app.add_option("--point", f.point, "named point, all-<label>, or 'sample'");
  app.add_option("--epsilon", f.epsilon, "approximation tolerance");
  app.add_option("--n-max", f.n_max, "largest switch index scanned");
  app.add_option("--depth", f.depth, "hull depth");
  app.add_option("--retries", f.retries, "sample budget for constructions");
  app.add_option("--r", f.r, "target value (default: midpoint of E[f])");
  app.add_option("--samples", f.samples, "number of samples or profiles");

  std::function<Output(const Flags&, const Scenario&)> action;
  auto command = [&](const std::string& name, const std::string& help, auto fn, CLI::App* parent) {
    CLI::App* sub = parent->add_subcommand(name, help);
    sub->add_option("scenario", f.scenario, "scenario file or built-in name")->required();
    sub->callback([&action, fn] { action = fn; });
    return sub;
  };
  command("expect", "certified E_sigma[f]", cmd_expect, &app);
  command("gn-trace", "reverse martingale values g_1..g_N at a point", cmd_trace, &app);
  command("strong-approx", "smallest n with |g_n - E| <= epsilon", cmd_strong, &app);
  command("weak-approx", "single-coordinate mixing certificate", cmd_weak, &app);
  command("verify-strong", "Monte Carlo campaign for strong approximation", cmd_verify_strong, &app);
  command("verify-weak", "Monte Carlo campaign for weak 0-approximation", cmd_verify_weak, &app);
  CLI::App* game = app.add_subcommand("game", "minmax evaluation and purification");
  game->require_subcommand(1);
  game->fallthrough();
  command("value", "max_a E[u(a, .)] against sigma or --point", cmd_game_value, game);
  command("purify", "finitistic profile within epsilon of sigma", cmd_game_purify, game);
  command("naming-demo", "naming game separation over random profiles", cmd_naming_demo, game);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream usage;
    const int code = app.exit(e, usage, usage);
    (code == 0 ? out : err) << usage.str();
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const Scenario s = resolve_scenario(f.scenario);
    const Output o = action(f, s);
    emit(o, f, out);
    return o.status;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::Parse:
      case ErrorKind::Validation:
      case ErrorKind::InvalidArgument:
      case ErrorKind::InvalidTolerance: return kExitUsage;
      case ErrorKind::PurificationFailed:
      case ErrorKind::StraddleNotFound:
      case ErrorKind::Undetermined: return kExitThreshold;
      default: return kExitFailure;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace infprod::cli
