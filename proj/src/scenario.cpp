#include "infprod/scenario.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "infprod/error.hpp"

namespace infprod {

namespace detail {
// Generated at build time from scenarios/*.json.
const std::vector<std::pair<std::string_view, std::string_view>>& embedded_scenarios();
}  // namespace detail

namespace {

using json = nlohmann::json;

[[noreturn]] void invalid(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::Validation, path + ": " + what);
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) invalid(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) invalid(path, "missing '" + key + "'");
  return *it;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) invalid(path, "expected a number");
  return v.get<double>();
}

std::uint64_t unsigned_integer(const json& v, const std::string& path) {
  if (!v.is_number_unsigned()) invalid(path, "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

std::string label(const json& v, const std::string& path) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  invalid(path, "expected a symbol label");
}

template <class Fn>
auto at_path(const std::string& path, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Validation && e.kind() != ErrorKind::InvalidArgument) throw;
    invalid(path, e.what());
  }
}

std::vector<std::string> labels(const json& v, const std::string& path) {
  if (!v.is_array()) invalid(path, "expected an array of labels");
  std::vector<std::string> out;
  for (std::size_t k = 0; k < v.size(); ++k) out.push_back(label(v[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

SpacesPtr parse_spaces(const json& v) {
  const std::string path = "spaces";
  std::vector<CoordinateSpace> head;
  if (v.contains("head")) {
    const json& h = v["head"];
    if (!h.is_array()) invalid(path + ".head", "expected an array");
    for (std::size_t k = 0; k < h.size(); ++k) {
      const std::string p = path + ".head[" + std::to_string(k) + "] (coordinate " + std::to_string(k + 1) + ")";
      head.push_back(at_path(p, [&] { return CoordinateSpace(labels(h[k], p)); }));
    }
  }
  const std::string p = path + ".tail";
  CoordinateSpace tail = at_path(p, [&] { return CoordinateSpace(labels(require(v, "tail", path), p)); });
  return std::make_shared<const SpaceFamily>(std::move(head), std::move(tail));
}

CoordinateMeasure coordinate_measure(const json& v, const std::string& path, std::size_t size) {
  if (!v.is_array()) invalid(path, "expected an array of weights");
  std::vector<double> w;
  for (std::size_t k = 0; k < v.size(); ++k) w.push_back(number(v[k], path + "[" + std::to_string(k) + "]"));
  if (w.size() != size) {
    invalid(path, "has " + std::to_string(w.size()) + " weights for " + std::to_string(size) + " symbols");
  }
  return at_path(path, [&] { return CoordinateMeasure(std::move(w)); });
}

std::shared_ptr<const ProductMeasure> parse_measure(const json& v, const SpacesPtr& spaces) {
  const std::string path = "measure";
  std::vector<CoordinateMeasure> head;
  if (v.contains("head")) {
    const json& h = v["head"];
    if (!h.is_array()) invalid(path + ".head", "expected an array");
    for (std::size_t k = 0; k < h.size(); ++k) {
      head.push_back(coordinate_measure(
          h[k], path + ".head[" + std::to_string(k) + "] (coordinate " + std::to_string(k + 1) + ")",
          spaces->at(k + 1).size()));
    }
  }
  const json& t = require(v, "tail", path);
  const std::string tp = path + ".tail";
  const json& kind = require(t, "kind", tp);
  const std::size_t n = spaces->tail().size();
  MeasureTail tail = ConstantMeasure{CoordinateMeasure::uniform(n)};
  if (kind == "constant") {
    tail = ConstantMeasure{coordinate_measure(require(t, "weights", tp), tp + ".weights", n)};
  } else if (kind == "periodic") {
    const json& cycle = require(t, "cycle", tp);
    if (!cycle.is_array() || cycle.empty()) invalid(tp + ".cycle", "expected a nonempty array");
    PeriodicMeasures p;
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      p.cycle.push_back(coordinate_measure(cycle[k], tp + ".cycle[" + std::to_string(k) + "]", n));
    }
    tail = std::move(p);
  } else if (kind == "formula") {
    const json& family = require(t, "family", tp);
    if (!family.is_string()) invalid(tp + ".family", "expected a string");
    std::map<std::string, double> params;
    if (t.contains("params")) {
      if (!t["params"].is_object()) invalid(tp + ".params", "expected an object");
      for (const auto& [key, val] : t["params"].items()) params[key] = number(val, tp + ".params." + key);
    }
    tail = at_path(tp, [&] { return FormulaFamily{make_formula(family.get<std::string>(), params, spaces->tail())}; });
  } else {
    invalid(tp + ".kind", "unknown tail kind " + kind.dump());
  }
  return at_path(path, [&] { return std::make_shared<const ProductMeasure>(spaces, std::move(head), std::move(tail)); });
}

PointSpec parse_point(const json& v, const SpacesPtr& spaces, const std::string& path) {
  std::vector<Symbol> head;
  if (v.contains("head")) {
    const auto ls = labels(v["head"], path + ".head");
    for (std::size_t k = 0; k < ls.size(); ++k) {
      const std::string p = path + ".head[" + std::to_string(k) + "] (coordinate " + std::to_string(k + 1) + ")";
      head.push_back(at_path(p, [&] { return spaces->at(k + 1).symbol(ls[k]); }));
    }
  }
  const json& t = require(v, "tail", path);
  const std::string tp = path + ".tail";
  const json& kind = require(t, "kind", tp);
  SymbolRule rule;
  if (kind == "constant-symbol") {
    const std::string l = label(require(t, "symbol", tp), tp + ".symbol");
    rule = ConstantSymbol{at_path(tp, [&] { return spaces->tail().symbol(l); })};
  } else if (kind == "periodic-symbols") {
    const auto ls = labels(require(t, "cycle", tp), tp + ".cycle");
    if (ls.empty()) invalid(tp + ".cycle", "expected a nonempty cycle");
    PeriodicSymbols p;
    for (const auto& l : ls) p.cycle.push_back(at_path(tp, [&] { return spaces->tail().symbol(l); }));
    rule = std::move(p);
  } else {
    invalid(tp + ".kind", "unknown symbol rule " + kind.dump());
  }
  return at_path(path, [&] { return PointSpec::described(spaces, std::move(head), std::move(rule)); });
}

PointSpec point_by_name(const std::map<std::string, PointSpec>& points, const SpacesPtr& spaces,
                        const std::string& name) {
  const auto it = points.find(name);
  if (it != points.end()) return it->second;
  if (name.rfind("all-", 0) == 0) {
    if (const auto s = spaces->tail().find(name.substr(4))) return PointSpec::constant(spaces, *s);
  }
  throw Error(ErrorKind::Validation, "unknown point '" + name + "'");
}

TailFunction parse_function(const json& v, const SpacesPtr& spaces, const std::map<std::string, PointSpec>& points,
                            const std::string& path) {
  const json& family = require(v, "family", path);
  if (family == "cylinder") {
    const json& table = require(v, "table", path);
    if (!table.is_array()) invalid(path + ".table", "expected an array");
    std::vector<double> cells;
    for (std::size_t k = 0; k < table.size(); ++k) {
      cells.push_back(number(table[k], path + ".table[" + std::to_string(k) + "]"));
    }
    const auto depth = unsigned_integer(require(v, "depth", path), path + ".depth");
    return at_path(path, [&] { return TailFunction::cylinder(spaces, depth, std::move(cells)); });
  }
  if (family == "linear") {
    const json& c = require(v, "coefficients", path);
    if (!c.is_array()) invalid(path + ".coefficients", "expected an array");
    std::vector<double> coeffs;
    for (std::size_t k = 0; k < c.size(); ++k) {
      coeffs.push_back(number(c[k], path + ".coefficients[" + std::to_string(k) + "]"));
    }
    const double constant = v.contains("constant") ? number(v["constant"], path + ".constant") : 0.0;
    return at_path(path, [&] { return TailFunction::linear(spaces, std::move(coeffs), constant); });
  }
  if (family == "constant") {
    const double c = number(require(v, "value", path), path + ".value");
    return TailFunction::constant(spaces, c);
  }
  if (family == "discounted-sum") {
    std::map<std::string, double> scores;
    const json& s = require(v, "scores", path);
    if (!s.is_object()) invalid(path + ".scores", "expected an object keyed by label");
    for (const auto& [key, val] : s.items()) scores[key] = number(val, path + ".scores." + key);
    const double scale = v.contains("scale") ? number(v["scale"], path + ".scale") : 1.0;
    const double ratio = v.contains("ratio") ? number(v["ratio"], path + ".ratio") : 0.5;
    return at_path(path, [&] { return TailFunction::discounted_sum(spaces, scores, scale, ratio); });
  }
  if (family == "product-indicator") {
    const json& t = require(v, "targets", path);
    PointSpec targets = t.is_string() ? at_path(path + ".targets", [&] {
      return point_by_name(points, spaces, t.get<std::string>());
    })
                                      : parse_point(t, spaces, path + ".targets");
    return TailFunction::product_indicator(std::move(targets));
  }
  invalid(path + ".family", "unknown function family " + family.dump());
}

void parse_defaults(const json& v, ScenarioDefaults& d) {
  const std::string path = "defaults";
  if (!v.is_object()) invalid(path, "expected an object");
  for (const auto& [key, val] : v.items()) {
    const std::string p = path + "." + key;
    if (key == "epsilon") d.epsilon = number(val, p);
    else if (key == "n_max") d.n_max = unsigned_integer(val, p);
    else if (key == "horizon") d.horizon = unsigned_integer(val, p);
    else if (key == "depth") d.depth = unsigned_integer(val, p);
    else if (key == "samples") d.samples = unsigned_integer(val, p);
    else if (key == "seed") d.seed = unsigned_integer(val, p);
    else if (key == "tol") d.tol = number(val, p);
    else if (key == "point") {
      if (!val.is_string()) invalid(p, "expected a point name");
      d.point = val.get<std::string>();
    } else {
      invalid(p, "unknown default");
    }
  }
}

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int k = 15; k >= 0; --k, h >>= 4) out[k] = digits[h & 15];
  return out;
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t k = 0; k + 1 < offset && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

}  // namespace

PointSpec Scenario::point(const std::string& name) const { return point_by_name(points, spaces, name); }

const TailFunction& Scenario::require_function() const {
  if (!function) throw Error(ErrorKind::Validation, "scenario '" + name + "' declares no function");
  return *function;
}

Scenario parse_scenario(std::string_view text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte);
    std::string what = e.what();
    if (const auto cut = what.find("parse error"); cut != std::string::npos) what = what.substr(cut);
    throw Error(ErrorKind::Parse, origin + ": line " + std::to_string(line) + ", column " +
                                      std::to_string(column) + ": " + what);
  }
  if (!doc.is_object()) invalid("<root>", "expected an object");

  try {
    Scenario s;
    s.digest = fnv1a_hex(doc.dump());
    s.name = doc.contains("name") && doc["name"].is_string() ? doc["name"].get<std::string>() : origin;
    s.spaces = parse_spaces(require(doc, "spaces", "<root>"));
    s.measure = parse_measure(require(doc, "measure", "<root>"), s.spaces);
    if (doc.contains("points")) {
      const json& pts = doc["points"];
      if (!pts.is_object()) invalid("points", "expected an object");
      for (const auto& [key, val] : pts.items()) s.points.emplace(key, parse_point(val, s.spaces, "points." + key));
    }
    if (doc.contains("function")) s.function = parse_function(doc["function"], s.spaces, s.points, "function");
    if (doc.contains("thresholds")) {
      const json& th = doc["thresholds"];
      if (!th.is_object()) invalid("thresholds", "expected an object");
      for (const auto& [key, val] : th.items()) {
        const double f = number(val, "thresholds." + key);
        if (!(f >= 0.0 && f <= 1.0)) invalid("thresholds." + key, "must lie in [0, 1]");
        s.thresholds[key] = f;
      }
    }
    if (doc.contains("defaults")) parse_defaults(doc["defaults"], s.defaults);

    if (doc.contains("game")) {
      const json& g = doc["game"];
      const json& kind = require(g, "kind", "game");
      if (kind == "naming") {
        s.game_kind = GameKind::Naming;
      } else if (kind == "finite") {
        s.game_kind = GameKind::Finite;
        const json& acts = require(g, "actions", "game");
        if (!acts.is_array() || acts.empty()) invalid("game.actions", "expected a nonempty array");
        std::vector<GameAction> actions;
        for (std::size_t k = 0; k < acts.size(); ++k) {
          const std::string p = "game.actions[" + std::to_string(k) + "]";
          const json& name = require(acts[k], "name", p);
          if (!name.is_string()) invalid(p + ".name", "expected a string");
          actions.push_back({name.get<std::string>(),
                             parse_function(require(acts[k], "function", p), s.spaces, s.points, p + ".function")});
        }
        if (g.contains("payoff_range")) {
          const json& r = g["payoff_range"];
          if (!r.is_array() || r.size() != 2) invalid("game.payoff_range", "expected [lo, hi]");
          const Interval range(number(r[0], "game.payoff_range[0]"), number(r[1], "game.payoff_range[1]"));
          s.game = at_path("game", [&] { return GameSpec(s.spaces, std::move(actions), range); });
        } else {
          s.game = at_path("game", [&] { return GameSpec(s.spaces, std::move(actions)); });
        }
      } else {
        invalid("game.kind", "unknown game kind " + kind.dump());
      }
    }
    return s;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Validation, origin + ": " + e.what());
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Validation) throw;
    throw Error(ErrorKind::Validation, origin + ": " + e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read scenario file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str(), path.string());
}

std::vector<std::string> builtin_scenarios() {
  std::vector<std::string> out;
  for (const auto& [name, text] : detail::embedded_scenarios()) out.emplace_back(name);
  return out;
}

std::string_view builtin_scenario_text(std::string_view name) {
  for (const auto& [n, text] : detail::embedded_scenarios()) {
    if (n == name) return text;
  }
  throw Error(ErrorKind::InvalidArgument, "no built-in scenario named '" + std::string(name) + "'");
}

Scenario builtin_scenario(std::string_view name) {
  return parse_scenario(builtin_scenario_text(name), std::string(name));
}

Scenario resolve_scenario(const std::string& path_or_name) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(path_or_name, ec)) return load_scenario(path_or_name);
  return builtin_scenario(path_or_name);
}

}  // namespace infprod
