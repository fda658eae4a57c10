#include "infprod/measure.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

#include "infprod/error.hpp"

namespace infprod {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string describe_sum(double s) {
  std::ostringstream os;
  os.precision(17);
  os << s;
  return os.str();
}

std::size_t measure_period(const ConstantMeasure&) { return 1; }
std::size_t measure_period(const PeriodicMeasures& p) { return p.cycle.size(); }

// Smallest combined period covering both cycles.
std::size_t joint_period(std::size_t a, std::size_t b) { return std::lcm(a, b); }

Interval expected_score(const CoordinateMeasure& m, std::span<const double> score) {
  Interval acc{0.0};
  for (Symbol s = 0; s < m.size(); ++s) acc += Interval(m.weight(s)) * Interval(score[s]);
  return acc;
}

// sum_{i >= first} scale * ratio^i * E_i over an absolute cycle of expectations.
Interval cyclic_discounted(Index first, const std::vector<Interval>& per_coordinate,
                           double scale, double ratio) {
  const std::size_t period = per_coordinate.size();
  const Interval q{ratio};
  const Interval denom = Interval(1.0) - pow(q, period);
  Interval acc{0.0};
  Interval w = Interval(scale) * pow(q, first);
  for (std::size_t j = 0; j < period; ++j) {
    acc += w * per_coordinate[(first + j - 1) % period];
    w *= q;
  }
  return acc / denom;
}

class GeometricBernoulliFormula final : public MeasureFormula {
 public:
  GeometricBernoulliFormula(double base, Symbol one) : base_(base), one_(one) {
    if (!(base > 1.0) || !std::isfinite(base)) {
      throw Error(ErrorKind::Validation, "geometric-bernoulli needs base > 1");
    }
    if (one > 1) throw Error(ErrorKind::Validation, "geometric-bernoulli is defined on binary spaces");
  }

  std::string id() const override { return "geometric-bernoulli"; }
  std::map<std::string, double> params() const override {
    return {{"base", base_}, {"one", static_cast<double>(one_)}};
  }

  CoordinateMeasure at(Index i) const override {
    const double miss = std::pow(base_, -static_cast<double>(i));
    std::vector<double> w(2);
    w[one_] = 1.0 - miss;
    w[1 - one_] = miss;
    return CoordinateMeasure(std::move(w));
  }

  Interval weight(Index i, Symbol s) const override {
    const Interval miss = miss_at(i);
    return s == one_ ? Interval(1.0) - miss : miss;
  }

  std::optional<Interval> target_product(Index first, const SymbolRule& target) const override {
    // Infinitely many factors base^{-i} drive the product to zero.
    for (std::size_t j = 0; j < rule_period(target); ++j) {
      if (rule_symbol(target, first + j) != one_) return Interval(0.0);
    }
    // prod_{i >= n} (1 - b^{-i}) lies in [1 - sum_{i>=n} b^{-i}, 1]; take
    // enough explicit factors that the remainder is below 1e-18.
    Interval acc{1.0};
    Index i = first;
    for (;; ++i) {
      const Interval rest = remainder_from(i);
      if (i >= first + 64 && rest.hi < 1e-18) {
        return acc * Interval(rounding::add_down(1.0, -rest.hi), 1.0);
      }
      acc *= Interval(1.0) - miss_at(i);
    }
  }

  std::optional<Interval> discounted_score(Index first, std::span<const double> score, double scale,
                                           double ratio) const override {
    // E_i[score] = s_one + (s_other - s_one) * b^{-i}.
    const double s_one = score[one_];
    const double s_other = score[1 - one_];
    const Interval q{ratio};
    const Interval c{scale};
    Interval acc = c * Interval(s_one) * pow(q, first) / (Interval(1.0) - q);
    const Interval qb = q / Interval(base_);
    acc += c * (Interval(s_other) - Interval(s_one)) * pow(qb, first) / (Interval(1.0) - qb);
    return acc;
  }

  double miss_mass(Index first, const SymbolRule& target) const override {
    for (std::size_t j = 0; j < rule_period(target); ++j) {
      if (rule_symbol(target, first + j) != one_) return kInf;
    }
    return remainder_from(first).hi;
  }

  double sup_max_weight(Index) const override { return 1.0; }

 private:
  Interval miss_at(Index i) const { return pow(Interval(1.0) / Interval(base_), i); }
  // sum_{i >= n} b^{-i} = b^{-n} * b / (b - 1)
  Interval remainder_from(Index n) const {
    return miss_at(n) * Interval(base_) / (Interval(base_) - Interval(1.0));
  }

  double base_;
  Symbol one_;
};

}  // namespace

CoordinateMeasure::CoordinateMeasure(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw Error(ErrorKind::Validation, "empty probability vector");
  double sum = 0.0;
  for (std::size_t s = 0; s < weights_.size(); ++s) {
    const double w = weights_[s];
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(ErrorKind::Validation, "weight " + std::to_string(s) + " is negative or not finite");
    }
    sum += w;
  }
  if (std::fabs(sum - 1.0) > kProbabilityTolerance) {
    throw Error(ErrorKind::Validation, "weights sum to " + describe_sum(sum) + ", expected 1");
  }
}

CoordinateMeasure CoordinateMeasure::dirac(std::size_t size, Symbol s) {
  if (s >= size) throw Error(ErrorKind::InvalidArgument, "dirac symbol outside the space");
  std::vector<double> w(size, 0.0);
  w[s] = 1.0;
  return CoordinateMeasure(std::move(w));
}

CoordinateMeasure CoordinateMeasure::uniform(std::size_t size) {
  return CoordinateMeasure(std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

CoordinateMeasure CoordinateMeasure::bernoulli(double p_one) {
  return CoordinateMeasure({1.0 - p_one, p_one});
}

std::optional<Symbol> CoordinateMeasure::dirac_symbol() const {
  for (Symbol s = 0; s < weights_.size(); ++s) {
    if (weights_[s] == 1.0) return s;
  }
  return std::nullopt;
}

Symbol CoordinateMeasure::draw(double u) const {
  double cumulative = 0.0;
  Symbol last_positive = 0;
  for (Symbol s = 0; s < weights_.size(); ++s) {
    if (weights_[s] <= 0.0) continue;
    last_positive = s;
    cumulative += weights_[s];
    if (u < cumulative) return s;
  }
  return last_positive;
}

std::shared_ptr<const MeasureFormula> geometric_bernoulli(double base, Symbol one) {
  return std::make_shared<const GeometricBernoulliFormula>(base, one);
}

namespace {

using Factory = std::function<std::shared_ptr<const MeasureFormula>(
    const std::map<std::string, double>&, const CoordinateSpace&)>;

const std::map<std::string, Factory>& registry() {
  static const std::map<std::string, Factory> r = {
      {"geometric-bernoulli",
       [](const std::map<std::string, double>& p, const CoordinateSpace& space) {
         if (space.size() != 2) {
           throw Error(ErrorKind::Validation, "geometric-bernoulli needs a binary tail space");
         }
         for (const auto& [k, v] : p) {
           if (k != "base" && k != "one") {
             throw Error(ErrorKind::Validation, "geometric-bernoulli: unknown parameter '" + k + "'");
           }
         }
         const double base = p.count("base") ? p.at("base") : 2.0;
         Symbol one = space.find("1").value_or(1);
         if (p.count("one")) one = static_cast<Symbol>(p.at("one"));
         return geometric_bernoulli(base, one);
       }},
  };
  return r;
}

}  // namespace

std::shared_ptr<const MeasureFormula> make_formula(const std::string& id,
                                                   const std::map<std::string, double>& params,
                                                   const CoordinateSpace& tail_space) {
  const auto& r = registry();
  const auto it = r.find(id);
  if (it == r.end()) throw Error(ErrorKind::Validation, "unregistered formula family '" + id + "'");
  return it->second(params, tail_space);
}

std::vector<std::string> registered_formulas() {
  std::vector<std::string> ids;
  for (const auto& [id, _] : registry()) ids.push_back(id);
  return ids;
}

ProductMeasure::ProductMeasure(SpacesPtr spaces, std::vector<CoordinateMeasure> head, MeasureTail tail)
    : spaces_(std::move(spaces)), head_(std::move(head)), tail_(std::move(tail)) {
  if (!spaces_) throw Error(ErrorKind::InvalidArgument, "product measure without spaces");
  if (head_.size() < spaces_->head_size()) {
    throw Error(ErrorKind::Validation, "measure head has " + std::to_string(head_.size()) +
                                           " coordinates but the space family declares " +
                                           std::to_string(spaces_->head_size()));
  }
  for (Index i = 1; i <= head_.size(); ++i) {
    if (head_[i - 1].size() != spaces_->at(i).size()) {
      throw Error(ErrorKind::Validation,
                  "coordinate " + std::to_string(i) + ": measure support does not match its space");
    }
  }
  const std::size_t tail_size = spaces_->tail().size();
  std::visit(
      [&](const auto& rule) {
        using T = std::decay_t<decltype(rule)>;
        if constexpr (std::is_same_v<T, ConstantMeasure>) {
          if (rule.measure.size() != tail_size) {
            throw Error(ErrorKind::Validation, "tail measure does not match the tail space");
          }
        } else if constexpr (std::is_same_v<T, PeriodicMeasures>) {
          if (rule.cycle.empty()) throw Error(ErrorKind::Validation, "empty periodic tail");
          for (const auto& m : rule.cycle) {
            if (m.size() != tail_size) {
              throw Error(ErrorKind::Validation, "periodic tail measure does not match the tail space");
            }
          }
        } else {
          if (!rule.formula) throw Error(ErrorKind::Validation, "formula tail without a family");
        }
      },
      tail_);
}

ProductMeasure ProductMeasure::iid(SpacesPtr spaces, CoordinateMeasure m) {
  return ProductMeasure(std::move(spaces), {}, ConstantMeasure{std::move(m)});
}

CoordinateMeasure ProductMeasure::resolve(Index i) const {
  if (i == 0) throw Error(ErrorKind::InvalidArgument, "coordinates are 1-based");
  if (i <= head_.size()) return head_[i - 1];
  return std::visit(
      [&](const auto& rule) -> CoordinateMeasure {
        using T = std::decay_t<decltype(rule)>;
        if constexpr (std::is_same_v<T, ConstantMeasure>) {
          return rule.measure;
        } else if constexpr (std::is_same_v<T, PeriodicMeasures>) {
          return rule.cycle[(i - 1) % rule.cycle.size()];
        } else {
          return rule.formula->at(i);
        }
      },
      tail_);
}

Interval ProductMeasure::weight(Index i, Symbol s) const {
  if (i > head_.size()) {
    if (const auto* f = std::get_if<FormulaFamily>(&tail_)) return f->formula->weight(i, s);
  }
  return Interval(resolve(i).weight(s));
}

std::optional<Interval> ProductMeasure::tail_target_product(Index first, const SymbolRule& target) const {
  return std::visit(
      [&](const auto& rule) -> std::optional<Interval> {
        using T = std::decay_t<decltype(rule)>;
        if constexpr (std::is_same_v<T, FormulaFamily>) {
          return rule.formula->target_product(first, target);
        } else {
          // A cyclic factor strictly below one repeats forever.
          const std::size_t period =
              joint_period(measure_period(rule), rule_period(target));
          for (std::size_t j = 0; j < period; ++j) {
            if (resolve(first + j).weight(rule_symbol(target, first + j)) < 1.0) return Interval(0.0);
          }
          return Interval(1.0);
        }
      },
      tail_);
}

std::optional<Interval> ProductMeasure::tail_discounted_score(Index first, std::span<const double> score,
                                                              double scale, double ratio) const {
  return std::visit(
      [&](const auto& rule) -> std::optional<Interval> {
        using T = std::decay_t<decltype(rule)>;
        if constexpr (std::is_same_v<T, FormulaFamily>) {
          return rule.formula->discounted_score(first, score, scale, ratio);
        } else if constexpr (std::is_same_v<T, ConstantMeasure>) {
          return cyclic_discounted(first, {expected_score(rule.measure, score)}, scale, ratio);
        } else {
          std::vector<Interval> per;
          for (const auto& m : rule.cycle) per.push_back(expected_score(m, score));
          return cyclic_discounted(first, per, scale, ratio);
        }
      },
      tail_);
}

double ProductMeasure::tail_miss_mass(Index first, const SymbolRule& target) const {
  return std::visit(
      [&](const auto& rule) -> double {
        using T = std::decay_t<decltype(rule)>;
        if constexpr (std::is_same_v<T, FormulaFamily>) {
          return rule.formula->miss_mass(first, target);
        } else {
          const std::size_t period =
              joint_period(measure_period(rule), rule_period(target));
          for (std::size_t j = 0; j < period; ++j) {
            if (resolve(first + j).weight(rule_symbol(target, first + j)) < 1.0) return kInf;
          }
          return 0.0;
        }
      },
      tail_);
}

double ProductMeasure::tail_sup_max_weight(Index first) const {
  return std::visit(
      [&](const auto& rule) -> double {
        using T = std::decay_t<decltype(rule)>;
        auto max_weight = [](const CoordinateMeasure& m) {
          double best = 0.0;
          for (double w : m.weights()) best = std::max(best, w);
          return best;
        };
        if constexpr (std::is_same_v<T, FormulaFamily>) {
          return rule.formula->sup_max_weight(first);
        } else if constexpr (std::is_same_v<T, ConstantMeasure>) {
          return max_weight(rule.measure);
        } else {
          double best = 0.0;
          for (const auto& m : rule.cycle) best = std::max(best, max_weight(m));
          return best;
        }
      },
      tail_);
}

}  // namespace infprod
