#include "infprod/hybrid.hpp"

#include "infprod/error.hpp"

namespace infprod {

HybridMeasure::HybridMeasure(std::vector<Assignment> head, PointSpec tail_point)
    : head_(std::move(head)), point_(std::move(tail_point)) {
  const SpaceFamily& spaces = *point_.spaces();
  for (Index i = 1; i <= head_.size(); ++i) {
    const std::size_t size = spaces.at(i).size();
    const bool ok = std::visit(
        [&](const auto& a) {
          if constexpr (std::is_same_v<std::decay_t<decltype(a)>, CoordinateMeasure>) {
            return a.size() == size;
          } else {
            return a < size;
          }
        },
        head_[i - 1]);
    if (!ok) {
      throw Error(ErrorKind::Validation,
                  "hybrid coordinate " + std::to_string(i) + " does not match its space");
    }
  }
}

HybridMeasure HybridMeasure::switch_at(const ProductMeasure& sigma, const PointSpec& x, Index n) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "switch index is 1-based");
  std::vector<Assignment> head;
  head.reserve(n - 1);
  for (Index i = 1; i < n; ++i) head.emplace_back(sigma.resolve(i));
  return HybridMeasure(std::move(head), x);
}

Assignment HybridMeasure::at(Index i) const {
  if (i == 0) throw Error(ErrorKind::InvalidArgument, "coordinates are 1-based");
  if (i <= head_.size()) return head_[i - 1];
  return point_.at(i);
}

}  // namespace infprod
