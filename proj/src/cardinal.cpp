#include "cardinal.hpp"

#include <algorithm>
#include <limits>

#include "error.hpp"

namespace uc {

std::uint64_t Cardinal::finite_value() const {
  if (infinite_) fail_internal("finite_value() on an infinite cardinal");
  return value_;
}

std::uint64_t Cardinal::aleph_index() const {
  if (!infinite_) fail_internal("aleph_index() on a finite cardinal");
  return value_;
}

Cardinal Cardinal::successor() const {
  if (infinite_) return aleph(value_ + 1);
  if (value_ == std::numeric_limits<std::uint64_t>::max())
    fail_input("finite cardinal overflow in successor");
  return finite(value_ + 1);
}

std::strong_ordering Cardinal::operator<=>(const Cardinal& other) const {
  if (infinite_ != other.infinite_)
    return infinite_ ? std::strong_ordering::greater
                     : std::strong_ordering::less;
  return value_ <=> other.value_;
}

std::string Cardinal::str() const {
  if (infinite_) return "aleph" + std::to_string(value_);
  return std::to_string(value_);
}

std::optional<Cardinal> Cardinal::parse(const std::string& text) {
  std::string digits = text;
  bool infinite = false;
  if (text.rfind("aleph", 0) == 0) {
    infinite = true;
    digits = text.substr(5);
  }
  if (digits.empty()) return std::nullopt;
  std::uint64_t value = 0;
  for (char c : digits) {
    if (c < '0' || c > '9') return std::nullopt;
    if (value > (std::numeric_limits<std::uint64_t>::max() - (c - '0')) / 10)
      return std::nullopt;
    value = value * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return infinite ? Cardinal::aleph(value) : Cardinal::finite(value);
}

Cardinal product(const Cardinal& a, const Cardinal& b) {
  if (a == Cardinal::finite(0) || b == Cardinal::finite(0))
    return Cardinal::finite(0);
  if (a.is_infinite() || b.is_infinite()) return std::max(a, b);
  std::uint64_t x = a.finite_value(), y = b.finite_value();
  if (x > std::numeric_limits<std::uint64_t>::max() / y)
    fail_input("finite cardinal overflow in product");
  return Cardinal::finite(x * y);
}

CardinalSeq::CardinalSeq(std::vector<Cardinal> prefix, Tail tail,
                         bool declared_non_decreasing)
    : prefix_(std::move(prefix)),
      tail_(std::move(tail)),
      declared_non_decreasing_(declared_non_decreasing) {}

bool CardinalSeq::tail_is_constant() const {
  return std::holds_alternative<ConstantTail>(tail_);
}

Cardinal CardinalSeq::constant_tail_value() const {
  if (!tail_is_constant()) fail_internal("tail is not constant");
  return std::get<ConstantTail>(tail_).value;
}

Cardinal CardinalSeq::at(std::uint64_t n) const {
  if (n < prefix_.size()) return prefix_[n];
  if (tail_is_constant()) return constant_tail_value();
  // canonical unbounded-finite representative: strictly increasing finites
  // starting just above the largest finite prefix entry
  std::uint64_t base = 0;
  for (const auto& c : prefix_)
    if (c.is_finite()) base = std::max(base, c.finite_value());
  return Cardinal::finite(base + (n - prefix_.size()) + 1);
}

bool CardinalSeq::is_non_decreasing() const {
  for (std::size_t i = 1; i < prefix_.size(); ++i)
    if (prefix_[i] < prefix_[i - 1]) return false;
  if (tail_is_constant()) {
    if (!prefix_.empty() && constant_tail_value() < prefix_.back())
      return false;
    return true;
  }
  // unbounded-finite tails are strictly increasing but stay finite, so any
  // infinite prefix entry breaks monotonicity; the canonical representative
  // dominates every finite prefix entry by construction
  for (const auto& c : prefix_)
    if (c.is_infinite()) return false;
  return true;
}

Cardinal CardinalSeq::sup() const {
  if (declared_non_decreasing_ && !is_non_decreasing())
    fail_input("sequence declared non-decreasing but is not");
  Cardinal best = Cardinal::finite(0);  // sup of the empty family
  for (const auto& c : prefix_) best = std::max(best, c);
  if (tail_is_constant()) return std::max(best, constant_tail_value());
  return std::max(best, Cardinal::aleph(0));
}

bool operator==(const CardinalSeq& a, const CardinalSeq& b) {
  return a.prefix_ == b.prefix_ && a.tail_ == b.tail_;
}

CardinalSeq cofinal_ladder(const Cardinal& kappa) {
  if (kappa.is_finite()) {
    std::uint64_t n = kappa.finite_value();
    if (n < 2)
      fail_hypothesis("degenerate class: no cofinal ladder below 2 (" +
                      kappa.str() + ")");
    return CardinalSeq::constant(Cardinal::finite(n - 1), true);
  }
  if (kappa.aleph_index() == 0)
    return CardinalSeq::unbounded_finite({}, true);
  return CardinalSeq::constant(Cardinal::aleph(kappa.aleph_index() - 1), true);
}

}  // namespace uc
