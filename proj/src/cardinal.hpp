#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace uc {

// Symbolic cardinal: either a finite value n or an aleph number. The order
// puts every finite below every aleph; alephs compare by index.
class Cardinal {
public:
  static Cardinal finite(std::uint64_t n) { return Cardinal(false, n); }
  static Cardinal aleph(std::uint64_t k) { return Cardinal(true, k); }

  bool is_finite() const { return !infinite_; }
  bool is_infinite() const { return infinite_; }
  std::uint64_t finite_value() const;  // requires is_finite()
  std::uint64_t aleph_index() const;   // requires is_infinite()

  // successor: n+1 for finites, aleph(k+1) for alephs
  Cardinal successor() const;

  friend bool operator==(const Cardinal&, const Cardinal&) = default;
  std::strong_ordering operator<=>(const Cardinal& other) const;

  std::string str() const;  // "3", "aleph0", "aleph1", ...
  static std::optional<Cardinal> parse(const std::string& text);

private:
  Cardinal(bool infinite, std::uint64_t value)
      : infinite_(infinite), value_(value) {}
  bool infinite_;
  std::uint64_t value_;
};

// Cardinal product: exact for finite pairs, absorbing (max) once an infinite
// factor appears. Multiplication by zero stays zero.
Cardinal product(const Cardinal& a, const Cardinal& b);

// Closed-form total map from naturals to cardinals: an explicit prefix
// followed by a tail rule. The unbounded_finite tail enumerates a strictly
// increasing sequence of finite values (a canonical representative; its
// pointwise values are not meaningful beyond "finite, unbounded").
class CardinalSeq {
public:
  struct ConstantTail {
    Cardinal value;
    friend bool operator==(const ConstantTail&, const ConstantTail&) = default;
  };
  struct UnboundedFiniteTail {
    friend bool operator==(const UnboundedFiniteTail&,
                           const UnboundedFiniteTail&) = default;
  };
  using Tail = std::variant<ConstantTail, UnboundedFiniteTail>;

  CardinalSeq(std::vector<Cardinal> prefix, Tail tail,
              bool declared_non_decreasing = false);

  static CardinalSeq constant(Cardinal value,
                              bool declared_non_decreasing = false) {
    return CardinalSeq({}, ConstantTail{value}, declared_non_decreasing);
  }
  static CardinalSeq unbounded_finite(std::vector<Cardinal> prefix = {},
                                      bool declared_non_decreasing = false) {
    return CardinalSeq(std::move(prefix), UnboundedFiniteTail{},
                       declared_non_decreasing);
  }

  Cardinal at(std::uint64_t n) const;
  const std::vector<Cardinal>& prefix() const { return prefix_; }
  const Tail& tail() const { return tail_; }
  bool tail_is_constant() const;
  bool tail_is_unbounded_finite() const { return !tail_is_constant(); }
  Cardinal constant_tail_value() const;  // requires tail_is_constant()

  bool declared_non_decreasing() const { return declared_non_decreasing_; }
  bool is_non_decreasing() const;

  // Least upper bound of the range. Non-decreasing declarations are enforced
  // here: a declared-monotone sequence that is not monotone is rejected.
  Cardinal sup() const;

  friend bool operator==(const CardinalSeq&, const CardinalSeq&);

private:
  std::vector<Cardinal> prefix_;
  Tail tail_;
  bool declared_non_decreasing_;
};

// Non-decreasing sequence whose supremum of successors is kappa, used to
// drive the homogeneous models. Rejects kappa in {0, 1}.
CardinalSeq cofinal_ladder(const Cardinal& kappa);

}  // namespace uc
