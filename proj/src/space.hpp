#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cardinal.hpp"
#include "rational.hpp"

namespace uc {

struct TriangleViolation {
  std::size_t x, y, z;  // d(x,z) > max(d(x,y), d(y,z))
};

struct SpaceValidation {
  std::vector<std::string> issues;  // shape, symmetry, separation problems
  std::vector<TriangleViolation> triangle_violations;
  bool ok() const { return issues.empty() && triangle_violations.empty(); }
};

// Finite ultrametric space backed by an explicit distance matrix.
class FiniteUltraSpace {
public:
  static SpaceValidation validate(
      const std::vector<std::string>& points,
      const std::vector<std::vector<Rational>>& dist);
  // validates and throws InvalidInput on any violation
  static FiniteUltraSpace create(std::vector<std::string> points,
                                 std::vector<std::vector<Rational>> dist);

  std::size_t size() const { return points_.size(); }
  const std::vector<std::string>& points() const { return points_; }
  const std::string& point(std::size_t i) const { return points_[i]; }
  std::size_t index_of(const std::string& id) const;
  const Rational& dist(std::size_t i, std::size_t j) const {
    return dist_[i][j];
  }

  Rational diameter() const;  // 0 when |X| <= 1
  // sorted distinct positive distances
  std::vector<Rational> realized_scales() const;

  // closed ball, sorted point indices; r < 0 is rejected
  std::vector<std::size_t> ball(std::size_t x, const Rational& r) const;

  // number of distinct closed eps-balls needed to cover B_delta(x); balls
  // centered inside the delta-ball partition it, so this is a partition
  // count. Radius 0 is allowed and yields singleton balls.
  std::uint64_t cov(std::size_t x, const Rational& eps,
                    const Rational& delta) const;

  // exhaustive minimum over arbitrary center sets; |X| <= 12
  std::uint64_t min_cover_bruteforce(std::size_t x, const Rational& eps,
                                     const Rational& delta) const;

  // smallest r with X = union of B_r(l), l in L, or nullopt when L cannot
  // reach all of X (empty L against a nonempty space)
  std::optional<Rational> large_subset_radius(
      const std::vector<std::size_t>& L) const;

  // exhaustive check that Iso(X) acts transitively; |X| <= 8
  bool is_isometrically_homogeneous() const;

private:
  FiniteUltraSpace(std::vector<std::string> points,
                   std::vector<std::vector<Rational>> dist);
  std::vector<std::string> points_;
  std::vector<std::vector<Rational>> dist_;
  std::map<std::string, std::size_t> index_;
};

// Group-chain model: finitely supported sequences x = (x_1, x_2, ...) with
// x_k ranging over deg(k) symbols, metric d(x, y) = largest k with x_k != y_k.
// Infinite degree entries admit arbitrary natural coordinates.
class SequenceSpace {
public:
  using Point = std::vector<std::uint64_t>;  // x_1, x_2, ... trailing zeros cut

  explicit SequenceSpace(CardinalSeq degrees);

  const CardinalSeq& degrees() const { return degrees_; }
  Cardinal degree(std::uint64_t k) const;  // k >= 1

  static Point normalize(Point p);
  bool contains(const Point& p) const;
  std::uint64_t distance(const Point& a, const Point& b) const;

  static std::string point_id(const Point& p);  // "0", "2", "1.0.3"
  static Point parse_point(const std::string& id);

  // true when the tail degrees collapse to 1, i.e. the point set is finite
  bool is_bounded() const;
  // largest k with deg(k) >= 2, defined for bounded spaces (0 when none)
  std::uint64_t bounded_support() const;
  std::vector<Point> enumerate_bounded() const;

  // finite window: all tuples of length `level` with coordinate k below
  // min(deg(k), cap); materialized as an explicit space with normalized ids
  FiniteUltraSpace truncate(std::uint64_t level, std::uint64_t cap) const;

private:
  CardinalSeq degrees_;
};

inline SequenceSpace group_chain_space(CardinalSeq degrees) {
  return SequenceSpace(std::move(degrees));
}

// Uniform point/distance access over the two space models, the currency of
// multi-maps and certificates. Point ids are the space's own id scheme.
class MetricRef {
public:
  static MetricRef finite(std::shared_ptr<const FiniteUltraSpace> space);
  static MetricRef sequence(std::shared_ptr<const SequenceSpace> space);

  bool is_finite() const { return finite_ != nullptr; }
  const FiniteUltraSpace& finite_space() const;
  const SequenceSpace& sequence_space() const;
  std::shared_ptr<const FiniteUltraSpace> finite_ptr() const {
    return finite_;
  }
  std::shared_ptr<const SequenceSpace> sequence_ptr() const {
    return sequence_;
  }

  bool contains(const std::string& id) const;
  Rational distance(const std::string& a, const std::string& b) const;
  // every point for finite spaces; bounded enumeration for sequence spaces,
  // rejected when unbounded
  std::vector<std::string> all_points() const;

private:
  MetricRef() = default;
  std::shared_ptr<const FiniteUltraSpace> finite_;
  std::shared_ptr<const SequenceSpace> sequence_;
};

}  // namespace uc
