#include "doctest.h"

#include <algorithm>
#include <memory>
#include <set>
#include <vector>

#include "error.hpp"
#include "rng.hpp"
#include "space.hpp"

using namespace uc;

namespace {

Rational Q(std::int64_t p, std::int64_t q = 1) { return {p, q}; }

FiniteUltraSpace make_q4() {
  std::vector<std::vector<Rational>> d = {
      {Q(0), Q(1), Q(2), Q(2)},
      {Q(1), Q(0), Q(2), Q(2)},
      {Q(2), Q(2), Q(0), Q(1)},
      {Q(2), Q(2), Q(1), Q(0)},
  };
  return FiniteUltraSpace::create({"a", "b", "c", "d"}, std::move(d));
}

// eight binary strings of length 3; distance = largest differing position
FiniteUltraSpace make_c3() {
  std::vector<std::string> pts;
  for (int i = 0; i < 8; ++i) {
    std::string s;
    for (int k = 0; k < 3; ++k) s += char('0' + ((i >> k) & 1));
    pts.push_back(s);
  }
  std::vector<std::vector<Rational>> d(8, std::vector<Rational>(8, Q(0)));
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      int last = 0;
      for (int k = 0; k < 3; ++k)
        if (pts[i][k] != pts[j][k]) last = k + 1;
      d[i][j] = Q(last);
    }
  return FiniteUltraSpace::create(std::move(pts), std::move(d));
}

// random finite ultrametric space as leaves of a random labeled tree:
// distance = height of the lowest common ancestor
FiniteUltraSpace random_tree_space(Rng& rng, std::size_t max_points,
                                   std::int64_t max_dist) {
  std::size_t n = 2 + rng.below(max_points - 1);
  // assign each point a chain of nested block ids, one per height level
  std::vector<std::vector<std::uint64_t>> block(n);
  for (std::size_t i = 0; i < n; ++i) {
    block[i].resize(max_dist);
    std::uint64_t width = 1 + rng.below(3);
    for (std::int64_t h = max_dist - 1; h >= 0; --h) {
      std::uint64_t parent = h + 1 < max_dist ? block[i][h + 1] : 0;
      block[i][h] = parent * 8 + rng.below(width);
    }
  }
  std::vector<std::vector<Rational>> d(n, std::vector<Rational>(n, Q(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      std::int64_t h = max_dist;
      while (h > 0 && block[i][h - 1] == block[j][h - 1]) --h;
      if (h == 0) h = 1;  // distinct ids, merge at height >= 1
      d[i][j] = d[j][i] = Q(h);
    }
  std::vector<std::string> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back("p" + std::to_string(i));
  auto v = FiniteUltraSpace::validate(pts, d);
  if (!v.ok()) {
    // identical block chains can collide at distance 0; separate them
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j && d[i][j] == Q(0)) d[i][j] = Q(1);
  }
  return FiniteUltraSpace::create(std::move(pts), std::move(d));
}

}  // namespace

TEST_CASE("validate flags triangle violations") {
  std::vector<std::vector<Rational>> d = {
      {Q(0), Q(1), Q(3)}, {Q(1), Q(0), Q(2)}, {Q(3), Q(2), Q(0)}};
  auto v = FiniteUltraSpace::validate({"x", "y", "z"}, d);
  CHECK(!v.ok());
  CHECK(!v.triangle_violations.empty());
  CHECK_THROWS_AS(FiniteUltraSpace::create({"x", "y", "z"}, d), Error);

  auto vq = FiniteUltraSpace::validate(
      {"a", "b"}, {{Q(0), Q(1)}, {Q(1), Q(0)}});
  CHECK(vq.ok());
}

TEST_CASE("validate flags shape and separation issues") {
  CHECK(!FiniteUltraSpace::validate({"a", "a"},
                                    {{Q(0), Q(1)}, {Q(1), Q(0)}})
             .ok());
  CHECK(!FiniteUltraSpace::validate({"a", "b"},
                                    {{Q(0), Q(0)}, {Q(0), Q(0)}})
             .ok());
  CHECK(!FiniteUltraSpace::validate({"a", "b"},
                                    {{Q(0), Q(1)}, {Q(2), Q(0)}})
             .ok());
  CHECK(!FiniteUltraSpace::validate({"a", "b"}, {{Q(0), Q(1)}}).ok());
}

TEST_CASE("balls and covering numbers on the four point space") {
  auto X = make_q4();
  std::size_t a = X.index_of("a");

  auto b1 = X.ball(a, Q(1));
  REQUIRE(b1.size() == 2);
  CHECK(X.point(b1[0]) == "a");
  CHECK(X.point(b1[1]) == "b");

  CHECK(X.cov(a, Q(1), Q(2)) == 2);
  CHECK(X.min_cover_bruteforce(a, Q(2), Q(2)) == 1);
  CHECK(X.diameter() == Q(2));
  CHECK(X.realized_scales() == std::vector<Rational>{Q(1), Q(2)});
}

TEST_CASE("balls and covering numbers on the binary cube") {
  auto X = make_c3();
  std::size_t o = X.index_of("000");
  CHECK(X.cov(o, Q(1), Q(3)) == 4);
  CHECK(X.min_cover_bruteforce(o, Q(2), Q(3)) == 2);
  CHECK(X.cov(o, Q(0), Q(3)) == 8);
  CHECK(X.cov(o, Q(3), Q(3)) == 1);
}

TEST_CASE("large subset radius") {
  auto X = make_q4();
  std::vector<std::size_t> ac = {X.index_of("a"), X.index_of("c")};
  CHECK(X.large_subset_radius(ac) == Q(1));
  CHECK(X.large_subset_radius({X.index_of("a")}) == Q(2));
  CHECK(!X.large_subset_radius({}).has_value());
}

TEST_CASE("isometric homogeneity") {
  CHECK(make_q4().is_isometrically_homogeneous());
  CHECK(make_c3().is_isometrically_homogeneous());
  auto Y = FiniteUltraSpace::create(
      {"x", "y", "z"},
      {{Q(0), Q(1), Q(2)}, {Q(1), Q(0), Q(2)}, {Q(2), Q(2), Q(0)}});
  CHECK(!Y.is_isometrically_homogeneous());
}

TEST_CASE("ball dichotomy and cov properties on random tree spaces") {
  Rng rng(41);
  for (int it = 0; it < 120; ++it) {
    auto X = random_tree_space(rng, 10, 8);
    auto scales = X.realized_scales();
    std::vector<Rational> radii = {Q(0)};
    radii.insert(radii.end(), scales.begin(), scales.end());
    for (std::size_t x = 0; x < X.size(); ++x) {
      for (const auto& r : radii) {
        auto bx = X.ball(x, r);
        // every member's ball of the same radius is the same ball
        for (auto y : bx) CHECK(X.ball(y, r) == bx);
        CHECK(std::find(bx.begin(), bx.end(), x) != bx.end());
      }
      // cov is antitone in eps, and cov at eps >= delta is 1
      for (const auto& dl : radii)
        for (std::size_t i = 1; i < radii.size(); ++i) {
          CHECK(X.cov(x, radii[i - 1], dl) >= X.cov(x, radii[i], dl));
          if (radii[i] >= dl) CHECK(X.cov(x, radii[i], dl) == 1);
        }
    }
  }
}

TEST_CASE("centered covering equals arbitrary covering at realized scales") {
  Rng rng(97);
  for (int it = 0; it < 40; ++it) {
    auto X = random_tree_space(rng, 8, 5);
    auto scales = X.realized_scales();
    for (std::size_t x = 0; x < X.size(); ++x)
      for (const auto& e : scales)
        for (const auto& dl : scales)
          CHECK(X.cov(x, e, dl) == X.min_cover_bruteforce(x, e, dl));
  }
}

TEST_CASE("sequence space basics") {
  SequenceSpace two(CardinalSeq::constant(Cardinal::finite(2)));
  CHECK(two.degree(1) == Cardinal::finite(2));
  CHECK(two.distance({0, 1}, {0, 1}) == 0);
  CHECK(two.distance({1}, {}) == 1);
  CHECK(two.distance({0, 1}, {1, 1}) == 1);
  CHECK(two.distance({0, 0, 1}, {}) == 3);
  CHECK(two.contains({1, 0, 1}));
  CHECK(!two.contains({2}));

  CHECK(SequenceSpace::point_id({}) == "0");
  CHECK(SequenceSpace::point_id({2}) == "2");
  CHECK(SequenceSpace::point_id({1, 0, 3}) == "1.0.3");
  CHECK(SequenceSpace::parse_point("1.0.3") ==
        SequenceSpace::Point{1, 0, 3});
  CHECK(SequenceSpace::parse_point("0") == SequenceSpace::Point{});
  CHECK(SequenceSpace::normalize({1, 0, 0}) == SequenceSpace::Point{1});
}

TEST_CASE("sequence space truncation matches the binary cube") {
  SequenceSpace two(CardinalSeq::constant(Cardinal::finite(2)));
  auto T = two.truncate(3, 2);
  REQUIRE(T.size() == 8);
  auto C = make_c3();
  // same multiset of distances and same homogeneity
  std::multiset<Rational> dt, dc;
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) {
      dt.insert(T.dist(i, j));
      dc.insert(C.dist(i, j));
    }
  CHECK(dt == dc);
  CHECK(T.is_isometrically_homogeneous());

  SequenceSpace om(CardinalSeq::constant(Cardinal::aleph(0)));
  auto U = om.truncate(1, 5);
  REQUIRE(U.size() == 5);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j)
      if (i != j) CHECK(U.dist(i, j) == Q(1));
}

TEST_CASE("sequence space boundedness") {
  SequenceSpace fin(CardinalSeq({Cardinal::finite(2), Cardinal::finite(3)},
                                CardinalSeq::ConstantTail{Cardinal::finite(1)}));
  CHECK(fin.is_bounded());
  CHECK(fin.bounded_support() == 2);
  CHECK(fin.enumerate_bounded().size() == 6);

  SequenceSpace unb(CardinalSeq::constant(Cardinal::finite(2)));
  CHECK(!unb.is_bounded());
}

TEST_CASE("metric ref uniform access") {
  auto fs = std::make_shared<FiniteUltraSpace>(make_q4());
  auto mf = MetricRef::finite(fs);
  CHECK(mf.contains("a"));
  CHECK(!mf.contains("zz"));
  CHECK(mf.distance("a", "c") == Q(2));
  CHECK(mf.all_points().size() == 4);

  auto ss = std::make_shared<SequenceSpace>(
      CardinalSeq({Cardinal::finite(2)},
                  CardinalSeq::ConstantTail{Cardinal::finite(1)}));
  auto ms = MetricRef::sequence(ss);
  CHECK(ms.contains("1"));
  CHECK(ms.distance("1", "0") == Q(1));
  CHECK(ms.all_points() == std::vector<std::string>{"0", "1"});

  auto su = std::make_shared<SequenceSpace>(
      CardinalSeq::constant(Cardinal::finite(2)));
  CHECK_THROWS_AS(MetricRef::sequence(su).all_points(), Error);
}
