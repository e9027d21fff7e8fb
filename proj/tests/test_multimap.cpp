#include "doctest.h"

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <vector>

#include "error.hpp"
#include "multimap.hpp"
#include "rng.hpp"
#include "space.hpp"

using namespace uc;

namespace {

Rational Q(std::int64_t p, std::int64_t q = 1) { return {p, q}; }

std::shared_ptr<const FiniteUltraSpace> make_q4() {
  std::vector<std::vector<Rational>> d = {
      {Q(0), Q(1), Q(2), Q(2)},
      {Q(1), Q(0), Q(2), Q(2)},
      {Q(2), Q(2), Q(0), Q(1)},
      {Q(2), Q(2), Q(1), Q(0)},
  };
  return std::make_shared<FiniteUltraSpace>(
      FiniteUltraSpace::create({"a", "b", "c", "d"}, std::move(d)));
}

std::shared_ptr<const FiniteUltraSpace> make_p2() {
  return std::make_shared<FiniteUltraSpace>(FiniteUltraSpace::create(
      {"p", "q"}, {{Q(0), Q(5)}, {Q(5), Q(0)}}));
}

FiniteUltraSpace random_tree_space(Rng& rng, std::size_t max_points,
                                   std::int64_t max_dist) {
  std::size_t n = 2 + rng.below(max_points - 1);
  std::vector<std::vector<std::uint64_t>> block(n);
  for (std::size_t i = 0; i < n; ++i) {
    block[i].resize(max_dist);
    for (std::int64_t h = max_dist - 1; h >= 0; --h) {
      std::uint64_t parent = h + 1 < max_dist ? block[i][h + 1] : 0;
      block[i][h] = parent * 4 + rng.below(2 + rng.below(2));
    }
  }
  std::vector<std::vector<Rational>> d(n, std::vector<Rational>(n, Q(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      std::int64_t h = max_dist;
      while (h > 0 && block[i][h - 1] == block[j][h - 1]) --h;
      if (h == 0) h = 1;
      d[i][j] = d[j][i] = Q(h);
    }
  std::vector<std::string> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back("p" + std::to_string(i));
  return FiniteUltraSpace::create(std::move(pts), std::move(d));
}

MultiMap random_relation(Rng& rng, std::shared_ptr<const FiniteUltraSpace> X,
                         std::shared_ptr<const FiniteUltraSpace> Y) {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& x : X->points())
    for (const auto& y : Y->points())
      if (rng.below(3) == 0) pairs.emplace_back(x, y);
  if (pairs.empty())
    pairs.emplace_back(X->points().front(), Y->points().front());
  return MultiMap(MetricRef::finite(std::move(X)),
                  MetricRef::finite(std::move(Y)), std::move(pairs));
}

}  // namespace

TEST_CASE("multimap construction and images") {
  auto X = make_q4();
  auto Y = make_p2();
  MultiMap m(MetricRef::finite(X), MetricRef::finite(Y),
             {{"a", "p"}, {"b", "p"}, {"c", "q"}, {"d", "q"}, {"a", "p"}});
  CHECK(m.pairs().size() == 4);  // duplicates collapse
  CHECK(m.image("a") == std::vector<std::string>{"p"});
  CHECK(m.image("zz").empty());
  CHECK(m.effective_source_domain().size() == 4);
  CHECK(m.effective_target_domain().size() == 2);

  CHECK_THROWS_AS(MultiMap(MetricRef::finite(X), MetricRef::finite(Y),
                           {{"a", "nope"}}),
                  Error);
  CHECK_THROWS_AS(MultiMap(MetricRef::finite(X), MetricRef::finite(Y),
                           {{"a", "p"}}, std::vector<std::string>{"ghost"},
                           std::nullopt),
                  Error);
}

TEST_CASE("oscillation values") {
  auto X = make_q4();
  auto Y = make_p2();

  std::vector<std::pair<std::string, std::string>> idp;
  for (const auto& x : X->points()) idp.emplace_back(x, x);
  MultiMap ident(MetricRef::finite(X), MetricRef::finite(X), idp);
  CHECK(ident.oscillation(Q(1)) == Q(1));
  CHECK(ident.oscillation(Q(0)) == Q(0));
  CHECK(ident.oscillation(Q(2)) == Q(2));

  MultiMap collapse(MetricRef::finite(X), MetricRef::finite(Y),
                    {{"a", "p"}, {"b", "p"}, {"c", "q"}, {"d", "q"}});
  CHECK(collapse.oscillation(Q(1)) == Q(0));
  CHECK(collapse.oscillation(Q(2)) == Q(5));
  CHECK(collapse.inverse().oscillation(Q(5)) == Q(2));
  CHECK(collapse.inverse().oscillation(Q(1)) == Q(1));
  CHECK_THROWS_AS(collapse.oscillation(Q(-1)), Error);
}

TEST_CASE("embedding and equivalence certificates") {
  auto X = make_q4();
  auto Y = make_p2();
  MultiMap collapse(MetricRef::finite(X), MetricRef::finite(Y),
                    {{"a", "p"}, {"b", "p"}, {"c", "q"}, {"d", "q"}});

  auto cert = collapse.check_coarse_embedding({Q(1), Q(2), Q(5)});
  CHECK(cert.kind == "embedding");
  CHECK(cert.total);
  CHECK(cert.uncovered_source.empty());
  REQUIRE(cert.forward.size() == 3);
  CHECK(cert.forward[1].eps == Q(2));
  CHECK(cert.forward[1].omega == Q(5));
  CHECK(cert.inverse[2].eps == Q(5));
  CHECK(cert.inverse[2].omega == Q(2));
  CHECK(cert.pass());

  auto eq = collapse.check_coarse_equivalence({Q(1)});
  CHECK(eq.kind == "equivalence");
  REQUIRE(eq.surjective.has_value());
  CHECK(*eq.surjective);
  CHECK(eq.pass());

  MultiMap partial(MetricRef::finite(X), MetricRef::finite(Y),
                   {{"a", "p"}, {"b", "p"}});
  auto bad = partial.check_coarse_equivalence({Q(1)});
  CHECK(!bad.total);
  CHECK(bad.uncovered_source == std::vector<std::string>{"c", "d"});
  CHECK(bad.uncovered_target == std::vector<std::string>{"q"});
  CHECK(!bad.pass());
}

TEST_CASE("compose and inverse") {
  auto X = make_q4();
  auto Y = make_p2();
  MultiMap f(MetricRef::finite(X), MetricRef::finite(Y),
             {{"a", "p"}, {"b", "p"}, {"c", "q"}, {"d", "q"}});
  MultiMap g(MetricRef::finite(Y), MetricRef::finite(X),
             {{"p", "a"}, {"q", "c"}});
  auto gf = compose(g, f);
  CHECK(gf.pairs() ==
        std::vector<std::pair<std::string, std::string>>{
            {"a", "a"}, {"b", "a"}, {"c", "c"}, {"d", "c"}});

  // composing across mismatched middle spaces is rejected
  MultiMap h(MetricRef::finite(X), MetricRef::finite(X), {{"a", "a"}});
  CHECK_THROWS_AS(compose(h, f), Error);
}

TEST_CASE("multimap algebra on random relations") {
  Rng rng(1234);
  for (int it = 0; it < 60; ++it) {
    auto A = std::make_shared<FiniteUltraSpace>(random_tree_space(rng, 6, 4));
    auto B = std::make_shared<FiniteUltraSpace>(random_tree_space(rng, 6, 4));
    auto C = std::make_shared<FiniteUltraSpace>(random_tree_space(rng, 6, 4));
    auto f = random_relation(rng, A, B);
    auto g = random_relation(rng, B, C);

    // double inverse restores the relation
    CHECK(f.inverse().inverse().pairs() == f.pairs());
    // contravariant inverse of a composition
    auto lhs = compose(g, f).inverse();
    auto rhs = compose(f.inverse(), g.inverse());
    CHECK(lhs.pairs() == rhs.pairs());
    // oscillation is monotone in the scale
    auto scales = B->realized_scales();
    for (std::size_t i = 1; i < scales.size(); ++i)
      CHECK(g.oscillation(scales[i - 1]) <= g.oscillation(scales[i]));
  }
}

TEST_CASE("map pair displacements") {
  auto X = make_q4();
  auto Y = make_p2();
  std::map<std::string, std::string> f = {
      {"a", "p"}, {"b", "p"}, {"c", "q"}, {"d", "q"}};
  std::map<std::string, std::string> g = {{"p", "a"}, {"q", "c"}};
  auto rep = from_map_pair(f, g, MetricRef::finite(X), MetricRef::finite(Y));
  CHECK(rep.displacement_x == Q(1));
  CHECK(rep.displacement_y == Q(0));
  CHECK(rep.relation.pairs().size() == 4);  // graph(f) already covers g^T

  std::map<std::string, std::string> partial = {{"a", "p"}};
  CHECK_THROWS_AS(
      from_map_pair(partial, g, MetricRef::finite(X), MetricRef::finite(Y)),
      Error);
}

TEST_CASE("finite scale inequality for a total embedding relation") {
  // cov_{eps'}^{delta'}(x) <= max_y cov_eps^delta(y) with
  // eps' = omega_{inv}(2 eps), delta = omega(2 delta')
  Rng rng(777);
  for (int it = 0; it < 30; ++it) {
    auto A = std::make_shared<FiniteUltraSpace>(random_tree_space(rng, 7, 4));
    auto B = std::make_shared<FiniteUltraSpace>(random_tree_space(rng, 7, 4));
    // make a total relation
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& x : A->points())
      pairs.emplace_back(x, B->point(rng.below(B->size())));
    MultiMap phi(MetricRef::finite(A), MetricRef::finite(B), pairs);
    auto inv = phi.inverse();
    for (const auto& eps : B->realized_scales())
      for (const auto& dp : A->realized_scales()) {
        Rational epsp = inv.oscillation(Q(2) * eps);
        Rational delta = phi.oscillation(Q(2) * dp);
        std::uint64_t rhs = 0;
        for (std::size_t y = 0; y < B->size(); ++y)
          rhs = std::max(rhs, B->cov(y, eps, delta));
        for (std::size_t x = 0; x < A->size(); ++x)
          CHECK(A->cov(x, epsp, dp) <= rhs);
      }
  }
}
