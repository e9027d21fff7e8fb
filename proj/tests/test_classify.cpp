#include <algorithm>
#include <memory>
#include <string>
#include <vector>

#include "classify.hpp"
#include "doctest.h"
#include "error.hpp"
#include "rng.hpp"

using namespace uc;

namespace {

CovProfile const_profile(Cardinal c) {
  return CovProfile::from_degrees(CardinalSeq::constant(c));
}

CovProfile prefix_profile(std::vector<Cardinal> prefix, Cardinal tail) {
  return CovProfile::from_degrees(
      CardinalSeq(std::move(prefix), CardinalSeq::ConstantTail{tail}));
}

SpaceSpec const_spec(Cardinal c) {
  return SpaceSpec::from_degrees(CardinalSeq::constant(c));
}

std::shared_ptr<const FiniteUltraSpace> uniform_space(std::size_t n,
                                                      std::int64_t d) {
  std::vector<std::string> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back("p" + std::to_string(i));
  std::vector<std::vector<Rational>> dist(n, std::vector<Rational>(n, Rational(d)));
  for (std::size_t i = 0; i < n; ++i) dist[i][i] = Rational(0);
  return std::make_shared<FiniteUltraSpace>(
      FiniteUltraSpace::create(std::move(pts), std::move(dist)));
}

std::shared_ptr<const FiniteUltraSpace> empty_space() {
  return std::make_shared<FiniteUltraSpace>(FiniteUltraSpace::create({}, {}));
}

// pair at distance 1 plus an outlier at distance 2: not homogeneous
std::shared_ptr<const FiniteUltraSpace> lopsided_space() {
  std::vector<std::string> pts{"a", "b", "c"};
  std::vector<std::vector<Rational>> dist{
      {Rational(0), Rational(1), Rational(2)},
      {Rational(1), Rational(0), Rational(2)},
      {Rational(2), Rational(2), Rational(0)}};
  return std::make_shared<FiniteUltraSpace>(
      FiniteUltraSpace::create(std::move(pts), std::move(dist)));
}

bool same_cert(const Certificate& a, const Certificate& b) {
  if (a.kind != b.kind || a.total != b.total || a.pairs != b.pairs) return false;
  if (a.source_domain != b.source_domain || a.target_domain != b.target_domain)
    return false;
  if (a.forward.size() != b.forward.size() || a.inverse.size() != b.inverse.size())
    return false;
  for (std::size_t i = 0; i < a.forward.size(); ++i)
    if (a.forward[i].eps != b.forward[i].eps ||
        a.forward[i].omega != b.forward[i].omega)
      return false;
  for (std::size_t i = 0; i < a.inverse.size(); ++i)
    if (a.inverse[i].eps != b.inverse[i].eps ||
        a.inverse[i].omega != b.inverse[i].omega)
      return false;
  return a.meta == b.meta;
}

Cardinal random_entry(Rng& rng) {
  if (rng.below(3) == 0) return Cardinal::aleph(rng.below(3));
  return Cardinal::finite(1 + rng.below(4));
}

}  // namespace

TEST_CASE("invariants: constant degree oracles") {
  auto two = invariants(const_profile(Cardinal::finite(2)));
  CHECK(two.flat == Cardinal::aleph(0));
  CHECK(two.sharp == Cardinal::aleph(0));
  CHECK(two.witness_eps == 0);

  auto omega = invariants(const_profile(Cardinal::aleph(0)));
  CHECK(omega.flat == Cardinal::aleph(1));
  CHECK(omega.sharp == Cardinal::aleph(1));
  CHECK(omega.witness_eps == 0);

  auto one = invariants(const_profile(Cardinal::finite(1)));
  CHECK(one.flat == Cardinal::finite(2));
  CHECK(one.sharp == Cardinal::finite(2));

  auto big = invariants(const_profile(Cardinal::aleph(1)));
  CHECK(big.sharp == Cardinal::aleph(2));
}

TEST_CASE("invariants: witness skips a dominating prefix") {
  // one omega-fan followed by a binary tree: dropping level 1 lowers sharp
  auto p = prefix_profile({Cardinal::aleph(0)}, Cardinal::finite(2));
  auto inv = invariants(p);
  CHECK(inv.sharp == Cardinal::aleph(0));
  CHECK(inv.witness_eps == 1);

  // omega-fan then trivial tail: the space is bounded
  auto b = invariants(prefix_profile({Cardinal::aleph(0)}, Cardinal::finite(1)));
  CHECK(b.sharp == Cardinal::finite(2));
  CHECK(b.witness_eps == 1);

  // finite head then trivial tail
  auto f = invariants(prefix_profile({Cardinal::finite(5)}, Cardinal::finite(1)));
  CHECK(f.sharp == Cardinal::finite(2));
  CHECK(f.witness_eps == 1);

  // the head product is the sup when nothing is dropped
  auto g = prefix_profile({Cardinal::finite(5), Cardinal::finite(3)},
                          Cardinal::finite(1));
  CHECK(invariants(g).sharp == Cardinal::finite(2));
}

TEST_CASE("invariants: unbounded finite ladder") {
  auto inv = invariants(CovProfile::from_degrees(CardinalSeq::unbounded_finite()));
  CHECK(inv.sharp == Cardinal::aleph(0));
  CHECK(inv.flat == Cardinal::aleph(0));
}

TEST_CASE("invariants: finite backing is the bounded class") {
  auto u = uniform_space(4, 3);
  auto inv = invariants(CovProfile::from_space(u));
  CHECK(inv.flat == Cardinal::finite(2));
  CHECK(inv.sharp == Cardinal::finite(2));
  CHECK(inv.witness_eps == 0);  // single realized scale

  auto l = lopsided_space();
  auto li = invariants(CovProfile::from_space(l));
  CHECK(li.flat == Cardinal::finite(2));
  CHECK(li.sharp == Cardinal::finite(2));
  CHECK(li.witness_eps == 1);  // scales (1, 2): only eps = 2 covers in one ball

  auto single = uniform_space(1, 1);
  CHECK(invariants(CovProfile::from_space(single)).sharp == Cardinal::finite(2));

  CHECK_THROWS_WITH_AS(invariants(CovProfile::from_space(empty_space())),
                       doctest::Contains("empty space"), Error);
}

TEST_CASE("invariants: flat <= sharp and bounded dichotomy on random degrees") {
  Rng rng(41);
  for (int t = 0; t < 60; ++t) {
    std::vector<Cardinal> prefix;
    std::uint64_t len = rng.below(5);
    for (std::uint64_t i = 0; i < len; ++i) prefix.push_back(random_entry(rng));
    CardinalSeq s =
        rng.below(4) == 0
            ? CardinalSeq::unbounded_finite(prefix)
            : CardinalSeq(prefix, CardinalSeq::ConstantTail{
                                      rng.below(3) == 0
                                          ? Cardinal::finite(1)
                                          : random_entry(rng)});
    auto inv = invariants(CovProfile::from_degrees(s));
    CHECK(inv.flat <= inv.sharp);
    CHECK(inv.flat == inv.sharp);
    bool eventually_one = s.tail_is_constant() &&
                          s.constant_tail_value() == Cardinal::finite(1);
    CHECK((inv.sharp <= Cardinal::finite(2)) == eventually_one);
  }
}

TEST_CASE("interval_cov multiplies along concatenated intervals") {
  auto p = prefix_profile({Cardinal::finite(3), Cardinal::aleph(0)},
                          Cardinal::finite(2));
  CHECK(p.interval_cov(0, 1) == Cardinal::finite(3));
  CHECK(p.interval_cov(0, 2) == Cardinal::aleph(0));
  CHECK(p.interval_cov(2, 4) == Cardinal::finite(4));
  Rng rng(7);
  for (int t = 0; t < 20; ++t) {
    std::uint64_t a = rng.below(3), b = a + 1 + rng.below(3),
                  c = b + 1 + rng.below(3);
    CHECK(p.interval_cov(a, c) ==
          product(p.interval_cov(a, b), p.interval_cov(b, c)));
  }
}

TEST_CASE("select_levels_embedding oracles") {
  auto two = const_profile(Cardinal::finite(2));
  auto three = const_profile(Cardinal::finite(3));
  auto omega = const_profile(Cardinal::aleph(0));

  auto s23 = select_levels_embedding(two, three, 6);
  CHECK(s23.E == std::vector<std::uint64_t>{0, 1, 2, 3, 4, 5, 6});
  CHECK(s23.D == std::vector<std::uint64_t>{0, 1, 2, 3, 4, 5, 6});

  auto s32 = select_levels_embedding(three, two, 6);
  CHECK(s32.E == std::vector<std::uint64_t>{0, 1, 2, 3});
  CHECK(s32.D == std::vector<std::uint64_t>{0, 2, 4, 6});

  CHECK_THROWS_WITH_AS(select_levels_embedding(omega, two, 6),
                       doctest::Contains("fails symbolically"), Error);

  // passes symbolically but the head step cannot fit in depth 6
  auto wide = prefix_profile({Cardinal::finite(200)}, Cardinal::finite(2));
  CHECK_THROWS_WITH_AS(select_levels_embedding(wide, two, 6),
                       doctest::Contains("insufficient depth"), Error);

  // witness shift: the omega fan is skipped by starting E at level 1
  auto fan = prefix_profile({Cardinal::aleph(0)}, Cardinal::finite(2));
  auto sf = select_levels_embedding(fan, two, 6);
  CHECK(sf.E.front() == 1);
  CHECK(sf.E == std::vector<std::uint64_t>{1, 2, 3, 4, 5, 6, 7});
  CHECK(sf.D == std::vector<std::uint64_t>{0, 1, 2, 3, 4, 5, 6});

  for (std::size_t n = 0; n + 1 < s32.E.size(); ++n) {
    auto lhs = three.interval_cov(s32.E[n], s32.E[n + 1]);
    auto rhs = two.interval_cov(s32.D[n], s32.D[n + 1]);
    CHECK(lhs <= rhs);
  }
}

TEST_CASE("select_levels_equivalence oracles") {
  auto two = const_profile(Cardinal::finite(2));
  auto three = const_profile(Cardinal::finite(3));
  auto omega = const_profile(Cardinal::aleph(0));

  auto baire = select_levels_equivalence(omega, omega, 6);
  CHECK(baire.E == std::vector<std::uint64_t>{0, 1, 2, 3, 4, 5, 6});
  CHECK(baire.D == std::vector<std::uint64_t>{0, 1, 2, 3, 4, 5, 6});

  auto s23 = select_levels_equivalence(two, three, 6);
  CHECK(s23.E == std::vector<std::uint64_t>{0, 1, 3});
  CHECK(s23.D == std::vector<std::uint64_t>{0, 1, 3});
  for (std::size_t n = 0; n + 1 < s23.E.size(); ++n) {
    auto xs = two.interval_cov(s23.E[n], s23.E[n + 1]);
    auto ys = three.interval_cov(s23.D[n], s23.D[n + 1]);
    CHECK(xs <= ys);
    if (n + 2 < s23.E.size())
      CHECK(ys <= two.interval_cov(s23.E[n + 1], s23.E[n + 2]));
  }

  // alternating target: D jumps to the next omega entry
  auto alt = prefix_profile({Cardinal::aleph(0), Cardinal::finite(2),
                             Cardinal::finite(2), Cardinal::aleph(0),
                             Cardinal::finite(2), Cardinal::finite(2)},
                            Cardinal::aleph(0));
  CHECK(invariants(alt).sharp == Cardinal::aleph(1));
  auto sa = select_levels_equivalence(omega, alt, 6);
  CHECK(sa.E == std::vector<std::uint64_t>{0, 1, 2});
  CHECK(sa.D == std::vector<std::uint64_t>{0, 1, 4});
  for (std::size_t n = 0; n + 1 < sa.E.size(); ++n) {
    CHECK(omega.interval_cov(sa.E[n], sa.E[n + 1]) == Cardinal::aleph(0));
    CHECK(alt.interval_cov(sa.D[n], sa.D[n + 1]) == Cardinal::aleph(0));
  }

  CHECK_THROWS_WITH_AS(select_levels_equivalence(two, omega, 6),
                       doctest::Contains("fails symbolically"), Error);
}

TEST_CASE("homogeneous_model oracles") {
  auto m1 = homogeneous_model(Cardinal::aleph(1));
  CHECK(m1.degrees.tail_is_constant());
  CHECK(m1.degrees.constant_tail_value() == Cardinal::aleph(0));
  CHECK(m1.invariants.sharp == Cardinal::aleph(1));
  CHECK(m1.invariants.flat == Cardinal::aleph(1));

  auto m0 = homogeneous_model(Cardinal::aleph(0));
  CHECK(m0.degrees.tail_is_unbounded_finite());
  for (std::uint64_t k = 0; k < 6; ++k) {
    CHECK(m0.degrees.at(k).is_finite());
    CHECK(m0.degrees.at(k) < m0.degrees.at(k + 1));
  }
  CHECK(m0.invariants.sharp == Cardinal::aleph(0));

  auto m2 = homogeneous_model(Cardinal::aleph(2));
  CHECK(m2.degrees.constant_tail_value() == Cardinal::aleph(1));
  CHECK(m2.invariants.sharp == Cardinal::aleph(2));

  auto mb = homogeneous_model(Cardinal::finite(2));
  CHECK(mb.degrees.constant_tail_value() == Cardinal::finite(1));
  CHECK(mb.invariants.sharp == Cardinal::finite(2));

  CHECK_THROWS_WITH_AS(homogeneous_model(Cardinal::finite(3)),
                       doctest::Contains("no group-chain model"), Error);
  CHECK_THROWS_AS(homogeneous_model(Cardinal::finite(1)), Error);
  CHECK_THROWS_AS(homogeneous_model(Cardinal::finite(0)), Error);
}

TEST_CASE("embedding pipeline: cantor into ternary") {
  auto v = coarse_embedding_pipeline(const_spec(Cardinal::finite(2)),
                                     const_spec(Cardinal::finite(3)), 6, 0);
  CHECK(v.relation == Relation::EmbedsInto);
  CHECK(v.constructive);
  CHECK(v.citation == "Theorem 2(1)");
  REQUIRE(v.certificate.has_value());
  const auto& cert = *v.certificate;
  CHECK(cert.kind == "embedding");
  CHECK(cert.pass());
  CHECK(cert.meta.at("E") == "0,1,2,3,4,5,6");
  CHECK(cert.meta.at("D") == "0,1,2,3,4,5,6");
  for (const auto& row : cert.forward) CHECK(row.omega <= row.eps);
  CHECK(v.x_invariants->sharp == Cardinal::aleph(0));
  CHECK(v.y_invariants->sharp == Cardinal::aleph(0));

  auto again = coarse_embedding_pipeline(const_spec(Cardinal::finite(2)),
                                         const_spec(Cardinal::finite(3)), 6, 0);
  CHECK(same_cert(cert, *again.certificate));
}

TEST_CASE("embedding pipeline: identity grade and into baire") {
  auto v = coarse_embedding_pipeline(const_spec(Cardinal::finite(2)),
                                     const_spec(Cardinal::finite(2)), 5, 3);
  CHECK(v.relation == Relation::EmbedsInto);
  REQUIRE(v.certificate.has_value());
  CHECK(v.certificate->pass());
  for (const auto& row : v.certificate->forward) CHECK(row.omega <= row.eps);
  for (const auto& row : v.certificate->inverse) CHECK(row.omega <= row.eps);

  auto vb = coarse_embedding_pipeline(const_spec(Cardinal::finite(2)),
                                      const_spec(Cardinal::aleph(0)), 6, 0);
  CHECK(vb.relation == Relation::EmbedsInto);
  CHECK(vb.certificate->pass());
  for (const auto& row : vb.certificate->forward) CHECK(row.omega <= row.eps);
}

TEST_CASE("embedding pipeline: undecided and degenerate sources") {
  auto undecided = coarse_embedding_pipeline(const_spec(Cardinal::aleph(0)),
                                             const_spec(Cardinal::finite(2)),
                                             6, 0);
  CHECK(undecided.relation == Relation::UndecidedHere);
  CHECK(!undecided.certificate.has_value());
  CHECK(undecided.citation.find("sharp(X)") != std::string::npos);

  auto bounded = coarse_embedding_pipeline(const_spec(Cardinal::finite(1)),
                                           const_spec(Cardinal::finite(3)), 6,
                                           0);
  CHECK(bounded.relation == Relation::EmbedsInto);
  CHECK(bounded.citation == "bounded class");
  CHECK(bounded.certificate->pass());
  CHECK(bounded.certificate->meta.at("trivial") == "bounded-source");

  auto finite_src = coarse_embedding_pipeline(
      SpaceSpec::from_finite(uniform_space(4, 2)),
      const_spec(Cardinal::finite(2)), 6, 0);
  CHECK(finite_src.relation == Relation::EmbedsInto);
  CHECK(finite_src.certificate->pass());

  auto from_empty = coarse_embedding_pipeline(
      SpaceSpec::from_finite(empty_space()), const_spec(Cardinal::finite(2)),
      6, 0);
  CHECK(from_empty.relation == Relation::EmbedsInto);
  CHECK(from_empty.citation == "empty class");
  CHECK(from_empty.certificate->pass());

  auto to_empty = coarse_embedding_pipeline(const_spec(Cardinal::finite(2)),
                                            SpaceSpec::from_finite(empty_space()),
                                            6, 0);
  CHECK(to_empty.relation == Relation::UndecidedHere);
}

TEST_CASE("equivalence pipeline: cantor vs ternary is decision-only") {
  auto v = coarse_equivalence_pipeline(const_spec(Cardinal::finite(2)),
                                       const_spec(Cardinal::finite(3)), 6, 0);
  CHECK(v.relation == Relation::Equivalent);
  CHECK(!v.constructive);
  CHECK(v.citation == "[BZ] Thm 5");
  CHECK(!v.certificate.has_value());
  CHECK(v.x_invariants->sharp == Cardinal::aleph(0));
  CHECK(v.y_invariants->sharp == Cardinal::aleph(0));
}

TEST_CASE("equivalence pipeline: baire model constructive certificate") {
  auto v = coarse_equivalence_pipeline(const_spec(Cardinal::aleph(0)),
                                       const_spec(Cardinal::aleph(0)), 6, 0);
  CHECK(v.relation == Relation::Equivalent);
  CHECK(v.constructive);
  CHECK(v.citation == "Theorem 2(2)");
  REQUIRE(v.certificate.has_value());
  const auto& cert = *v.certificate;
  CHECK(cert.kind == "equivalence");
  CHECK(cert.pass());
  CHECK(cert.surjective.has_value());
  CHECK(*cert.surjective);
  for (const auto& row : cert.forward) CHECK(row.omega <= row.eps);
  for (const auto& row : cert.inverse)
    CHECK(row.omega <= row.eps + Rational(1));

  auto again = coarse_equivalence_pipeline(const_spec(Cardinal::aleph(0)),
                                           const_spec(Cardinal::aleph(0)), 6, 0);
  CHECK(same_cert(cert, *again.certificate));
}

TEST_CASE("equivalence pipeline: interleaved degrees stay constructive") {
  auto alt = SpaceSpec::from_degrees(
      CardinalSeq({Cardinal::aleph(0), Cardinal::finite(2), Cardinal::finite(2),
                   Cardinal::aleph(0), Cardinal::finite(2), Cardinal::finite(2)},
                  CardinalSeq::ConstantTail{Cardinal::aleph(0)}));
  auto v = coarse_equivalence_pipeline(const_spec(Cardinal::aleph(0)), alt, 6, 1);
  CHECK(v.relation == Relation::Equivalent);
  CHECK(v.constructive);
  REQUIRE(v.certificate.has_value());
  CHECK(v.certificate->pass());
  CHECK(*v.certificate->surjective);
}

TEST_CASE("equivalence pipeline: degenerate and symbolic branches") {
  auto undecided = coarse_equivalence_pipeline(const_spec(Cardinal::finite(2)),
                                               const_spec(Cardinal::aleph(0)),
                                               6, 0);
  CHECK(undecided.relation == Relation::UndecidedHere);
  CHECK(undecided.citation.find("invariants") != std::string::npos);

  auto bounded = coarse_equivalence_pipeline(
      const_spec(Cardinal::finite(1)), SpaceSpec::from_finite(uniform_space(3, 2)),
      6, 0);
  CHECK(bounded.relation == Relation::Equivalent);
  CHECK(bounded.citation == "bounded class");
  CHECK(bounded.certificate->pass());
  CHECK(*bounded.certificate->surjective);

  auto empties = coarse_equivalence_pipeline(SpaceSpec::from_finite(empty_space()),
                                             SpaceSpec::from_finite(empty_space()),
                                             6, 0);
  CHECK(empties.relation == Relation::Equivalent);
  CHECK(empties.citation == "empty class");
  CHECK(empties.certificate->pass());

  auto half_empty = coarse_equivalence_pipeline(
      SpaceSpec::from_finite(empty_space()), const_spec(Cardinal::finite(2)), 6, 0);
  CHECK(half_empty.relation == Relation::UndecidedHere);

  auto symbolic = coarse_equivalence_pipeline(const_spec(Cardinal::aleph(1)),
                                              const_spec(Cardinal::aleph(1)),
                                              6, 0);
  CHECK(symbolic.relation == Relation::Equivalent);
  CHECK(!symbolic.constructive);
  CHECK(symbolic.citation.find("beyond enumeration") != std::string::npos);
}

TEST_CASE("classify_pair verdicts") {
  auto eq = classify_pair(const_spec(Cardinal::finite(2)),
                          const_spec(Cardinal::finite(3)), 6, 0);
  CHECK(eq.relation == Relation::Equivalent);
  CHECK(eq.citation == "[BZ] Thm 5");

  auto ne = classify_pair(const_spec(Cardinal::finite(2)),
                          const_spec(Cardinal::aleph(0)), 6, 0);
  CHECK(ne.relation == Relation::NotEquivalent);
  CHECK(ne.citation.find("Theorem 4") != std::string::npos);
  CHECK(ne.x_invariants->sharp == Cardinal::aleph(0));
  CHECK(ne.y_invariants->sharp == Cardinal::aleph(1));

  auto self = classify_pair(const_spec(Cardinal::finite(2)),
                            const_spec(Cardinal::finite(2)), 6, 0);
  CHECK(self.relation == Relation::Equivalent);

  auto mixed = classify_pair(SpaceSpec::from_finite(uniform_space(3, 1)),
                             const_spec(Cardinal::finite(1)), 6, 0);
  CHECK(mixed.relation == Relation::Equivalent);
  CHECK(mixed.citation == "bounded class");

  auto big = classify_pair(const_spec(Cardinal::aleph(0)),
                           const_spec(Cardinal::aleph(1)), 6, 0);
  CHECK(big.relation == Relation::NotEquivalent);

  CHECK_THROWS_WITH_AS(classify_pair(SpaceSpec::from_finite(lopsided_space()),
                                     const_spec(Cardinal::finite(1)), 6, 0),
                       doctest::Contains("homogeneous"), Error);
}

TEST_CASE("classify_pair empty handling") {
  auto both = classify_pair(SpaceSpec::from_finite(empty_space()),
                            SpaceSpec::from_finite(empty_space()), 6, 0);
  CHECK(both.relation == Relation::Equivalent);

  auto one = classify_pair(SpaceSpec::from_finite(empty_space()),
                           const_spec(Cardinal::finite(2)), 6, 0);
  CHECK(one.relation == Relation::NotEquivalent);
  CHECK(one.citation.find("empty") != std::string::npos);
}

TEST_CASE("relation strings") {
  CHECK(relation_str(Relation::Equivalent) == "equivalent");
  CHECK(relation_str(Relation::EmbedsInto) == "X-embeds-in-Y");
  CHECK(relation_str(Relation::NotEquivalent) == "not-equivalent");
  CHECK(relation_str(Relation::UndecidedHere) == "undecided-here");
}

TEST_CASE("verify_certificate accepts emitted certificates and spots tampering") {
  auto two = const_spec(Cardinal::finite(2));
  auto three = const_spec(Cardinal::finite(3));
  auto embed = coarse_embedding_pipeline(two, three, 6, 3);
  REQUIRE(embed.certificate.has_value());
  const Certificate& cert = *embed.certificate;

  auto ok = verify_certificate(cert, two, three);
  CHECK(ok.accepted);
  CHECK(ok.failure.empty());
  CHECK(ok.recomputed.total);

  auto subset = verify_certificate(cert, two, three, {Rational(1), Rational(2)});
  CHECK(subset.accepted);
  CHECK(subset.recomputed.forward.size() == 2);

  auto lying = cert;
  for (auto& row : lying.forward) row.omega = Rational(0);
  auto caught = verify_certificate(lying, two, three);
  CHECK_FALSE(caught.accepted);
  CHECK(caught.failure.find("forward modulus fails at (") != std::string::npos);

  auto gappy = cert;
  const std::string victim = gappy.pairs.front().first;
  std::erase_if(gappy.pairs, [&](const auto& p) { return p.first == victim; });
  auto untotal = verify_certificate(gappy, two, three);
  CHECK_FALSE(untotal.accepted);
  CHECK(untotal.failure.find("\"" + victim + "\" has no image") !=
        std::string::npos);

  auto misfiled = verify_certificate(
      cert, two, SpaceSpec::from_finite(uniform_space(3, 1)));
  CHECK_FALSE(misfiled.accepted);
  CHECK(misfiled.failure.find("does not match the spaces") !=
        std::string::npos);

  auto baire = const_spec(Cardinal::aleph(0));
  auto equiv = coarse_equivalence_pipeline(baire, baire, 5, 3);
  REQUIRE(equiv.certificate.has_value());
  auto eok = verify_certificate(*equiv.certificate, baire, baire);
  CHECK(eok.accepted);
  CHECK(eok.recomputed.surjective == true);

  auto shy = *equiv.certificate;
  shy.surjective = false;
  auto refused = verify_certificate(shy, baire, baire);
  CHECK_FALSE(refused.accepted);
  CHECK(refused.failure.find("does not claim surjectivity") !=
        std::string::npos);

  auto weird = cert;
  weird.kind = "isometry";
  CHECK_THROWS_WITH_AS(verify_certificate(weird, two, three),
                       doctest::Contains("unknown certificate kind"), Error);
}
