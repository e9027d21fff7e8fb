#include "classify.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "error.hpp"
#include "morphism.hpp"
#include "pairing.hpp"
#include "rng.hpp"
#include "tower.hpp"

namespace uc {

namespace {

Cardinal deg_at(const CardinalSeq& s, std::uint64_t level) {
  return s.at(level - 1);
}

Cardinal cmax(const Cardinal& a, const Cardinal& b) { return a < b ? b : a; }

// sup over m > n of (product of degrees over (n, m])+, closed form
Cardinal sharp_from(const CardinalSeq& s, std::uint64_t n) {
  const auto& prefix = s.prefix();
  int max_aleph = -1;
  for (std::size_t j = n; j < prefix.size(); ++j)
    if (prefix[j].is_infinite())
      max_aleph = std::max(max_aleph, static_cast<int>(prefix[j].aleph_index()));
  bool tail_ge2 = false;
  if (s.tail_is_constant()) {
    Cardinal c = s.constant_tail_value();
    if (c.is_infinite())
      max_aleph = std::max(max_aleph, static_cast<int>(c.aleph_index()));
    else
      tail_ge2 = c.finite_value() >= 2;
  } else {
    tail_ge2 = true;
  }
  if (max_aleph >= 0) return Cardinal::aleph(max_aleph + 1);
  if (tail_ge2) return Cardinal::aleph(0);
  Cardinal q = Cardinal::finite(1);
  for (std::size_t j = n; j < prefix.size(); ++j) q = product(q, prefix[j]);
  return q.successor();
}

std::string scale_list_str(const std::vector<std::uint64_t>& L) {
  std::string out;
  for (std::size_t i = 0; i < L.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(L[i]);
  }
  return out;
}

// degrees of the grouped tower: interval products of the base degrees over
// consecutive entries of L
CardinalSeq grouped_seq(const CardinalSeq& deg,
                        const std::vector<std::uint64_t>& L) {
  std::vector<Cardinal> p;
  for (std::size_t j = 0; j + 1 < L.size(); ++j) {
    Cardinal d = Cardinal::finite(1);
    for (std::uint64_t k = L[j] + 1; k <= L[j + 1]; ++k)
      d = product(d, deg_at(deg, k));
    p.push_back(d);
  }
  Cardinal tail = p.back();
  return CardinalSeq(std::move(p), CardinalSeq::ConstantTail{tail});
}

// per-interval tuple codecs translating between base coordinates and the
// grouped tower's super-digits; levels at or below L[0] are collapsed
struct GroupCodec {
  std::vector<std::uint64_t> L;
  std::vector<TupleCodec> codecs;

  GroupCodec(const CardinalSeq& deg, std::vector<std::uint64_t> levels)
      : L(std::move(levels)) {
    for (std::size_t j = 0; j + 1 < L.size(); ++j) {
      std::vector<Cardinal> sizes;
      for (std::uint64_t k = L[j] + 1; k <= L[j + 1]; ++k)
        sizes.push_back(deg_at(deg, k));
      codecs.emplace_back(std::move(sizes));
    }
  }

  SequenceSpace::Point encode(const SequenceSpace::Point& x) const {
    if (x.size() > L.back())
      fail_internal("sampled point support exceeds the grouped levels");
    SequenceSpace::Point out(codecs.size(), 0);
    for (std::size_t j = 0; j < codecs.size(); ++j) {
      std::vector<std::uint64_t> tuple;
      for (std::uint64_t k = L[j] + 1; k <= L[j + 1]; ++k)
        tuple.push_back(k <= x.size() ? x[k - 1] : 0);
      out[j] = codecs[j].encode(tuple);
    }
    return SequenceSpace::normalize(std::move(out));
  }

  SequenceSpace::Point decode(const SequenceSpace::Point& z) const {
    if (z.size() > codecs.size())
      fail_internal("grouped point support exceeds the tower horizon");
    SequenceSpace::Point out(L.back(), 0);
    for (std::size_t j = 0; j < codecs.size(); ++j) {
      auto tuple = codecs[j].decode(j < z.size() ? z[j] : 0);
      for (std::size_t t = 0; t < tuple.size(); ++t) out[L[j] + t] = tuple[t];
    }
    return SequenceSpace::normalize(std::move(out));
  }
};

std::vector<SequenceSpace::Point> sample_points(const CardinalSeq& deg,
                                                std::uint64_t top,
                                                std::uint64_t count,
                                                Rng& rng) {
  std::set<SequenceSpace::Point> seen;
  seen.insert({});
  for (std::uint64_t i = 0; i < count; ++i) {
    SequenceSpace::Point p(top, 0);
    for (std::uint64_t k = 1; k <= top; ++k) {
      Cardinal d = deg_at(deg, k);
      std::uint64_t bound =
          d.is_infinite() ? 4 : std::min<std::uint64_t>(d.finite_value(), 4);
      p[k - 1] = rng.below(bound);
    }
    seen.insert(SequenceSpace::normalize(std::move(p)));
  }
  return {seen.begin(), seen.end()};
}

std::vector<Rational> integer_scales(std::uint64_t top) {
  std::vector<Rational> out;
  for (std::uint64_t r = 0; r <= top; ++r)
    out.emplace_back(static_cast<std::int64_t>(r));
  return out;
}

bool is_empty_spec(const SpaceSpec& s) {
  return !s.degree_backed() && s.finite->size() == 0;
}

MetricRef spec_metric(const SpaceSpec& s) {
  if (s.degree_backed())
    return MetricRef::sequence(std::make_shared<SequenceSpace>(*s.degrees));
  return MetricRef::finite(s.finite);
}

// point ids of a bounded spec: everything when enumerable, a seeded sample
// when an infinite degree sits below the bounded support
std::vector<std::string> bounded_ids(const SpaceSpec& s, Rng& rng) {
  if (!s.degree_backed()) return s.finite->points();
  SequenceSpace sp(*s.degrees);
  std::uint64_t support = sp.bounded_support();
  bool enumerable = true;
  for (std::uint64_t k = 1; k <= support; ++k)
    if (sp.degree(k).is_infinite()) enumerable = false;
  std::vector<std::string> ids;
  if (enumerable) {
    for (const auto& p : sp.enumerate_bounded())
      ids.push_back(SequenceSpace::point_id(p));
  } else {
    for (const auto& p : sample_points(*s.degrees, support, 16, rng))
      ids.push_back(SequenceSpace::point_id(p));
  }
  return ids;
}

std::string first_point_id(const SpaceSpec& s) {
  if (s.degree_backed()) return "0";
  return s.finite->point(0);
}

void stamp_meta(Certificate& cert, const char* pipeline, std::uint64_t depth,
                std::uint64_t seed) {
  cert.meta["pipeline"] = pipeline;
  cert.meta["depth"] = std::to_string(depth);
  cert.meta["seed"] = std::to_string(seed);
}

}  // namespace

CovProfile CovProfile::from_degrees(CardinalSeq degrees) {
  for (const auto& d : degrees.prefix())
    if (d == Cardinal::finite(0))
      fail_input("degree sequences must have positive entries");
  if (degrees.tail_is_constant() &&
      degrees.constant_tail_value() == Cardinal::finite(0))
    fail_input("degree sequences must have positive entries");
  CovProfile p;
  p.degrees_ = std::move(degrees);
  return p;
}

CovProfile CovProfile::from_space(
    std::shared_ptr<const FiniteUltraSpace> space) {
  if (!space) fail_input("null space");
  CovProfile p;
  p.space_ = std::move(space);
  return p;
}

const CardinalSeq& CovProfile::degrees() const {
  if (!degrees_) fail_input("profile is not degree-backed");
  return *degrees_;
}

const FiniteUltraSpace& CovProfile::space() const {
  if (!space_) fail_input("profile is not finite-backed");
  return *space_;
}

std::shared_ptr<const FiniteUltraSpace> CovProfile::space_ptr() const {
  if (!space_) fail_input("profile is not finite-backed");
  return space_;
}

Cardinal CovProfile::interval_cov(std::uint64_t m, std::uint64_t n) const {
  if (!degrees_) fail_input("interval_cov needs a degree backing");
  if (m >= n) fail_input("interval_cov needs m < n");
  Cardinal d = Cardinal::finite(1);
  for (std::uint64_t k = m + 1; k <= n; ++k)
    d = product(d, deg_at(*degrees_, k));
  return d;
}

Cardinal CovProfile::min_cov(std::size_t i, std::size_t j) const {
  if (!space_) fail_input("min_cov needs a finite backing");
  auto scales = space_->realized_scales();
  if (i >= j || j >= scales.size()) fail_input("scale indices out of range");
  std::uint64_t best = 0;
  for (std::size_t x = 0; x < space_->size(); ++x) {
    std::uint64_t c = space_->cov(x, scales[i], scales[j]);
    if (x == 0 || c < best) best = c;
  }
  return Cardinal::finite(best);
}

Cardinal CovProfile::sup_cov(std::size_t i, std::size_t j) const {
  if (!space_) fail_input("sup_cov needs a finite backing");
  auto scales = space_->realized_scales();
  if (i >= j || j >= scales.size()) fail_input("scale indices out of range");
  std::uint64_t best = 0;
  for (std::size_t x = 0; x < space_->size(); ++x)
    best = std::max(best, space_->cov(x, scales[i], scales[j]));
  return Cardinal::finite(best);
}

InvariantPair invariants(const CovProfile& profile) {
  if (profile.degree_backed()) {
    const auto& s = profile.degrees();
    Cardinal best = sharp_from(s, 0);
    std::uint64_t wit = 0;
    for (std::uint64_t n = 1; n <= s.prefix().size(); ++n) {
      Cardinal v = sharp_from(s, n);
      if (v < best) {
        best = v;
        wit = n;
      }
    }
    return {best, best, wit};
  }
  const auto& X = profile.space();
  if (X.size() == 0)
    fail_hypothesis(
        "the empty space is its own coarse class; the covering formulas are "
        "vacuous");
  auto scales = X.realized_scales();
  if (scales.empty()) return {Cardinal::finite(2), Cardinal::finite(2), 0};
  Rational diam = scales.back();
  Cardinal flat = Cardinal::finite(0), sharp = Cardinal::finite(0);
  std::uint64_t wit = 0;
  for (std::size_t i = 0; i < scales.size(); ++i) {
    std::uint64_t lo = 0, hi = 0;
    for (std::size_t x = 0; x < X.size(); ++x) {
      std::uint64_t c = X.cov(x, scales[i], diam);
      if (x == 0 || c < lo) lo = c;
      hi = std::max(hi, c);
    }
    Cardinal f = Cardinal::finite(lo).successor();
    Cardinal s = Cardinal::finite(hi).successor();
    if (i == 0 || f < flat) flat = f;
    if (i == 0 || s < sharp) {
      sharp = s;
      wit = i;
    }
  }
  return {flat, sharp, wit};
}

LevelSelection select_levels_embedding(const CovProfile& X,
                                       const CovProfile& Y,
                                       std::uint64_t depth) {
  if (!X.degree_backed() || !Y.degree_backed())
    fail_input("level selection requires degree-sequence backings");
  if (depth == 0) fail_input("depth must be positive");
  InvariantPair ix = invariants(X), iy = invariants(Y);
  const std::uint64_t w = ix.witness_eps;
  LevelSelection sel{{w}, {0}};
  while (true) {
    std::uint64_t next_e = sel.E.back() + 1;
    if (next_e > w + depth) break;
    Cardinal kappa = deg_at(X.degrees(), next_e);
    Cardinal prod = Cardinal::finite(1);
    std::optional<std::uint64_t> found;
    for (std::uint64_t d = sel.D.back() + 1; d <= depth; ++d) {
      prod = product(prod, deg_at(Y.degrees(), d));
      if (prod >= kappa) {
        found = d;
        break;
      }
    }
    if (!found) break;
    sel.E.push_back(next_e);
    sel.D.push_back(*found);
  }
  if (sel.E.size() < 2) {
    if (ix.sharp <= iy.flat)
      fail_hypothesis("level search exhausted: insufficient depth " +
                      std::to_string(depth) + " for the embedding chain");
    fail_hypothesis("embedding hypothesis fails symbolically: sharp(X) = " +
                    ix.sharp.str() + " exceeds flat(Y) = " + iy.flat.str());
  }
  return sel;
}

LevelSelection select_levels_equivalence(const CovProfile& X,
                                         const CovProfile& Y,
                                         std::uint64_t depth) {
  if (!X.degree_backed() || !Y.degree_backed())
    fail_input("level selection requires degree-sequence backings");
  if (depth == 0) fail_input("depth must be positive");
  InvariantPair ix = invariants(X), iy = invariants(Y);
  if (ix.flat != ix.sharp || iy.flat != iy.sharp || ix.sharp != iy.sharp)
    fail_hypothesis(
        "equivalence hypothesis fails symbolically: invariants (" +
        ix.flat.str() + ", " + ix.sharp.str() + ") vs (" + iy.flat.str() +
        ", " + iy.sharp.str() + ")");
  Cardinal floor =
      ix.sharp >= Cardinal::aleph(1) ? Cardinal::aleph(0) : Cardinal::finite(1);
  const std::uint64_t wx = ix.witness_eps, wy = iy.witness_eps;
  LevelSelection sel{{wx}, {wy}};
  Cardinal y_prev = Cardinal::finite(1);
  while (true) {
    Cardinal target_x = cmax(floor, y_prev);
    Cardinal prod = Cardinal::finite(1);
    std::optional<std::uint64_t> e;
    for (std::uint64_t k = sel.E.back() + 1; k <= wx + depth; ++k) {
      prod = product(prod, deg_at(X.degrees(), k));
      if (prod >= target_x) {
        e = k;
        break;
      }
    }
    if (!e) break;
    Cardinal x_step = prod;
    Cardinal target_y = cmax(floor, x_step);
    prod = Cardinal::finite(1);
    std::optional<std::uint64_t> d;
    for (std::uint64_t k = sel.D.back() + 1; k <= wy + depth; ++k) {
      prod = product(prod, deg_at(Y.degrees(), k));
      if (prod >= target_y) {
        d = k;
        break;
      }
    }
    if (!d) break;
    sel.E.push_back(*e);
    sel.D.push_back(*d);
    y_prev = prod;
  }
  if (sel.E.size() < 2)
    fail_hypothesis("level search exhausted: insufficient depth " +
                    std::to_string(depth) + " for the equivalence chain");
  return sel;
}

std::string relation_str(Relation r) {
  switch (r) {
    case Relation::Equivalent:
      return "equivalent";
    case Relation::EmbedsInto:
      return "X-embeds-in-Y";
    case Relation::NotEquivalent:
      return "not-equivalent";
    case Relation::UndecidedHere:
      return "undecided-here";
  }
  fail_internal("unknown relation");
}

SpaceSpec SpaceSpec::from_degrees(CardinalSeq d) {
  SpaceSpec s;
  s.degrees = std::move(d);
  return s;
}

SpaceSpec SpaceSpec::from_finite(std::shared_ptr<const FiniteUltraSpace> sp) {
  if (!sp) fail_input("null space");
  SpaceSpec s;
  s.finite = std::move(sp);
  return s;
}

CovProfile SpaceSpec::profile() const {
  if (degree_backed()) return CovProfile::from_degrees(*degrees);
  return CovProfile::from_space(finite);
}

MetricRef SpaceSpec::metric() const { return spec_metric(*this); }

Verdict coarse_embedding_pipeline(const SpaceSpec& X, const SpaceSpec& Y,
                                  std::uint64_t depth, std::uint64_t seed) {
  Verdict v;
  if (is_empty_spec(X)) {
    MultiMap empty(spec_metric(X), spec_metric(Y), {},
                   std::vector<std::string>{}, std::nullopt);
    Certificate cert = empty.check_coarse_embedding(integer_scales(1));
    stamp_meta(cert, "embedding", depth, seed);
    cert.meta["trivial"] = "empty-source";
    v.relation = Relation::EmbedsInto;
    v.constructive = true;
    v.certificate = std::move(cert);
    v.citation = "empty class";
    if (!is_empty_spec(Y)) v.y_invariants = invariants(Y.profile());
    return v;
  }
  v.x_invariants = invariants(X.profile());
  if (is_empty_spec(Y)) {
    v.relation = Relation::UndecidedHere;
    v.citation = "Theorem 2(1) hypothesis fails: empty target";
    return v;
  }
  v.y_invariants = invariants(Y.profile());
  if (!(v.x_invariants->sharp <= v.y_invariants->flat)) {
    v.relation = Relation::UndecidedHere;
    v.citation = "Theorem 2(1) hypothesis fails: sharp(X) = " +
                 v.x_invariants->sharp.str() + " exceeds flat(Y) = " +
                 v.y_invariants->flat.str();
    return v;
  }
  Rng rng(seed);
  if (v.x_invariants->sharp <= Cardinal::finite(2)) {
    auto xs = bounded_ids(X, rng);
    std::string y0 = first_point_id(Y);
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& x : xs) pairs.emplace_back(x, y0);
    MultiMap rel(spec_metric(X), spec_metric(Y), std::move(pairs), xs,
                 std::nullopt);
    Certificate cert = rel.check_coarse_embedding(integer_scales(1));
    stamp_meta(cert, "embedding", depth, seed);
    cert.meta["trivial"] = "bounded-source";
    v.relation = Relation::EmbedsInto;
    v.constructive = true;
    v.certificate = std::move(cert);
    v.citation = "bounded class";
    return v;
  }
  CovProfile px = X.profile(), py = Y.profile();
  LevelSelection sel = select_levels_embedding(px, py, depth);
  auto TX = std::make_shared<LazyTower>(grouped_seq(px.degrees(), sel.E));
  auto TY = std::make_shared<LazyTower>(grouped_seq(py.degrees(), sel.D));
  TowerMap phi =
      build_embedding(TowerRef::from_lazy(TX), TowerRef::from_lazy(TY), {});
  GroupCodec cx(px.degrees(), sel.E), cy(py.degrees(), sel.D);
  auto Xspace = std::make_shared<SequenceSpace>(px.degrees());
  auto Yspace = std::make_shared<SequenceSpace>(py.degrees());

  auto xs = sample_points(px.degrees(), sel.E.back(), 24, rng);
  std::vector<std::pair<std::string, std::string>> be_pairs;
  std::vector<std::string> sdom;
  std::set<std::string> enc_ids;
  for (const auto& x : xs) {
    auto e = cx.encode(x);
    std::string xid = SequenceSpace::point_id(x);
    std::string eid = SequenceSpace::point_id(e);
    be_pairs.emplace_back(xid, eid);
    sdom.push_back(xid);
    enc_ids.insert(eid);
  }
  MultiMap BE(MetricRef::sequence(Xspace),
              MetricRef::sequence(TX->boundary()), std::move(be_pairs), sdom,
              std::nullopt);
  MultiMap dphi = boundary_multimap(
      phi, std::vector<std::string>(enc_ids.begin(), enc_ids.end()));
  std::vector<std::pair<std::string, std::string>> bd_pairs;
  std::set<std::string> ys_seen;
  for (const auto& [t, z] : dphi.pairs()) {
    auto y = cy.decode(SequenceSpace::parse_point(z));
    std::string yid = SequenceSpace::point_id(y);
    bd_pairs.emplace_back(yid, z);
    ys_seen.insert(yid);
  }
  MultiMap BD(MetricRef::sequence(Yspace),
              MetricRef::sequence(TY->boundary()), std::move(bd_pairs),
              std::vector<std::string>(ys_seen.begin(), ys_seen.end()),
              std::nullopt);
  MultiMap rel = compose(BD.inverse(), compose(dphi, BE));
  Certificate cert = rel.check_coarse_embedding(
      integer_scales(std::max(sel.E.back(), sel.D.back())));
  stamp_meta(cert, "embedding", depth, seed);
  cert.meta["E"] = scale_list_str(sel.E);
  cert.meta["D"] = scale_list_str(sel.D);
  v.relation = Relation::EmbedsInto;
  v.constructive = true;
  v.certificate = std::move(cert);
  v.citation = "Theorem 2(1)";
  return v;
}

Verdict coarse_equivalence_pipeline(const SpaceSpec& X, const SpaceSpec& Y,
                                    std::uint64_t depth, std::uint64_t seed) {
  Verdict v;
  bool xe = is_empty_spec(X), ye = is_empty_spec(Y);
  if (xe || ye) {
    if (xe && ye) {
      MultiMap empty(spec_metric(X), spec_metric(Y), {},
                     std::vector<std::string>{}, std::vector<std::string>{});
      Certificate cert = empty.check_coarse_equivalence(integer_scales(1));
      stamp_meta(cert, "equivalence", depth, seed);
      cert.meta["trivial"] = "empty";
      v.relation = Relation::Equivalent;
      v.constructive = true;
      v.certificate = std::move(cert);
      v.citation = "empty class";
      return v;
    }
    v.relation = Relation::UndecidedHere;
    v.citation = "Theorem 2(2) hypothesis fails: empty vs nonempty";
    if (!xe) v.x_invariants = invariants(X.profile());
    if (!ye) v.y_invariants = invariants(Y.profile());
    return v;
  }
  CovProfile px = X.profile(), py = Y.profile();
  InvariantPair ix = invariants(px), iy = invariants(py);
  v.x_invariants = ix;
  v.y_invariants = iy;
  bool equal = ix.flat == ix.sharp && iy.flat == iy.sharp &&
               ix.sharp == iy.sharp;
  if (!equal) {
    v.relation = Relation::UndecidedHere;
    v.citation = "Theorem 2(2) hypothesis fails: invariants (" +
                 ix.flat.str() + ", " + ix.sharp.str() + ") vs (" +
                 iy.flat.str() + ", " + iy.sharp.str() + ")";
    return v;
  }
  Cardinal kappa = ix.sharp;
  Rng rng(seed);
  if (kappa <= Cardinal::finite(2)) {
    auto xs = bounded_ids(X, rng);
    auto ys = bounded_ids(Y, rng);
    std::string x0 = xs.front(), y0 = ys.front();
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& x : xs) pairs.emplace_back(x, y0);
    for (const auto& y : ys) pairs.emplace_back(x0, y);
    MultiMap rel(spec_metric(X), spec_metric(Y), std::move(pairs), xs, ys);
    Certificate cert = rel.check_coarse_equivalence(integer_scales(1));
    stamp_meta(cert, "equivalence", depth, seed);
    cert.meta["trivial"] = "bounded";
    v.relation = Relation::Equivalent;
    v.constructive = true;
    v.certificate = std::move(cert);
    v.citation = "bounded class";
    return v;
  }
  if (kappa == Cardinal::aleph(0)) {
    v.relation = Relation::Equivalent;
    v.constructive = false;
    v.citation = "[BZ] Thm 5";
    return v;
  }
  if (kappa >= Cardinal::aleph(2)) {
    v.relation = Relation::Equivalent;
    v.constructive = false;
    v.citation = "Theorem 2(2), degrees beyond enumeration";
    return v;
  }
  // kappa = Aleph(1): every degree is at most Aleph(0) with infinitely many
  // equal to it, so the grouped towers are omega-enumerable
  LevelSelection sel = select_levels_equivalence(px, py, depth);
  auto TX = std::make_shared<LazyTower>(grouped_seq(px.degrees(), sel.E));
  auto TY = std::make_shared<LazyTower>(grouped_seq(py.degrees(), sel.D));
  TowerMap phi = build_immersion(TX, TY);
  // preimage witnesses sit one level deeper than the sampled leaves, so the
  // source codec covers one extra consecutive base level
  auto EX = sel.E;
  EX.push_back(EX.back() + 1);
  GroupCodec cx(px.degrees(), EX), cy(py.degrees(), sel.D);
  auto Xspace = std::make_shared<SequenceSpace>(px.degrees());
  auto Yspace = std::make_shared<SequenceSpace>(py.degrees());

  auto xs = sample_points(px.degrees(), sel.E.back(), 12, rng);
  auto ys = sample_points(py.degrees(), sel.D.back(), 12, rng);
  std::vector<std::pair<std::string, std::string>> be_pairs;
  std::set<std::string> sdom, dphi_dom;
  for (const auto& x : xs) {
    auto e = cx.encode(x);
    std::string eid = SequenceSpace::point_id(e);
    be_pairs.emplace_back(SequenceSpace::point_id(x), eid);
    sdom.insert(SequenceSpace::point_id(x));
    dphi_dom.insert(eid);
  }
  std::vector<std::pair<std::string, std::string>> bd_pairs;
  std::set<std::string> tdom;
  for (const auto& y : ys) {
    auto z = cy.encode(y);
    std::string yid = SequenceSpace::point_id(y);
    std::string zid = SequenceSpace::point_id(z);
    TNode t = preimage_witness(
        phi, TNode::lazy_node(0, SequenceSpace::normalize(z)));
    auto tx = SequenceSpace::normalize(t.tail);
    std::string tid = SequenceSpace::point_id(tx);
    dphi_dom.insert(tid);
    be_pairs.emplace_back(SequenceSpace::point_id(cx.decode(tx)), tid);
    sdom.insert(SequenceSpace::point_id(cx.decode(tx)));
    bd_pairs.emplace_back(yid, zid);
    tdom.insert(yid);
  }
  MultiMap BE(MetricRef::sequence(Xspace),
              MetricRef::sequence(TX->boundary()), std::move(be_pairs),
              std::vector<std::string>(sdom.begin(), sdom.end()),
              std::nullopt);
  MultiMap dphi = boundary_multimap(
      phi, std::vector<std::string>(dphi_dom.begin(), dphi_dom.end()));
  for (const auto& [t, z] : dphi.pairs()) {
    auto y = cy.decode(SequenceSpace::parse_point(z));
    std::string yid = SequenceSpace::point_id(y);
    bd_pairs.emplace_back(yid, z);
    tdom.insert(yid);
  }
  MultiMap BD(MetricRef::sequence(Yspace),
              MetricRef::sequence(TY->boundary()), std::move(bd_pairs),
              std::vector<std::string>(tdom.begin(), tdom.end()),
              std::nullopt);
  MultiMap rel = compose(BD.inverse(), compose(dphi, BE));
  Certificate cert = rel.check_coarse_equivalence(
      integer_scales(std::max(EX.back(), sel.D.back())));
  stamp_meta(cert, "equivalence", depth, seed);
  cert.meta["E"] = scale_list_str(sel.E);
  cert.meta["D"] = scale_list_str(sel.D);
  v.relation = Relation::Equivalent;
  v.constructive = true;
  v.certificate = std::move(cert);
  v.citation = "Theorem 2(2)";
  return v;
}

HomogeneousModel homogeneous_model(const Cardinal& kappa) {
  CardinalSeq degrees = cofinal_ladder(kappa);
  InvariantPair inv = invariants(CovProfile::from_degrees(degrees));
  if (inv.sharp != kappa || inv.flat != kappa)
    fail_hypothesis("no group-chain model attains invariants (" +
                    kappa.str() + ", " + kappa.str() +
                    "); the cofinal ladder yields sharp = " + inv.sharp.str());
  return {std::move(degrees), inv};
}

Verdict classify_pair(const SpaceSpec& X, const SpaceSpec& Y,
                      std::uint64_t depth, std::uint64_t seed) {
  for (const SpaceSpec* s : {&X, &Y}) {
    if (!s->degree_backed() && !s->finite->is_isometrically_homogeneous())
      fail_input(
          "classification verdicts need isometrically homogeneous inputs; "
          "use the coarse pipelines for general spaces");
  }
  bool xe = is_empty_spec(X), ye = is_empty_spec(Y);
  if (xe || ye) {
    if (xe && ye) return coarse_equivalence_pipeline(X, Y, depth, seed);
    Verdict v;
    v.relation = Relation::NotEquivalent;
    v.citation = "Theorem 4: empty vs nonempty";
    if (!xe) v.x_invariants = invariants(X.profile());
    if (!ye) v.y_invariants = invariants(Y.profile());
    return v;
  }
  InvariantPair ix = invariants(X.profile()), iy = invariants(Y.profile());
  if (ix.sharp == iy.sharp) return coarse_equivalence_pipeline(X, Y, depth, seed);
  Verdict v;
  v.relation = Relation::NotEquivalent;
  v.constructive = false;
  v.citation = "Theorem 4: sharp invariants differ (" + ix.sharp.str() +
               " vs " + iy.sharp.str() + ")";
  v.x_invariants = ix;
  v.y_invariants = iy;
  return v;
}

VerifyReport verify_certificate(const Certificate& claimed,
                                const SpaceSpec& X, const SpaceSpec& Y,
                                std::vector<Rational> scales) {
  if (claimed.kind != "embedding" && claimed.kind != "equivalence") {
    fail_input("unknown certificate kind \"" + claimed.kind + "\"");
  }
  VerifyReport report;
  auto reject = [&](std::string why) {
    report.accepted = false;
    report.failure = std::move(why);
    return report;
  };

  if (scales.empty()) {
    for (const auto& row : claimed.forward) scales.push_back(row.eps);
    std::sort(scales.begin(), scales.end());
    scales.erase(std::unique(scales.begin(), scales.end()), scales.end());
  }
  if (scales.empty()) return reject("certificate carries no scales");

  std::optional<MultiMap> rel;
  try {
    rel.emplace(X.metric(), Y.metric(), claimed.pairs,
                claimed.source_domain, claimed.target_domain);
  } catch (const Error& e) {
    return reject(std::string("certificate does not match the spaces: ") +
                  e.what());
  }
  report.recomputed = claimed.kind == "embedding"
                          ? rel->check_coarse_embedding(scales)
                          : rel->check_coarse_equivalence(scales);
  const Certificate& actual = report.recomputed;

  if (!claimed.total) return reject("certificate does not claim totality");
  if (!actual.total) {
    std::string p =
        actual.uncovered_source.empty() ? "" : actual.uncovered_source.front();
    return reject("relation is not total on its domain: point \"" + p +
                  "\" has no image");
  }
  if (claimed.kind == "equivalence") {
    if (!claimed.surjective.value_or(false)) {
      return reject("equivalence certificate does not claim surjectivity");
    }
    if (!actual.surjective.value_or(false)) {
      std::string p =
          actual.uncovered_target.empty() ? "" : actual.uncovered_target.front();
      return reject("relation is not surjective: point \"" + p +
                    "\" has no preimage");
    }
  }

  auto claimed_bound = [&](const std::vector<ModulusRow>& rows,
                           const Rational& eps) -> const Rational* {
    for (const auto& r : rows)
      if (r.eps == eps) return &r.omega;
    return nullptr;
  };
  for (const auto& row : actual.forward) {
    const Rational* bound = claimed_bound(claimed.forward, row.eps);
    if (!bound) {
      return reject("certificate omits forward scale " +
                    format_rational(row.eps));
    }
    if (*bound < row.omega) {
      return reject("forward modulus fails at (" + format_rational(row.eps) +
                    ", " + format_rational(*bound) + "): actual omega is " +
                    format_rational(row.omega));
    }
  }
  for (const auto& row : actual.inverse) {
    const Rational* bound = claimed_bound(claimed.inverse, row.eps);
    if (!bound) {
      return reject("certificate omits inverse scale " +
                    format_rational(row.eps));
    }
    if (*bound < row.omega) {
      return reject("inverse modulus fails at (" + format_rational(row.eps) +
                    ", " + format_rational(*bound) + "): actual omega is " +
                    format_rational(row.omega));
    }
  }

  report.accepted = true;
  return report;
}

}  // namespace uc
