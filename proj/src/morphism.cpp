#include "morphism.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>

#include "error.hpp"

namespace uc {

TowerRef TowerRef::from_explicit(std::shared_ptr<const ExplicitTower> t) {
  if (!t) fail_internal("null tower");
  TowerRef r;
  r.explicit_ = std::move(t);
  return r;
}

TowerRef TowerRef::from_lazy(std::shared_ptr<const LazyTower> t) {
  if (!t) fail_internal("null tower");
  TowerRef r;
  r.lazy_ = std::move(t);
  return r;
}

const ExplicitTower& TowerRef::explicit_tower() const {
  if (!explicit_) fail_internal("not an explicit tower");
  return *explicit_;
}

const LazyTower& TowerRef::lazy_tower() const {
  if (!lazy_) fail_internal("not a lazy tower");
  return *lazy_;
}

namespace {

LazyTower::Node to_lazy(const TNode& x) {
  if (!x.is_lazy()) fail_internal("explicit node in a lazy tower");
  return {x.level, x.tail};
}

TNode lazy_tnode(const LazyTower::Node& x) {
  return TNode::lazy_node(x.level, x.tail);
}

}  // namespace

bool TowerRef::contains(const TNode& x) const {
  if (is_lazy()) return x.is_lazy() && lazy_->contains(to_lazy(x));
  return !x.is_lazy() && explicit_->has_node(*x.id) &&
         explicit_->level_of(*x.id) == x.level;
}

TNode TowerRef::parent(const TNode& x) const {
  if (is_lazy()) return lazy_tnode(lazy_->parent(to_lazy(x)));
  return TNode::explicit_node(x.level + 1, explicit_->parent(*x.id));
}

TNode TowerRef::ancestor(const TNode& x, std::uint64_t level) const {
  if (is_lazy()) return lazy_tnode(lazy_->ancestor(to_lazy(x), level));
  return TNode::explicit_node(level, explicit_->ancestor(*x.id, level));
}

TNode TowerRef::meet(const TNode& x, const TNode& y) const {
  if (is_lazy()) return lazy_tnode(lazy_->meet(to_lazy(x), to_lazy(y)));
  std::string m = explicit_->meet(*x.id, *y.id);
  return TNode::explicit_node(explicit_->level_of(m), m);
}

Cardinal TowerRef::node_deg(const TNode& x, std::uint64_t lambda) const {
  if (is_lazy()) return lazy_->deg(to_lazy(x), lambda);
  return explicit_->deg(*x.id, lambda);
}

bool TowerRef::is_pruned() const {
  return is_lazy() ? true : explicit_->is_pruned();
}

std::string TowerRef::node_id(const TNode& x) const {
  if (is_lazy()) return LazyTower::node_id(to_lazy(x));
  return *x.id;
}

std::string TowerRef::leaf_point_id(const TNode& x) const {
  if (x.level != 0) fail_input("not a leaf node");
  if (is_lazy()) return LazyTower::leaf_point_id(to_lazy(x));
  return *x.id;
}

TNode TowerRef::leaf_for_point(const std::string& point_id) const {
  if (is_lazy()) return lazy_tnode(lazy_->leaf_for_point(point_id));
  if (!explicit_->has_node(point_id) || explicit_->level_of(point_id) != 0)
    fail_input("unknown leaf: " + point_id);
  return TNode::explicit_node(0, point_id);
}

MetricRef TowerRef::boundary() const {
  if (is_lazy()) return MetricRef::sequence(lazy_->boundary());
  return MetricRef::finite(explicit_->boundary_space());
}

namespace {

// ---- trapezium instance machinery ----------------------------------------

// child index binding a node under its parent
std::uint64_t child_index(const LazyTower::Node& x) {
  return x.tail.empty() ? 0 : x.tail[0];
}

struct Sel {
  enum class Kind { All, Evens, Explicit, FullClass, OddClass };
  Kind kind = Kind::All;
  std::uint64_t m = 0;
  std::vector<std::uint64_t> list;

  static Sel all() { return {Sel::Kind::All, 0, {}}; }
  static Sel evens() { return {Sel::Kind::Evens, 0, {}}; }
  static Sel explicit_list(std::vector<std::uint64_t> l) {
    return {Sel::Kind::Explicit, 0, std::move(l)};
  }
  static Sel full_class(std::uint64_t m) { return {Sel::Kind::FullClass, m, {}}; }
  static Sel odd_class(std::uint64_t m) { return {Sel::Kind::OddClass, m, {}}; }

  bool infinite() const { return kind != Kind::Explicit; }

  bool contains(std::uint64_t c) const {
    switch (kind) {
      case Kind::All: return true;
      case Kind::Evens: return c % 2 == 0;
      case Kind::Explicit:
        return std::find(list.begin(), list.end(), c) != list.end();
      case Kind::FullClass: return cantor_unpair(c).first == m;
      case Kind::OddClass:
        return c % 2 == 1 && cantor_unpair((c - 1) / 2).first == m;
    }
    return false;
  }

  std::uint64_t index_of(std::uint64_t c) const {
    switch (kind) {
      case Kind::All: return c;
      case Kind::Evens: return c / 2;
      case Kind::Explicit: {
        auto it = std::find(list.begin(), list.end(), c);
        if (it == list.end()) fail_internal("element outside the plateau");
        return static_cast<std::uint64_t>(it - list.begin());
      }
      case Kind::FullClass: return cantor_unpair(c).second;
      case Kind::OddClass: return cantor_unpair((c - 1) / 2).second;
    }
    fail_internal("bad selector");
  }

  std::uint64_t element(std::uint64_t i) const {
    switch (kind) {
      case Kind::All: return i;
      case Kind::Evens: return 2 * i;
      case Kind::Explicit:
        if (i >= list.size()) fail_internal("plateau index out of range");
        return list[i];
      case Kind::FullClass: return cantor_pair(m, i);
      case Kind::OddClass: return 2 * cantor_pair(m, i) + 1;
    }
    fail_internal("bad selector");
  }
};

struct TrapInstance {
  std::uint64_t k = 0;      // plateau level
  LazyTower::Node vertex;   // level k+1 node of T
  Sel plateau;              // subset of suc(vertex)
  LazyTower::Node w;        // level k node of S
  struct Pin {
    std::uint64_t i0 = 0;  // plateau index of the pinned element
    std::uint64_t v0 = 0;  // w-child index of the pinned target
    std::shared_ptr<const TrapInstance> inner;
  };
  std::optional<Pin> pin;
};

std::uint64_t skip_slot(std::uint64_t slot, std::uint64_t v0) {
  return slot < v0 ? slot : slot + 1;
}

struct ImmersionCore {
  std::shared_ptr<const LazyTower> T, S;
  bool spine_mode = false;
  std::shared_ptr<const TrapInstance> root;  // trapezium maps

  mutable std::mutex mu;
  mutable std::vector<std::shared_ptr<const TrapInstance>> spine;
  mutable std::map<LazyTower::Node, LazyTower::Node> memo;

  // spine instance at plateau level k: plateau = even children of the zero
  // node a_{k+1}, target = the zero node b_k, pinned to the previous level
  std::shared_ptr<const TrapInstance> spine_instance(std::uint64_t k) const {
    while (spine.size() <= k) {
      auto inst = std::make_shared<TrapInstance>();
      std::uint64_t level = spine.size();
      inst->k = level;
      inst->vertex = LazyTower::Node{level + 1, {}};
      inst->plateau = Sel::evens();
      inst->w = LazyTower::Node{level, {}};
      if (level >= 1)
        inst->pin = TrapInstance::Pin{0, 0, spine[level - 1]};
      spine.push_back(std::move(inst));
    }
    return spine[k];
  }

  LazyTower::Node eval_in(const TrapInstance& I, const LazyTower::Node& x) const {
    if (x.level > I.k) fail_internal("node above the plateau");
    if (x.level == I.k) {
      if (!(I.plateau.contains(child_index(x)) &&
            T->ancestor(x, I.k + 1) == I.vertex))
        fail_internal("node outside the plateau");
      return I.w;
    }
    LazyTower::Node p = T->ancestor(x, I.k);
    std::uint64_t i = I.plateau.index_of(child_index(p));
    LazyTower::Node y = T->ancestor(x, I.k - 1);
    std::uint64_t c = child_index(y);
    if (I.pin && i == I.pin->i0) {
      if (c % 2 == 0) return eval_in(*I.pin->inner, x);
      std::uint64_t h = (c - 1) / 2;
      auto [m, r] = cantor_unpair(h);
      (void)r;
      std::uint64_t u = skip_slot(cantor_pair(0, m), I.pin->v0);
      TrapInstance piece{I.k - 1, p, Sel::odd_class(m), S->child(I.w, u), {}};
      return eval_in(piece, x);
    }
    std::uint64_t ihat = i;
    if (I.pin) ihat = (i < I.pin->i0) ? i + 1 : i;
    auto [m, r] = cantor_unpair(c);
    (void)r;
    std::uint64_t slot = cantor_pair(ihat, m);
    std::uint64_t u = I.pin ? skip_slot(slot, I.pin->v0) : slot;
    TrapInstance piece{I.k - 1, p, Sel::full_class(m), S->child(I.w, u), {}};
    return eval_in(piece, x);
  }

  LazyTower::Node invert_in(const TrapInstance& I,
                            const LazyTower::Node& z) const {
    if (z.level > I.k) fail_internal("target above the instance");
    if (z == I.w) {
      std::uint64_t idx = I.pin ? I.pin->i0 : 0;
      return T->child(I.vertex, I.plateau.element(idx));
    }
    LazyTower::Node zk = S->ancestor(z, I.k - 1);
    std::uint64_t vc = child_index(zk);
    if (I.pin && vc == I.pin->v0) return invert_in(*I.pin->inner, z);
    std::uint64_t slot = I.pin ? (vc < I.pin->v0 ? vc : vc - 1) : vc;
    auto [ihat, m] = cantor_unpair(slot);
    LazyTower::Node p;
    Sel cls;
    if (I.pin && ihat == 0) {
      p = T->child(I.vertex, I.plateau.element(I.pin->i0));
      cls = Sel::odd_class(m);
    } else {
      std::uint64_t i = ihat;
      if (I.pin) i = (ihat <= I.pin->i0) ? ihat - 1 : ihat;
      p = T->child(I.vertex, I.plateau.element(i));
      cls = Sel::full_class(m);
    }
    TrapInstance piece{I.k - 1, p, cls, S->child(I.w, vc), {}};
    return invert_in(piece, z);
  }

  // domain check for an isolated trapezium instance
  void require_in_domain(const TrapInstance& I, const LazyTower::Node& x) const {
    bool ok = x.level <= I.k && T->contains(x) &&
              T->ancestor(x, I.k + 1) == I.vertex &&
              I.plateau.contains(child_index(T->ancestor(x, I.k)));
    if (!ok) fail_input("node outside the trapezium domain");
  }

  LazyTower::Node eval(const LazyTower::Node& x) const {
    std::lock_guard<std::mutex> lock(mu);
    auto hit = memo.find(x);
    if (hit != memo.end()) return hit->second;
    LazyTower::Node out;
    if (spine_mode) {
      std::uint64_t K = x.level + x.tail.size();
      out = eval_in(*spine_instance(K), x);
    } else {
      require_in_domain(*root, x);
      out = eval_in(*root, x);
    }
    auto [it, fresh] = memo.emplace(x, out);
    if (!fresh && it->second != out)
      fail_internal("memo contradiction: lazy evaluation is not stable");
    return out;
  }

  LazyTower::Node invert(const LazyTower::Node& z) const {
    std::lock_guard<std::mutex> lock(mu);
    if (!S->contains(z)) fail_input("target node is not in S");
    if (spine_mode) {
      std::uint64_t K = z.level + z.tail.size();
      return invert_in(*spine_instance(K), z);
    }
    if (!(z.level <= root->k && S->ancestor(z, root->k) == root->w))
      fail_input("target node outside the trapezium image");
    return invert_in(*root, z);
  }
};

}  // namespace

struct TowerMapImpl {
  TowerMap::Kind kind = TowerMap::Kind::ExplicitTable;
  TowerRef source, target;
  std::map<std::string, std::string> table;  // explicit source id -> target id
  std::vector<std::pair<std::uint64_t, std::uint64_t>> level_pairs;
  std::shared_ptr<ImmersionCore> core;
};

struct TowerMapAccess {
  static const std::shared_ptr<TowerMapImpl>& impl(const TowerMap& m) {
    return m.impl_;
  }
};

TowerMap::TowerMap(std::shared_ptr<TowerMapImpl> impl) : impl_(std::move(impl)) {}
TowerMap::~TowerMap() = default;
TowerMap::TowerMap(const TowerMap&) = default;
TowerMap& TowerMap::operator=(const TowerMap&) = default;

TowerMap make_tower_map(std::shared_ptr<TowerMapImpl> impl) {
  return TowerMap(std::move(impl));
}

TowerMap::Kind TowerMap::kind() const { return impl_->kind; }
const TowerRef& TowerMap::source() const { return impl_->source; }
const TowerRef& TowerMap::target() const { return impl_->target; }

std::uint64_t TowerMap::level_image(std::uint64_t l) const {
  if (impl_->kind != Kind::ExplicitTable) return l;  // identity level map
  for (const auto& [a, b] : impl_->level_pairs)
    if (a == l) return b;
  fail_input("level outside the level map");
}

TNode TowerMap::apply(const TNode& x) const {
  switch (impl_->kind) {
    case Kind::ExplicitTable: {
      if (!impl_->source.contains(x)) fail_input("node not in the source tower");
      auto it = impl_->table.find(*x.id);
      if (it == impl_->table.end()) fail_internal("node missing from the table");
      const auto& T = impl_->target.explicit_tower();
      return TNode::explicit_node(T.level_of(it->second), it->second);
    }
    case Kind::LazyInjection: {
      if (!impl_->source.contains(x)) fail_input("node not in the source tower");
      TNode out = x;
      if (!impl_->target.contains(out))
        fail_internal("injected address exceeds the target degrees");
      return out;
    }
    case Kind::LazyImmersion:
    case Kind::Trapezium: {
      if (!impl_->source.contains(x)) fail_input("node not in the source tower");
      return lazy_tnode(impl_->core->eval(to_lazy(x)));
    }
  }
  fail_internal("bad map kind");
}

std::vector<std::pair<TNode, TNode>> TowerMap::evaluated_pairs() const {
  std::vector<std::pair<TNode, TNode>> out;
  if (impl_->kind == Kind::ExplicitTable) {
    const auto& S = impl_->source.explicit_tower();
    const auto& T = impl_->target.explicit_tower();
    for (const auto& [a, b] : impl_->table)
      out.emplace_back(TNode::explicit_node(S.level_of(a), a),
                       TNode::explicit_node(T.level_of(b), b));
  } else if (impl_->core) {
    std::lock_guard<std::mutex> lock(impl_->core->mu);
    for (const auto& [a, b] : impl_->core->memo)
      out.emplace_back(lazy_tnode(a), lazy_tnode(b));
  }
  std::sort(out.begin(), out.end());
  return out;
}

MapClass classify_map(const TowerMap& phi, std::vector<TNode> sample) {
  // level map sanity: strictly increasing in both coordinates
  if (phi.kind() == TowerMap::Kind::ExplicitTable) {
    const auto& S = phi.source().explicit_tower();
    for (std::uint64_t l = 0; l + 1 <= S.depth(); ++l)
      if (phi.level_image(l) >= phi.level_image(l + 1))
        fail_input("level map is not monotone injective");
  }

  bool full = false;
  if (sample.empty()) {
    if (phi.source().is_lazy())
      fail_input("a node sample is required for lazy sources");
    const auto& S = phi.source().explicit_tower();
    for (std::uint64_t l = 0; l <= S.depth(); ++l)
      for (const auto& id : S.level(l))
        sample.push_back(TNode::explicit_node(l, id));
    full = true;
  }

  MapClass out;
  out.sampled = !full;

  std::map<TNode, TNode> image;
  for (const auto& x : sample) {
    TNode y = phi.apply(x);
    if (y.level != phi.level_image(x.level)) {
      out.kind = MapClassKind::Neither;
      out.witness = std::make_pair(x, x);
      return out;
    }
    image.emplace(x, y);
  }

  // monotonicity on comparable sampled pairs: walk each node's ancestor
  // chain and compare against sampled ancestors
  std::uint64_t top_level = 0;
  for (const auto& [x, fx] : image) top_level = std::max(top_level, x.level);
  for (const auto& [x, fx] : image)
    for (std::uint64_t lev = x.level + 1; lev <= top_level; ++lev) {
      TNode a = phi.source().ancestor(x, lev);
      auto it = image.find(a);
      if (it == image.end()) continue;
      if (!(phi.target().ancestor(fx, it->second.level) == it->second)) {
        out.kind = MapClassKind::Neither;
        out.witness = std::make_pair(x, a);
        return out;
      }
    }

  // collision structure
  std::map<TNode, std::vector<TNode>> fibers;
  for (const auto& [x, y] : image) fibers[y].push_back(x);
  bool injective = true;
  for (const auto& [y, xs] : fibers) {
    if (xs.size() < 2) continue;
    injective = false;
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (std::size_t j = i + 1; j < xs.size(); ++j) {
        TNode m = phi.source().meet(xs[i], xs[j]);
        if (m.level > std::max(xs[i].level, xs[j].level) + 1) {
          out.kind = MapClassKind::Neither;
          out.witness = std::make_pair(xs[i], xs[j]);
          return out;
        }
      }
  }

  if (!injective) {
    out.kind = MapClassKind::Immersion;
    return out;
  }
  if (full && !phi.target().is_lazy()) {
    const auto& T = phi.target().explicit_tower();
    std::size_t total = 0;
    for (std::uint64_t l = 0; l <= T.depth(); ++l) total += T.level(l).size();
    if (fibers.size() == total &&
        phi.level_image(phi.source().explicit_tower().depth()) == T.depth() &&
        phi.level_image(0) == 0) {
      out.kind = MapClassKind::Isomorphism;
      return out;
    }
  }
  out.kind = MapClassKind::Embedding;
  return out;
}

MultiMap boundary_multimap(const TowerMap& phi,
                           std::vector<std::string> domain) {
  if (!phi.source().is_pruned() || !phi.target().is_pruned())
    fail_hypothesis("boundary multi-maps need pruned towers");
  bool declared = !domain.empty();
  if (domain.empty()) {
    if (!phi.source().is_lazy()) {
      domain = phi.source().explicit_tower().level(0);
    } else if (phi.source().lazy_tower().boundary()->is_bounded()) {
      for (const auto& p :
           phi.source().lazy_tower().boundary()->enumerate_bounded())
        domain.push_back(SequenceSpace::point_id(p));
    } else {
      fail_input("a sampling domain is required for an unbounded lazy source");
    }
  }
  std::uint64_t f0 = phi.level_image(0);
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& pid : domain) {
    TNode leaf = phi.source().leaf_for_point(pid);
    TNode img = phi.apply(leaf);
    if (f0 == 0) {
      pairs.emplace_back(pid, phi.target().leaf_point_id(img));
    } else if (!phi.target().is_lazy()) {
      for (const auto& b :
           phi.target().explicit_tower().descendants(*img.id, 0))
        pairs.emplace_back(pid, b);
    } else {
      fail_input("positive base level over a lazy target is not observable");
    }
  }
  std::optional<std::vector<std::string>> sdom, tdom;
  bool lazy_unbounded_source =
      phi.source().is_lazy() &&
      !phi.source().lazy_tower().boundary()->is_bounded();
  bool lazy_unbounded_target =
      phi.target().is_lazy() &&
      !phi.target().lazy_tower().boundary()->is_bounded();
  if (declared || lazy_unbounded_source) sdom = domain;
  if (lazy_unbounded_target) {
    std::vector<std::string> t;
    for (const auto& [a, b] : pairs) t.push_back(b);
    tdom = std::move(t);
  }
  return MultiMap(phi.source().boundary(), phi.target().boundary(),
                  std::move(pairs), std::move(sdom), std::move(tdom));
}

TowerMap tower_map_from_table(
    const TowerRef& S, const TowerRef& T,
    const std::vector<std::pair<std::uint64_t, std::uint64_t>>& level_pairs,
    const std::map<std::string, std::string>& mapping) {
  if (S.is_lazy() || T.is_lazy())
    fail_input("node tables describe explicit towers only");
  const auto& ES = S.explicit_tower();
  const auto& ET = T.explicit_tower();
  std::map<std::uint64_t, std::uint64_t> lm;
  for (const auto& [a, b] : level_pairs) {
    if (a > ES.depth() || b > ET.depth())
      fail_input("level map names a level outside the towers");
    if (!lm.emplace(a, b).second)
      fail_input("level map lists a source level twice");
  }
  for (std::uint64_t l = 0; l <= ES.depth(); ++l)
    if (!lm.count(l))
      fail_input("level map must cover every source level");
  std::size_t named = 0;
  for (std::uint64_t l = 0; l <= ES.depth(); ++l) named += ES.level(l).size();
  if (mapping.size() != named)
    fail_input("mapping must name every source node exactly once");
  for (const auto& [a, b] : mapping) {
    if (!ES.has_node(a)) fail_input("unknown source node: " + a);
    if (!ET.has_node(b)) fail_input("unknown target node: " + b);
  }
  auto impl = std::make_shared<TowerMapImpl>();
  impl->kind = TowerMap::Kind::ExplicitTable;
  impl->source = S;
  impl->target = T;
  impl->table = mapping;
  impl->level_pairs = level_pairs;
  std::sort(impl->level_pairs.begin(), impl->level_pairs.end());
  return make_tower_map(std::move(impl));
}

TowerMap build_embedding(
    const TowerRef& S, const TowerRef& T,
    const std::vector<std::pair<std::uint64_t, std::uint64_t>>& level_pairs) {
  auto impl = std::make_shared<TowerMapImpl>();
  impl->source = S;
  impl->target = T;

  if (S.is_lazy() != T.is_lazy())
    fail_input("embedding requires towers of the same flavor");

  if (S.is_lazy()) {
    if (!level_pairs.empty()) {
      for (const auto& [a, b] : level_pairs)
        if (a != b)
          fail_input("lazy embeddings use the identity level map; regroup first");
    }
    const auto& DS = S.lazy_tower();
    const auto& DT = T.lazy_tower();
    if (DT.horizon() && (!DS.horizon() || *DS.horizon() > *DT.horizon()))
      fail_input("target horizon does not cover the source levels");
    if (!DS.horizon() && DS.degrees().tail_is_unbounded_finite() &&
        DT.degrees().tail_is_constant() &&
        DT.degrees().constant_tail_value().is_finite())
      fail_hypothesis(
          "degree inequality eventually fails: unbounded source degrees "
          "over constant finite target degrees");
    std::uint64_t top = std::max(DS.degrees().prefix().size(),
                                 DT.degrees().prefix().size()) +
                        1;
    if (DS.horizon()) top = std::min<std::uint64_t>(top, *DS.horizon());
    for (std::uint64_t k = 1; k <= top; ++k) {
      Cardinal s = DS.level_degree(k), t = DT.level_degree(k);
      if (!(s <= t))
        fail_hypothesis("degree inequality fails at level " +
                        std::to_string(k - 1) + ": Deg(S)=" + s.str() +
                        " > deg(T)=" + t.str());
    }
    impl->kind = TowerMap::Kind::LazyInjection;
    return make_tower_map(std::move(impl));
  }

  const auto& ES = S.explicit_tower();
  const auto& ET = T.explicit_tower();
  if (!ES.is_pruned() || !ET.is_pruned())
    fail_hypothesis("embedding construction needs pruned towers");
  if (level_pairs.size() != ES.depth() + 1)
    fail_input("level map must cover every source level");
  for (std::size_t i = 0; i < level_pairs.size(); ++i) {
    if (level_pairs[i].first != i)
      fail_input("level map must list source levels 0..depth in order");
    if (i && level_pairs[i].second <= level_pairs[i - 1].second)
      fail_input("level map is not monotone injective");
    if (level_pairs[i].second > ET.depth())
      fail_input("level map exceeds the target depth");
  }
  impl->level_pairs = level_pairs;
  auto f = [&](std::uint64_t l) { return level_pairs[l].second; };

  for (std::uint64_t lam = 0; lam + 1 <= ES.depth(); ++lam) {
    Cardinal big = ES.deg_bounds(lam, lam + 1).second;
    Cardinal small = ET.deg_bounds(f(lam), f(lam + 1)).first;
    if (!(big <= small))
      fail_hypothesis("degree inequality fails at level " +
                      std::to_string(lam) + ": Deg(S)=" + big.str() +
                      " > deg(T)=" + small.str());
  }

  // top-down greedy assignment in canonical address order
  impl->table[ES.top()] = ET.level(f(ES.depth())).front();
  for (std::uint64_t lev = ES.depth(); lev >= 1; --lev) {
    for (const auto& pid : ES.level(lev)) {
      const auto& kids = ES.children(pid);
      auto room = ET.descendants(impl->table.at(pid), f(lev - 1));
      if (room.size() < kids.size())
        fail_internal("capacity underrun despite the degree check");
      for (std::size_t i = 0; i < kids.size(); ++i)
        impl->table[kids[i]] = room[i];
    }
  }
  impl->kind = TowerMap::Kind::ExplicitTable;
  return make_tower_map(std::move(impl));
}

namespace {

void require_aleph0_degrees(const LazyTower& tower, const char* side) {
  std::uint64_t top = tower.degrees().prefix().size() + 1;
  if (tower.horizon()) top = *tower.horizon();
  for (std::uint64_t k = 1; k <= top; ++k) {
    Cardinal d = tower.level_degree(k);
    if (d.is_finite())
      fail_hypothesis(std::string("omega <= Deg fails at level ") +
                      std::to_string(k - 1) + " (" + side + " degree " +
                      d.str() +
                      "): finite-degree input; use the decision-only "
                      "classification path");
    if (d != Cardinal::aleph(0))
      fail_hypothesis(std::string("degrees beyond aleph0 at level ") +
                      std::to_string(k - 1) + " (" + side +
                      "): not enumerable; the classification layer handles "
                      "this case symbolically");
  }
  if (!tower.horizon() && tower.degrees().tail_is_unbounded_finite())
    fail_hypothesis(std::string("omega <= Deg fails in the tail (") + side +
                    "): finite-degree input; use the decision-only "
                    "classification path");
}

}  // namespace

TowerMap build_trapezium_immersion(std::shared_ptr<const LazyTower> T,
                                   std::shared_ptr<const LazyTower> S,
                                   const Trapezium& trap,
                                   const LazyTower::Node& w,
                                   std::optional<TrapeziumPin> pin) {
  if (!T || !S) fail_input("null tower");
  if (trap.vertex.level == 0) fail_input("trapezium vertex needs level >= 1");
  std::uint64_t k = trap.vertex.level - 1;
  if (!T->contains(trap.vertex)) fail_input("vertex not in T");
  if (!S->contains(w) || w.level != k)
    fail_input("trapezium target must sit at the plateau level");

  Sel sel;
  switch (trap.plateau.kind) {
    case PlateauSelector::Kind::All: sel = Sel::all(); break;
    case PlateauSelector::Kind::Evens: sel = Sel::evens(); break;
    case PlateauSelector::Kind::Explicit: {
      auto l = trap.plateau.list;
      std::sort(l.begin(), l.end());
      l.erase(std::unique(l.begin(), l.end()), l.end());
      if (l.empty()) fail_input("empty plateau");
      Cardinal d = T->level_degree(k + 1);
      if (d.is_finite())
        for (auto c : l)
          if (c >= d.finite_value())
            fail_input("plateau member exceeds the vertex degree");
      sel = Sel::explicit_list(std::move(l));
      break;
    }
  }

  if (k >= 1) {
    if (!sel.infinite())
      fail_hypothesis("|plateau| = deg(w) fails: the plateau must be "
                      "infinite when k >= 1");
    for (std::uint64_t j = 1; j <= k + 1; ++j)
      if (T->level_degree(j) != Cardinal::aleph(0))
        fail_hypothesis("T-degree at level " + std::to_string(j) +
                        " must be aleph0 for a pinned trapezium");
    for (std::uint64_t j = 1; j <= k; ++j)
      if (S->level_degree(j) != Cardinal::aleph(0))
        fail_hypothesis("S-degree at level " + std::to_string(j) +
                        " must be aleph0 for a pinned trapezium");
  } else if (sel.infinite() && T->level_degree(1).is_finite()) {
    fail_input("infinite plateau selector over a finite degree");
  }

  auto inst = std::make_shared<TrapInstance>();
  inst->k = k;
  inst->vertex = trap.vertex;
  inst->plateau = sel;
  inst->w = w;

  if (pin) {
    if (k == 0) fail_input("a pin needs k >= 1");
    if (pin->inner.kind() != TowerMap::Kind::Trapezium)
      fail_input("pin must wrap a trapezium immersion");
    auto inner_core = TowerMapAccess::impl(pin->inner)->core;
    if (inner_core->T != T || inner_core->S != S)
      fail_input("pinned instance must live over the same towers");
    auto inner = inner_core->root;
    if (inner->k + 1 != k)
      fail_input("pinned instance must sit one level below the plateau");
    if (!(T->parent(inner->vertex) == trap.vertex))
      fail_input("pinned vertex must hang under the trapezium vertex");
    std::uint64_t pc = child_index(inner->vertex);
    if (!sel.contains(pc))
      fail_input("pinned vertex is outside the plateau");
    if (inner->plateau.kind != Sel::Kind::Evens)
      fail_input("pinned instances must select the even children");
    if (!(S->parent(inner->w) == w))
      fail_input("pinned target must hang under w");
    inst->pin =
        TrapInstance::Pin{sel.index_of(pc), child_index(inner->w), inner};
  }

  auto core = std::make_shared<ImmersionCore>();
  core->T = std::move(T);
  core->S = std::move(S);
  core->root = inst;

  auto impl = std::make_shared<TowerMapImpl>();
  impl->kind = TowerMap::Kind::Trapezium;
  impl->source = TowerRef::from_lazy(core->T);
  impl->target = TowerRef::from_lazy(core->S);
  impl->core = std::move(core);
  return make_tower_map(std::move(impl));
}

TowerMap build_immersion(std::shared_ptr<const LazyTower> T,
                         std::shared_ptr<const LazyTower> S) {
  if (!T || !S) fail_input("null tower");
  require_aleph0_degrees(*T, "T");
  require_aleph0_degrees(*S, "S");

  auto core = std::make_shared<ImmersionCore>();
  core->T = std::move(T);
  core->S = std::move(S);
  core->spine_mode = true;

  auto impl = std::make_shared<TowerMapImpl>();
  impl->kind = TowerMap::Kind::LazyImmersion;
  impl->source = TowerRef::from_lazy(core->T);
  impl->target = TowerRef::from_lazy(core->S);
  impl->core = std::move(core);
  return make_tower_map(std::move(impl));
}

TNode preimage_witness(const TowerMap& phi, const TNode& s) {
  if (phi.kind() != TowerMap::Kind::LazyImmersion &&
      phi.kind() != TowerMap::Kind::Trapezium)
    fail_input("preimage witnesses exist for immersion maps only");
  return lazy_tnode(TowerMapAccess::impl(phi)->core->invert(to_lazy(s)));
}

}  // namespace uc
