#include "tower.hpp"

#include <algorithm>
#include <set>

#include "error.hpp"

namespace uc {

TowerReport ExplicitTower::validate(const RawTower& raw) {
  TowerReport r;
  if (raw.levels.size() != raw.depth + 1) {
    r.problems.push_back("expected " + std::to_string(raw.depth + 1) +
                         " level lists, got " +
                         std::to_string(raw.levels.size()));
    return r;
  }
  std::map<std::string, std::uint64_t> level_of;
  for (std::uint64_t l = 0; l <= raw.depth; ++l) {
    if (raw.levels[l].empty())
      r.problems.push_back("empty level " + std::to_string(l));
    for (const auto& id : raw.levels[l]) {
      if (!level_of.emplace(id, l).second)
        r.problems.push_back("duplicate node id: " + id);
    }
  }
  if (raw.levels.back().size() != 1)
    r.problems.push_back("level " + std::to_string(raw.depth) + " has " +
                         std::to_string(raw.levels.back().size()) +
                         " nodes, expected a single top");
  for (const auto& [child, parent] : raw.up) {
    auto c = level_of.find(child);
    auto p = level_of.find(parent);
    if (c == level_of.end()) {
      r.problems.push_back("up-link from unknown node: " + child);
      continue;
    }
    if (p == level_of.end()) {
      r.problems.push_back("up-link to unknown node: " + parent);
      continue;
    }
    if (p->second != c->second + 1)
      r.problems.push_back("up-link " + child + " -> " + parent +
                           " does not rise exactly one level");
  }
  for (const auto& [id, l] : level_of) {
    if (l == raw.depth) {
      if (raw.up.count(id))
        r.problems.push_back("top node " + id + " has an up-link");
    } else if (!raw.up.count(id)) {
      r.problems.push_back("non-top node " + id + " lacks an up-link");
    }
  }
  for (const auto& [id, label] : raw.labels)
    if (!level_of.count(id))
      r.problems.push_back("label on unknown node: " + id);
  r.is_tower = r.problems.empty();
  if (!r.is_tower) return r;

  std::map<std::string, std::uint64_t> child_count;
  for (const auto& [child, parent] : raw.up) ++child_count[parent];
  r.is_pruned = true;
  for (std::uint64_t l = 1; l <= raw.depth; ++l)
    for (const auto& id : raw.levels[l])
      if (!child_count.count(id)) r.is_pruned = false;
  r.is_homogeneous = true;
  for (std::uint64_t l = 1; l <= raw.depth; ++l) {
    std::uint64_t first = child_count[raw.levels[l][0]];
    for (const auto& id : raw.levels[l])
      if (child_count[id] != first) r.is_homogeneous = false;
  }
  return r;
}

ExplicitTower ExplicitTower::create(RawTower raw) {
  auto report = validate(raw);
  if (!report.is_tower)
    fail_input("not a tower: " + report.problems.front());
  return ExplicitTower(std::move(raw));
}

ExplicitTower::ExplicitTower(RawTower raw) : raw_(std::move(raw)) {
  for (std::uint64_t l = 0; l <= raw_.depth; ++l)
    for (const auto& id : raw_.levels[l]) level_of_[id] = l;
  // children kept in level-list order: the canonical address order used by
  // the greedy constructions
  for (std::uint64_t l = 0; l + 1 <= raw_.depth; ++l)
    for (const auto& id : raw_.levels[l])
      children_[raw_.up.at(id)].push_back(id);
  auto report = validate(raw_);
  pruned_ = report.is_pruned;
  homogeneous_ = report.is_homogeneous;
}

const std::vector<std::string>& ExplicitTower::level(std::uint64_t l) const {
  if (l > raw_.depth) fail_input("level beyond depth");
  return raw_.levels[l];
}

std::uint64_t ExplicitTower::level_of(const std::string& id) const {
  auto it = level_of_.find(id);
  if (it == level_of_.end()) fail_input("unknown node: " + id);
  return it->second;
}

const std::string& ExplicitTower::parent(const std::string& id) const {
  auto it = raw_.up.find(id);
  if (it == raw_.up.end()) fail_input("node has no parent: " + id);
  return it->second;
}

const std::vector<std::string>& ExplicitTower::children(
    const std::string& id) const {
  static const std::vector<std::string> none;
  level_of(id);
  auto it = children_.find(id);
  return it == children_.end() ? none : it->second;
}

std::string ExplicitTower::ancestor(const std::string& x,
                                    std::uint64_t level) const {
  std::uint64_t l = level_of(x);
  if (level < l) fail_input("ancestor level below the node");
  if (level > raw_.depth) fail_input("ancestor level beyond depth");
  std::string cur = x;
  while (l < level) {
    cur = parent(cur);
    ++l;
  }
  return cur;
}

std::string ExplicitTower::meet(const std::string& x,
                                const std::string& y) const {
  std::uint64_t lx = level_of(x), ly = level_of(y);
  std::string a = x, b = y;
  while (lx < ly) {
    a = parent(a);
    ++lx;
  }
  while (ly < lx) {
    b = parent(b);
    ++ly;
  }
  while (a != b) {
    a = parent(a);
    b = parent(b);
  }
  return a;
}

std::vector<std::string> ExplicitTower::descendants(
    const std::string& x, std::uint64_t lambda) const {
  std::uint64_t l = level_of(x);
  if (lambda > l) fail_input("descendant level above the node");
  std::vector<std::string> frontier{x};
  for (std::uint64_t cur = l; cur > lambda; --cur) {
    std::vector<std::string> next;
    for (const auto& id : frontier)
      for (const auto& c : children(id)) next.push_back(c);
    frontier = std::move(next);
  }
  return frontier;
}

Cardinal ExplicitTower::deg(const std::string& x, std::uint64_t lambda) const {
  return Cardinal::finite(descendants(x, lambda).size());
}

std::pair<Cardinal, Cardinal> ExplicitTower::deg_bounds(std::uint64_t lambda,
                                                        std::uint64_t l) const {
  if (lambda > l) fail_input("deg_bounds needs lambda <= l");
  if (l > raw_.depth) fail_input("level beyond depth");
  if (raw_.levels[l].empty()) fail_input("empty level");
  std::optional<std::uint64_t> lo, hi;
  for (const auto& id : raw_.levels[l]) {
    std::uint64_t d = descendants(id, lambda).size();
    lo = lo ? std::min(*lo, d) : d;
    hi = hi ? std::max(*hi, d) : d;
  }
  return {Cardinal::finite(*lo), Cardinal::finite(*hi)};
}

std::shared_ptr<const FiniteUltraSpace> ExplicitTower::boundary_space() const {
  if (!pruned_)
    fail_hypothesis("boundary of an unpruned tower is not identified with level 0");
  const auto& leaves = raw_.levels[0];
  std::vector<std::vector<Rational>> dist(
      leaves.size(), std::vector<Rational>(leaves.size(), Rational(0)));
  for (std::size_t i = 0; i < leaves.size(); ++i)
    for (std::size_t j = i + 1; j < leaves.size(); ++j) {
      Rational d(static_cast<std::int64_t>(level_of(meet(leaves[i], leaves[j]))));
      dist[i][j] = dist[j][i] = d;
    }
  return std::make_shared<const FiniteUltraSpace>(
      FiniteUltraSpace::create(leaves, std::move(dist)));
}

SubtowerResult ExplicitTower::level_subtower(
    const std::vector<std::uint64_t>& L) const {
  if (L.empty() || L.front() != 0)
    fail_input("level subtower must keep level 0");
  for (std::size_t i = 1; i < L.size(); ++i)
    if (L[i] <= L[i - 1]) fail_input("levels must be strictly increasing");
  if (L.back() != raw_.depth)
    fail_input("level selection is not cofinal (must reach the top)");

  RawTower sub;
  sub.depth = L.size() - 1;
  sub.levels.resize(L.size());
  for (std::size_t j = 0; j < L.size(); ++j) {
    sub.levels[j] = raw_.levels[L[j]];
    for (const auto& id : sub.levels[j]) {
      if (j + 1 < L.size()) sub.up[id] = ancestor(id, L[j + 1]);
      auto lab = raw_.labels.find(id);
      if (lab != raw_.labels.end()) sub.labels[id] = lab->second;
    }
  }
  ExplicitTower tower = ExplicitTower::create(std::move(sub));

  auto src = boundary_space();
  auto dst = tower.boundary_space();
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& id : raw_.levels[0]) pairs.emplace_back(id, id);
  MultiMap identity(MetricRef::finite(src), MetricRef::finite(dst),
                    std::move(pairs));
  return {std::move(tower), std::move(identity)};
}

CanonicalTowerResult canonical_tower(const FiniteUltraSpace& X,
                                     const std::vector<Rational>& L) {
  if (X.size() == 0) fail_input("empty space has no canonical tower");
  if (L.empty()) fail_input("scale list is empty");
  for (std::size_t i = 0; i < L.size(); ++i) {
    if (L[i] <= Rational(0)) fail_input("scales must be positive");
    if (i && L[i] <= L[i - 1]) fail_input("scales must be strictly increasing");
  }
  if (L.back() < X.diameter())
    fail_input("max scale below the diameter: the truncation would have no top");

  // rep[i][p] = least point index in the L[i]-ball of p
  std::vector<std::vector<std::size_t>> rep(L.size(),
                                            std::vector<std::size_t>(X.size()));
  for (std::size_t i = 0; i < L.size(); ++i)
    for (std::size_t p = 0; p < X.size(); ++p) {
      std::size_t r = p;
      for (std::size_t q = 0; q < p; ++q)
        if (X.dist(p, q) <= L[i]) {
          r = q;
          break;
        }
      rep[i][p] = r;
    }

  auto node_id = [&](std::size_t level, std::size_t r) {
    return std::to_string(level) + ":" + X.point(r);
  };

  RawTower raw;
  raw.depth = L.size() - 1;
  raw.levels.resize(L.size());
  for (std::size_t i = 0; i < L.size(); ++i) {
    std::set<std::size_t> reps(rep[i].begin(), rep[i].end());
    for (std::size_t r : reps) {
      std::string id = node_id(i, r);
      raw.levels[i].push_back(id);
      BallLabel label;
      label.radius = L[i];
      for (std::size_t p = 0; p < X.size(); ++p)
        if (rep[i][p] == r) label.members.push_back(X.point(p));
      raw.labels[id] = std::move(label);
      if (i + 1 < L.size()) raw.up[id] = node_id(i + 1, rep[i + 1][r]);
    }
  }

  CanonicalTowerResult out{ExplicitTower::create(std::move(raw)), {}};
  for (std::size_t p = 0; p < X.size(); ++p)
    out.canonical_map[X.point(p)] = node_id(0, rep[0][p]);
  return out;
}

LazyTower::LazyTower(CardinalSeq degrees, std::optional<std::uint64_t> horizon)
    : degrees_(std::move(degrees)), horizon_(horizon) {
  for (std::size_t i = 0; i < degrees_.prefix().size(); ++i)
    if (degrees_.prefix()[i] == Cardinal::finite(0))
      fail_input("degree 0 at level " + std::to_string(i + 1));
  if (degrees_.tail_is_constant() &&
      degrees_.constant_tail_value() == Cardinal::finite(0))
    fail_input("degree 0 in the tail");
  boundary_ = std::make_shared<const SequenceSpace>(degrees_);
}

void LazyTower::check_level(std::uint64_t level) const {
  if (horizon_ && level > *horizon_)
    fail_input("level " + std::to_string(level) +
               " beyond the materialized horizon " + std::to_string(*horizon_));
}

Cardinal LazyTower::level_degree(std::uint64_t k) const {
  if (k == 0) fail_input("level degrees are defined for k >= 1");
  check_level(k);
  return degrees_.at(k - 1);
}

LazyTower::Node LazyTower::make_node(std::uint64_t level,
                                     std::vector<std::uint64_t> tail) const {
  while (!tail.empty() && tail.back() == 0) tail.pop_back();
  check_level(level + tail.size());
  Node x{level, std::move(tail)};
  if (!contains(x)) fail_input("node coordinates exceed the degree bounds");
  return x;
}

bool LazyTower::contains(const Node& x) const {
  if (horizon_ && x.level + x.tail.size() > *horizon_) return false;
  if (!x.tail.empty() && x.tail.back() == 0) return false;  // not trimmed
  for (std::size_t i = 0; i < x.tail.size(); ++i) {
    Cardinal d = degrees_.at(x.level + i);  // degree of level x.level+i+1
    if (d.is_finite() && x.tail[i] >= d.finite_value()) return false;
  }
  return true;
}

LazyTower::Node LazyTower::parent(const Node& x) const {
  check_level(x.level + 1);
  std::vector<std::uint64_t> t(x.tail.begin() + (x.tail.empty() ? 0 : 1),
                               x.tail.end());
  if (!x.tail.empty()) return Node{x.level + 1, std::move(t)};
  return Node{x.level + 1, {}};
}

LazyTower::Node LazyTower::child(const Node& x, std::uint64_t index) const {
  if (x.level == 0) fail_input("level-0 nodes have no children");
  Cardinal d = level_degree(x.level);
  if (d.is_finite() && index >= d.finite_value())
    fail_input("child index exceeds the degree");
  std::vector<std::uint64_t> t;
  t.reserve(x.tail.size() + 1);
  t.push_back(index);
  t.insert(t.end(), x.tail.begin(), x.tail.end());
  return make_node(x.level - 1, std::move(t));
}

LazyTower::Node LazyTower::ancestor(const Node& x, std::uint64_t level) const {
  if (level < x.level) fail_input("ancestor level below the node");
  check_level(level);
  std::uint64_t drop = level - x.level;
  if (drop >= x.tail.size()) return Node{level, {}};
  return Node{level, {x.tail.begin() + drop, x.tail.end()}};
}

LazyTower::Node LazyTower::meet(const Node& x, const Node& y) const {
  std::uint64_t base = std::max(x.level, y.level);
  Node a = ancestor(x, base), b = ancestor(y, base);
  std::size_t top = std::max(a.tail.size(), b.tail.size());
  std::size_t differ = 0;
  bool equal = true;
  for (std::size_t i = 0; i < top; ++i) {
    std::uint64_t av = i < a.tail.size() ? a.tail[i] : 0;
    std::uint64_t bv = i < b.tail.size() ? b.tail[i] : 0;
    if (av != bv) {
      equal = false;
      differ = i;
    }
  }
  if (equal) return a;
  return ancestor(a, base + differ + 1);
}

Cardinal LazyTower::deg(const Node& x, std::uint64_t lambda) const {
  if (lambda > x.level) fail_input("deg needs lambda <= lev(x)");
  Cardinal d = Cardinal::finite(1);
  for (std::uint64_t k = lambda + 1; k <= x.level; ++k)
    d = product(d, level_degree(k));
  return d;
}

std::pair<Cardinal, Cardinal> LazyTower::deg_bounds(std::uint64_t lambda,
                                                    std::uint64_t l) const {
  if (lambda > l) fail_input("deg_bounds needs lambda <= l");
  check_level(l);
  Cardinal d = Cardinal::finite(1);
  for (std::uint64_t k = lambda + 1; k <= l; ++k)
    d = product(d, level_degree(k));
  return {d, d};  // homogeneous by construction
}

std::shared_ptr<const SequenceSpace> LazyTower::boundary() const {
  return boundary_;
}

LazyTower LazyTower::regroup(const std::vector<std::uint64_t>& L) const {
  if (L.size() < 2 || L.front() != 0)
    fail_input("regroup needs levels starting at 0 with at least one step");
  for (std::size_t i = 1; i < L.size(); ++i)
    if (L[i] <= L[i - 1]) fail_input("levels must be strictly increasing");
  check_level(L.back());
  std::vector<Cardinal> prefix;
  for (std::size_t j = 1; j < L.size(); ++j) {
    Cardinal d = Cardinal::finite(1);
    for (std::uint64_t k = L[j - 1] + 1; k <= L[j]; ++k)
      d = product(d, level_degree(k));
    prefix.push_back(d);
  }
  Cardinal tail = prefix.back();
  std::uint64_t horizon = L.size() - 1;
  return LazyTower(CardinalSeq(std::move(prefix),
                               CardinalSeq::ConstantTail{tail}),
                   horizon);
}

std::vector<LazyTower::Node> LazyTower::enumerate_level(std::uint64_t k,
                                                        std::uint64_t N,
                                                        std::uint64_t cap) const {
  if (k > N) fail_input("enumerate_level needs k <= N");
  if (cap == 0) fail_input("cap must be >= 1");
  check_level(N);
  std::vector<std::uint64_t> widths;
  for (std::uint64_t j = k + 1; j <= N; ++j) {
    Cardinal d = level_degree(j);
    widths.push_back(d.is_finite()
                         ? std::min<std::uint64_t>(cap, d.finite_value())
                         : cap);
  }
  std::vector<std::vector<std::uint64_t>> tails{{}};
  for (std::size_t i = widths.size(); i-- > 0;) {
    // build from the last coordinate towards the first so the output is
    // sorted lexicographically
    std::vector<std::vector<std::uint64_t>> next;
    next.reserve(tails.size() * widths[i]);
    for (std::uint64_t v = 0; v < widths[i]; ++v)
      for (const auto& t : tails) {
        std::vector<std::uint64_t> u;
        u.reserve(t.size() + 1);
        u.push_back(v);
        u.insert(u.end(), t.begin(), t.end());
        next.push_back(std::move(u));
      }
    tails = std::move(next);
  }
  std::sort(tails.begin(), tails.end());
  std::vector<Node> out;
  out.reserve(tails.size());
  for (auto& t : tails) out.push_back(make_node(k, std::move(t)));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string LazyTower::node_id(const Node& x) {
  return std::to_string(x.level) + ":" + SequenceSpace::point_id(x.tail);
}

std::string LazyTower::leaf_point_id(const Node& x) {
  if (x.level != 0) fail_input("not a leaf node");
  return SequenceSpace::point_id(x.tail);
}

LazyTower::Node LazyTower::leaf_for_point(const std::string& point_id) const {
  return make_node(0, SequenceSpace::parse_point(point_id));
}

}  // namespace uc
