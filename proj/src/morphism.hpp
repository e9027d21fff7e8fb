#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "multimap.hpp"
#include "pairing.hpp"
#include "tower.hpp"

namespace uc {

// Node of either tower flavor: explicit nodes carry their id, lazy nodes
// their tail address.
struct TNode {
  std::uint64_t level = 0;
  std::optional<std::string> id;
  std::vector<std::uint64_t> tail;

  static TNode explicit_node(std::uint64_t level, std::string id) {
    return {level, std::move(id), {}};
  }
  static TNode lazy_node(std::uint64_t level, std::vector<std::uint64_t> tail) {
    return {level, std::nullopt, std::move(tail)};
  }
  bool is_lazy() const { return !id.has_value(); }

  friend bool operator==(const TNode&, const TNode&) = default;
  friend auto operator<=>(const TNode&, const TNode&) = default;
};

// Uniform handle over the two tower flavors.
class TowerRef {
public:
  static TowerRef from_explicit(std::shared_ptr<const ExplicitTower> t);
  static TowerRef from_lazy(std::shared_ptr<const LazyTower> t);

  bool is_lazy() const { return lazy_ != nullptr; }
  const ExplicitTower& explicit_tower() const;
  const LazyTower& lazy_tower() const;
  std::shared_ptr<const ExplicitTower> explicit_ptr() const {
    return explicit_;
  }
  std::shared_ptr<const LazyTower> lazy_ptr() const { return lazy_; }

  bool contains(const TNode& x) const;
  TNode parent(const TNode& x) const;
  TNode ancestor(const TNode& x, std::uint64_t level) const;
  TNode meet(const TNode& x, const TNode& y) const;
  Cardinal node_deg(const TNode& x, std::uint64_t lambda) const;
  bool is_pruned() const;

  std::string node_id(const TNode& x) const;
  std::string leaf_point_id(const TNode& x) const;  // boundary currency
  TNode leaf_for_point(const std::string& point_id) const;
  MetricRef boundary() const;

private:
  std::shared_ptr<const ExplicitTower> explicit_;
  std::shared_ptr<const LazyTower> lazy_;
};

struct TowerMapImpl;
struct TowerMapAccess;

// Monotone level-preserving map between towers. Explicit maps hold a full
// table; lazy maps evaluate on demand (the immersion memoizes, and deeper
// evaluation never revises earlier results).
class TowerMap {
public:
  enum class Kind { ExplicitTable, LazyInjection, LazyImmersion, Trapezium };

  ~TowerMap();
  TowerMap(const TowerMap&);
  TowerMap& operator=(const TowerMap&);

  Kind kind() const;
  const TowerRef& source() const;
  const TowerRef& target() const;
  std::uint64_t level_image(std::uint64_t l) const;
  TNode apply(const TNode& x) const;
  // evaluated fragment (lazy kinds) or the full table, sorted by source node
  std::vector<std::pair<TNode, TNode>> evaluated_pairs() const;

private:
  friend TowerMap make_tower_map(std::shared_ptr<TowerMapImpl> impl);
  friend struct TowerMapAccess;
  explicit TowerMap(std::shared_ptr<TowerMapImpl> impl);
  std::shared_ptr<TowerMapImpl> impl_;
};

enum class MapClassKind { Isomorphism, Embedding, Immersion, Neither };

struct MapClass {
  MapClassKind kind = MapClassKind::Neither;
  bool sampled = false;  // verdict ranges over a sample, not the whole tower
  std::optional<std::pair<TNode, TNode>> witness;  // for Neither
};

// Checks monotonicity + level preservation, then injectivity / bijectivity /
// almost-injectivity on the sample. Explicit sources default to all nodes.
MapClass classify_map(const TowerMap& phi, std::vector<TNode> sample = {});

// Induced boundary multi-map on the given leaf points (ids of the boundary
// spaces). Empty domain means every leaf, which requires an enumerable
// source boundary.
MultiMap boundary_multimap(const TowerMap& phi,
                           std::vector<std::string> domain = {});

// Wire-level explicit map: a full node table plus its level map. Existence
// of the named nodes is checked here; the map laws (monotonicity, level
// preservation, injectivity grades) are classify_map's job.
TowerMap tower_map_from_table(
    const TowerRef& S, const TowerRef& T,
    const std::vector<std::pair<std::uint64_t, std::uint64_t>>& level_pairs,
    const std::map<std::string, std::string>& mapping);

// Greedy level-by-level embedding. Explicit towers take a strictly increasing
// level map as (source level, target level) pairs covering all source
// levels; lazy towers use the identity level map (pass an empty list).
TowerMap build_embedding(
    const TowerRef& S, const TowerRef& T,
    const std::vector<std::pair<std::uint64_t, std::uint64_t>>& level_pairs);

// plateau selector inside the successor set of a vertex
struct PlateauSelector {
  enum class Kind { All, Evens, Explicit };
  Kind kind = Kind::All;
  std::vector<std::uint64_t> list;  // Explicit

  static PlateauSelector all() { return {Kind::All, {}}; }
  static PlateauSelector evens() { return {Kind::Evens, {}}; }
  static PlateauSelector explicit_list(std::vector<std::uint64_t> l) {
    return {Kind::Explicit, std::move(l)};
  }
};

struct Trapezium {
  LazyTower::Node vertex;  // level k+1
  PlateauSelector plateau;
};

struct TrapeziumPin {
  TowerMap inner;  // a trapezium immersion over the pinned plateau
};

// Trapezium instance: an admissible immersion of the lower cone of the
// plateau onto the lower cone of w, optionally pinned to extend `inner`.
TowerMap build_trapezium_immersion(std::shared_ptr<const LazyTower> T,
                                   std::shared_ptr<const LazyTower> S,
                                   const Trapezium& trap,
                                   const LazyTower::Node& w,
                                   std::optional<TrapeziumPin> pin);

// Surjective immersion along the spine branches; identity level
// map; requires every degree of both towers to be Aleph(0).
TowerMap build_immersion(std::shared_ptr<const LazyTower> T,
                         std::shared_ptr<const LazyTower> S);

// t with phi(t) = s, deterministic; defined for immersion/trapezium maps
TNode preimage_witness(const TowerMap& phi, const TNode& s);

}  // namespace uc
