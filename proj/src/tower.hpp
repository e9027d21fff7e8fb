#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cardinal.hpp"
#include "multimap.hpp"
#include "rational.hpp"
#include "space.hpp"

namespace uc {

struct BallLabel {
  std::vector<std::string> members;
  Rational radius;
};

// wire form of an explicit tower, prior to invariant checking
struct RawTower {
  std::uint64_t depth = 0;
  std::vector<std::vector<std::string>> levels;  // ids per level 0..depth
  std::map<std::string, std::string> up;         // child -> parent
  std::map<std::string, BallLabel> labels;
};

struct TowerReport {
  bool is_tower = false;
  bool is_pruned = false;
  bool is_homogeneous = false;
  std::vector<std::string> problems;
};

class ExplicitTower;
struct SubtowerResult;

// Finite truncation of a tower: levels 0..depth, a single top node, every
// non-top node linked to its node one level above.
class ExplicitTower {
public:
  static TowerReport validate(const RawTower& raw);
  static ExplicitTower create(RawTower raw);  // throws unless is_tower

  std::uint64_t depth() const { return raw_.depth; }
  const RawTower& raw() const { return raw_; }
  const std::vector<std::string>& level(std::uint64_t l) const;
  const std::string& top() const { return raw_.levels[raw_.depth][0]; }
  bool has_node(const std::string& id) const { return level_of_.count(id); }
  std::uint64_t level_of(const std::string& id) const;
  const std::string& parent(const std::string& id) const;
  const std::vector<std::string>& children(const std::string& id) const;
  bool is_pruned() const { return pruned_; }
  bool is_homogeneous() const { return homogeneous_; }
  const std::map<std::string, BallLabel>& labels() const {
    return raw_.labels;
  }

  std::string meet(const std::string& x, const std::string& y) const;
  std::string ancestor(const std::string& x, std::uint64_t level) const;
  Cardinal deg(const std::string& x, std::uint64_t lambda) const;
  std::vector<std::string> descendants(const std::string& x,
                                       std::uint64_t lambda) const;
  std::pair<Cardinal, Cardinal> deg_bounds(std::uint64_t lambda,
                                           std::uint64_t l) const;

  // branches = level-0 nodes (pruned towers); distance = meet level
  std::shared_ptr<const FiniteUltraSpace> boundary_space() const;

  // selected levels, reindexed 0..|L|-1; L must contain 0 and the depth
  SubtowerResult level_subtower(const std::vector<std::uint64_t>& L) const;

private:
  explicit ExplicitTower(RawTower raw);
  RawTower raw_;
  std::map<std::string, std::uint64_t> level_of_;
  std::map<std::string, std::vector<std::string>> children_;
  bool pruned_ = false, homogeneous_ = false;
};

struct SubtowerResult {
  ExplicitTower tower;
  MultiMap boundary_identity;
};

struct CanonicalTowerResult {
  ExplicitTower tower;
  std::map<std::string, std::string> canonical_map;  // point -> level-0 node
};

// Tower of the closed L[i]-balls ordered by inclusion; node ids are
// "<level>:<first member>" with the ball and radius kept as labels.
CanonicalTowerResult canonical_tower(const FiniteUltraSpace& X,
                                     const std::vector<Rational>& L);

// Homogeneous infinite tower driven by a degree sequence: level-k nodes are
// finitely supported tails (x_{k+1}, x_{k+2}, ...), the up-link drops the
// first coordinate. A regrouped tower carries a horizon: the largest level
// whose degree data is meaningful; address arithmetic beyond it is refused.
class LazyTower {
public:
  explicit LazyTower(CardinalSeq degrees,
                     std::optional<std::uint64_t> horizon = std::nullopt);

  const CardinalSeq& degrees() const { return degrees_; }
  std::optional<std::uint64_t> horizon() const { return horizon_; }
  Cardinal level_degree(std::uint64_t k) const;  // degree of level-k nodes

  struct Node {
    std::uint64_t level = 0;
    std::vector<std::uint64_t> tail;  // trailing zeros trimmed
    friend bool operator==(const Node&, const Node&) = default;
    friend auto operator<=>(const Node&, const Node&) = default;
  };

  Node make_node(std::uint64_t level, std::vector<std::uint64_t> tail) const;
  bool contains(const Node& x) const;
  Node parent(const Node& x) const;
  Node child(const Node& x, std::uint64_t index) const;
  Node ancestor(const Node& x, std::uint64_t level) const;
  Node meet(const Node& x, const Node& y) const;
  Cardinal deg(const Node& x, std::uint64_t lambda) const;
  std::pair<Cardinal, Cardinal> deg_bounds(std::uint64_t lambda,
                                           std::uint64_t l) const;

  std::shared_ptr<const SequenceSpace> boundary() const;

  // level subtower in closed form: new level j = old level L[j]; degrees
  // become interval products; the result's horizon is |L|-1
  LazyTower regroup(const std::vector<std::uint64_t>& L) const;

  // all level-k nodes visible in the depth-N window with coordinates < cap
  std::vector<Node> enumerate_level(std::uint64_t k, std::uint64_t N,
                                    std::uint64_t cap) const;

  static std::string node_id(const Node& x);  // "<level>:<tail as point id>"
  // level-0 nodes are boundary points; their ids match the sequence space
  static std::string leaf_point_id(const Node& x);
  Node leaf_for_point(const std::string& point_id) const;

private:
  void check_level(std::uint64_t level) const;
  CardinalSeq degrees_;
  std::optional<std::uint64_t> horizon_;
  mutable std::shared_ptr<const SequenceSpace> boundary_;
};

}  // namespace uc
