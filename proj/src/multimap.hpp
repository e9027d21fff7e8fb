#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rational.hpp"
#include "space.hpp"

namespace uc {

struct ModulusRow {
  Rational eps;
  Rational omega;
};

// Checkable artifact of a coarse embedding/equivalence claim: the relation
// data, totality/surjectivity outcomes and modulus tables over a declared
// scale list, plus the sampled domains the claim ranges over.
struct Certificate {
  std::string kind;  // "embedding" or "equivalence"
  bool total = false;
  std::vector<std::string> uncovered_source;
  std::optional<bool> surjective;
  std::vector<std::string> uncovered_target;
  std::vector<ModulusRow> forward;
  std::vector<ModulusRow> inverse;
  std::vector<std::pair<std::string, std::string>> pairs;
  std::vector<std::string> source_domain;
  std::vector<std::string> target_domain;
  std::map<std::string, std::string> meta;

  bool pass() const {
    return total && (!surjective.has_value() || *surjective);
  }
};

// Relation between two spaces. Stored as an explicit sorted pair set; maps
// of lazy origin carry the sampling domains they were materialized on, and
// every certificate names those domains.
class MultiMap {
public:
  MultiMap(MetricRef source, MetricRef target,
           std::vector<std::pair<std::string, std::string>> pairs,
           std::optional<std::vector<std::string>> source_domain = std::nullopt,
           std::optional<std::vector<std::string>> target_domain = std::nullopt);

  const MetricRef& source() const { return source_; }
  const MetricRef& target() const { return target_; }
  const std::vector<std::pair<std::string, std::string>>& pairs() const {
    return pairs_;
  }
  bool has_declared_source_domain() const {
    return source_domain_.has_value();
  }
  bool has_declared_target_domain() const {
    return target_domain_.has_value();
  }

  // declared domain, else every point (finite spaces), else the points seen
  // in the relation
  std::vector<std::string> effective_source_domain() const;
  std::vector<std::string> effective_target_domain() const;

  std::vector<std::string> image(const std::string& x) const;

  MultiMap inverse() const;

  // omega_Phi(eps) over the source domain, via eps-ball enumeration
  Rational oscillation(const Rational& eps) const;

  Certificate check_coarse_embedding(const std::vector<Rational>& scales) const;
  Certificate check_coarse_equivalence(
      const std::vector<Rational>& scales) const;

private:
  MetricRef source_, target_;
  std::vector<std::pair<std::string, std::string>> pairs_;
  std::optional<std::vector<std::string>> source_domain_, target_domain_;
};

bool same_space(const MetricRef& a, const MetricRef& b);

MultiMap compose(const MultiMap& psi, const MultiMap& phi);

struct MapPairReport {
  MultiMap relation;
  Rational displacement_x;  // sup d_X(x, g(f(x)))
  Rational displacement_y;  // sup d_Y(y, f(g(y)))
};

// graph(f) together with the transposed graph(g), plus the
// displacement suprema
MapPairReport from_map_pair(const std::map<std::string, std::string>& f,
                            const std::map<std::string, std::string>& g,
                            const MetricRef& X, const MetricRef& Y);

}  // namespace uc
