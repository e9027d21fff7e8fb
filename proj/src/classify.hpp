#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cardinal.hpp"
#include "multimap.hpp"
#include "space.hpp"

namespace uc {

// Covering profile of a space: closed form over a degree sequence, or
// literal tables over a finite space's realized scales. Degree backings are
// isometrically homogeneous, so their min and sup columns coincide and
// cov_m^n is the interval product of degrees over (m, n].
class CovProfile {
 public:
  static CovProfile from_degrees(CardinalSeq degrees);
  static CovProfile from_space(std::shared_ptr<const FiniteUltraSpace> space);

  bool degree_backed() const { return degrees_.has_value(); }
  const CardinalSeq& degrees() const;
  const FiniteUltraSpace& space() const;
  std::shared_ptr<const FiniteUltraSpace> space_ptr() const;

  // degree backing, levels m < n
  Cardinal interval_cov(std::uint64_t m, std::uint64_t n) const;
  // finite backing, indices into realized_scales()
  Cardinal min_cov(std::size_t i, std::size_t j) const;
  Cardinal sup_cov(std::size_t i, std::size_t j) const;

 private:
  CovProfile() = default;
  std::optional<CardinalSeq> degrees_;
  std::shared_ptr<const FiniteUltraSpace> space_;
};

struct InvariantPair {
  Cardinal flat = Cardinal::finite(0);
  Cardinal sharp = Cardinal::finite(0);
  // least scale index attaining the outer min of sharp (for degree backings
  // flat attains at the same index)
  std::uint64_t witness_eps = 0;
};

// flat = min_e sup_d (min_x cov_e^d(x))+, sharp likewise with sup_x.
// Rejects the empty space, which is classified as its own class without
// evaluating the formulas.
InvariantPair invariants(const CovProfile& profile);

struct LevelSelection {
  std::vector<std::uint64_t> E;  // source levels, consecutive or searched
  std::vector<std::uint64_t> D;  // target levels
};

// One-sided chain: Deg over each E-step of X is at most deg over the paired
// D-step of Y. E advances one level per step from the sharp witness; each
// D-step is the least level satisfying the bound. Levels stay within
// witness + depth; steps stop when the next one no longer fits, and a
// selection with no steps at all is an error (an exhausted search is
// reported as a hypothesis violation when sharp(X) <= flat(Y) fails
// symbolically, otherwise as insufficient depth).
LevelSelection select_levels_embedding(const CovProfile& X,
                                       const CovProfile& Y,
                                       std::uint64_t depth);

// Interleaved chain: X-step(n) <= Y-step(n) <= X-step(n+1). When the shared
// invariant is at least Aleph(1) every step is additionally forced up to an
// infinite interval product, which makes the grouped towers
// omega-enumerable.
LevelSelection select_levels_equivalence(const CovProfile& X,
                                         const CovProfile& Y,
                                         std::uint64_t depth);

enum class Relation { Equivalent, EmbedsInto, NotEquivalent, UndecidedHere };
std::string relation_str(Relation r);

struct Verdict {
  Relation relation = Relation::UndecidedHere;
  bool constructive = false;
  std::optional<Certificate> certificate;
  std::string citation;
  std::optional<InvariantPair> x_invariants;
  std::optional<InvariantPair> y_invariants;
};

// Pipeline input: a degree sequence (group-chain space) or a finite space.
struct SpaceSpec {
  std::optional<CardinalSeq> degrees;
  std::shared_ptr<const FiniteUltraSpace> finite;

  static SpaceSpec from_degrees(CardinalSeq d);
  static SpaceSpec from_finite(std::shared_ptr<const FiniteUltraSpace> s);
  bool degree_backed() const { return degrees.has_value(); }
  CovProfile profile() const;
  MetricRef metric() const;
};

// Positive-only: embeds when sharp(X) <= flat(Y) with a constructive
// certificate, otherwise undecided-here. Bounded or empty X embeds
// trivially.
Verdict coarse_embedding_pipeline(const SpaceSpec& X, const SpaceSpec& Y,
                                  std::uint64_t depth, std::uint64_t seed);

// Equal invariants split by the common value kappa: bounded/empty classes
// get a trivial certificate, kappa = Aleph(0) is decision-only citing
// "[BZ] Thm 5", kappa = Aleph(1) builds a constructive certificate through
// a surjective tower immersion, larger kappa is symbolic-only. Unequal
// invariants yield undecided-here.
Verdict coarse_equivalence_pipeline(const SpaceSpec& X, const SpaceSpec& Y,
                                    std::uint64_t depth, std::uint64_t seed);

struct HomogeneousModel {
  CardinalSeq degrees;
  InvariantPair invariants;
};

// Canonical group-chain model with invariants (kappa, kappa), built on
// cofinal_ladder(kappa). Values of kappa no sequence space attains are
// rejected.
HomogeneousModel homogeneous_model(const Cardinal& kappa);

// Verdict for two homogeneous specs: equivalent iff the sharp invariants
// agree (delegating to the equivalence pipeline for certificates), else
// not-equivalent. Inhomogeneous finite inputs are rejected.
Verdict classify_pair(const SpaceSpec& X, const SpaceSpec& Y,
                      std::uint64_t depth, std::uint64_t seed);

struct VerifyReport {
  bool accepted = false;
  std::string failure;  // names the failing pair when rejected
  Certificate recomputed;
};

// Re-checks a claimed certificate against the two spaces it relates: the
// relation is rebuilt from the claimed pairs and domains, its moduli are
// recomputed over the given scales (default: the claimed eps column), and
// the claim is rejected if totality/surjectivity fail or any recomputed
// modulus exceeds the claimed one.
VerifyReport verify_certificate(const Certificate& claimed,
                                const SpaceSpec& X, const SpaceSpec& Y,
                                std::vector<Rational> scales = {});

}  // namespace uc
