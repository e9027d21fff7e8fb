#include "multimap.hpp"

#include <algorithm>
#include <set>

#include "error.hpp"

namespace uc {

namespace {

std::vector<std::string> sorted_unique(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

Rational diameter_of(const MetricRef& space,
                     const std::vector<std::string>& pts) {
  Rational d(0);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      d = std::max(d, space.distance(pts[i], pts[j]));
  return d;
}

}  // namespace

MultiMap::MultiMap(MetricRef source, MetricRef target,
                   std::vector<std::pair<std::string, std::string>> pairs,
                   std::optional<std::vector<std::string>> source_domain,
                   std::optional<std::vector<std::string>> target_domain)
    : source_(std::move(source)),
      target_(std::move(target)),
      pairs_(std::move(pairs)),
      source_domain_(std::move(source_domain)),
      target_domain_(std::move(target_domain)) {
  std::sort(pairs_.begin(), pairs_.end());
  pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
  for (const auto& [x, y] : pairs_) {
    if (!source_.contains(x)) fail_input("pair source not in space: " + x);
    if (!target_.contains(y)) fail_input("pair target not in space: " + y);
  }
  if (source_domain_) {
    *source_domain_ = sorted_unique(std::move(*source_domain_));
    for (const auto& x : *source_domain_)
      if (!source_.contains(x)) fail_input("domain point not in space: " + x);
  }
  if (target_domain_) {
    *target_domain_ = sorted_unique(std::move(*target_domain_));
    for (const auto& y : *target_domain_)
      if (!target_.contains(y)) fail_input("domain point not in space: " + y);
  }
}

std::vector<std::string> MultiMap::effective_source_domain() const {
  if (source_domain_) return *source_domain_;
  if (source_.is_finite() ||
      (!source_.is_finite() && source_.sequence_space().is_bounded()))
    return sorted_unique(source_.all_points());
  std::vector<std::string> seen;
  for (const auto& [x, y] : pairs_) seen.push_back(x);
  return sorted_unique(std::move(seen));
}

std::vector<std::string> MultiMap::effective_target_domain() const {
  if (target_domain_) return *target_domain_;
  if (target_.is_finite() ||
      (!target_.is_finite() && target_.sequence_space().is_bounded()))
    return sorted_unique(target_.all_points());
  std::vector<std::string> seen;
  for (const auto& [x, y] : pairs_) seen.push_back(y);
  return sorted_unique(std::move(seen));
}

std::vector<std::string> MultiMap::image(const std::string& x) const {
  std::vector<std::string> out;
  for (const auto& [a, b] : pairs_)
    if (a == x) out.push_back(b);
  return sorted_unique(std::move(out));
}

MultiMap MultiMap::inverse() const {
  std::vector<std::pair<std::string, std::string>> flipped;
  flipped.reserve(pairs_.size());
  for (const auto& [x, y] : pairs_) flipped.emplace_back(y, x);
  return MultiMap(target_, source_, std::move(flipped), target_domain_,
                  source_domain_);
}

Rational MultiMap::oscillation(const Rational& eps) const {
  if (eps < Rational(0)) fail_input("negative scale in oscillation");
  auto domain = effective_source_domain();
  // group the domain into eps-balls; every set of diameter <= eps lies in
  // one of them (ball dichotomy), and images are monotone under inclusion
  std::vector<bool> used(domain.size(), false);
  Rational sup(0);
  for (std::size_t i = 0; i < domain.size(); ++i) {
    if (used[i]) continue;
    std::vector<std::string> members;
    for (std::size_t j = i; j < domain.size(); ++j) {
      if (used[j]) continue;
      if (source_.distance(domain[i], domain[j]) <= eps) {
        used[j] = true;
        members.push_back(domain[j]);
      }
    }
    std::vector<std::string> img;
    for (const auto& m : members)
      for (const auto& y : image(m)) img.push_back(y);
    sup = std::max(sup, diameter_of(target_, sorted_unique(std::move(img))));
  }
  return sup;
}

Certificate MultiMap::check_coarse_embedding(
    const std::vector<Rational>& scales) const {
  Certificate cert;
  cert.kind = "embedding";
  cert.pairs = pairs_;
  cert.source_domain = effective_source_domain();
  cert.target_domain = effective_target_domain();

  std::set<std::string> with_image;
  for (const auto& [x, y] : pairs_) with_image.insert(x);
  for (const auto& x : cert.source_domain)
    if (!with_image.count(x)) cert.uncovered_source.push_back(x);
  cert.total = cert.uncovered_source.empty();

  MultiMap inv = inverse();
  for (const auto& s : scales) {
    cert.forward.push_back({s, oscillation(s)});
    cert.inverse.push_back({s, inv.oscillation(s)});
  }
  return cert;
}

Certificate MultiMap::check_coarse_equivalence(
    const std::vector<Rational>& scales) const {
  Certificate cert = check_coarse_embedding(scales);
  cert.kind = "equivalence";
  std::set<std::string> hit;
  for (const auto& [x, y] : pairs_) hit.insert(y);
  for (const auto& y : cert.target_domain)
    if (!hit.count(y)) cert.uncovered_target.push_back(y);
  cert.surjective = cert.uncovered_target.empty();
  return cert;
}

bool same_space(const MetricRef& a, const MetricRef& b) {
  if (a.is_finite() != b.is_finite()) return false;
  if (a.is_finite()) {
    if (a.finite_ptr() == b.finite_ptr()) return true;
    const auto& A = a.finite_space();
    const auto& B = b.finite_space();
    if (A.points() != B.points()) return false;
    for (std::size_t i = 0; i < A.size(); ++i)
      for (std::size_t j = 0; j < A.size(); ++j)
        if (A.dist(i, j) != B.dist(i, j)) return false;
    return true;
  }
  if (a.sequence_ptr() == b.sequence_ptr()) return true;
  return a.sequence_space().degrees() == b.sequence_space().degrees();
}

MultiMap compose(const MultiMap& psi, const MultiMap& phi) {
  if (!same_space(phi.target(), psi.source()))
    fail_input("compose: inner spaces do not match");
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [x, y] : phi.pairs())
    for (const auto& z : psi.image(y)) out.emplace_back(x, z);
  std::optional<std::vector<std::string>> sdom;
  if (phi.has_declared_source_domain()) sdom = phi.effective_source_domain();
  std::optional<std::vector<std::string>> tdom;
  if (psi.has_declared_target_domain()) tdom = psi.effective_target_domain();
  return MultiMap(phi.source(), psi.target(), std::move(out), std::move(sdom),
                  std::move(tdom));
}

MapPairReport from_map_pair(const std::map<std::string, std::string>& f,
                            const std::map<std::string, std::string>& g,
                            const MetricRef& X, const MetricRef& Y) {
  auto xs = X.all_points();
  auto ys = Y.all_points();
  for (const auto& x : xs)
    if (!f.count(x)) fail_input("f is partial: missing " + x);
  for (const auto& y : ys)
    if (!g.count(y)) fail_input("g is partial: missing " + y);
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& [x, y] : f) {
    if (!X.contains(x)) fail_input("f maps unknown point " + x);
    if (!Y.contains(y)) fail_input("f hits unknown point " + y);
    pairs.emplace_back(x, y);
  }
  for (const auto& [y, x] : g) {
    if (!Y.contains(y)) fail_input("g maps unknown point " + y);
    if (!X.contains(x)) fail_input("g hits unknown point " + x);
    pairs.emplace_back(x, y);
  }
  Rational dx(0), dy(0);
  for (const auto& x : xs) dx = std::max(dx, X.distance(x, g.at(f.at(x))));
  for (const auto& y : ys) dy = std::max(dy, Y.distance(y, f.at(g.at(y))));
  return {MultiMap(X, Y, std::move(pairs)), dx, dy};
}

}  // namespace uc
