#include "space.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

#include "error.hpp"

namespace uc {

SpaceValidation FiniteUltraSpace::validate(
    const std::vector<std::string>& points,
    const std::vector<std::vector<Rational>>& dist) {
  SpaceValidation v;
  const std::size_t n = points.size();
  if (dist.size() != n) {
    v.issues.push_back("distance matrix has " + std::to_string(dist.size()) +
                       " rows for " + std::to_string(n) + " points");
    return v;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (dist[i].size() != n) {
      v.issues.push_back("row " + std::to_string(i) + " has " +
                         std::to_string(dist[i].size()) + " entries");
      return v;
    }
  }
  std::set<std::string> seen;
  for (const auto& p : points) {
    if (!seen.insert(p).second) v.issues.push_back("duplicate point id: " + p);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (dist[i][i] != Rational(0))
      v.issues.push_back("nonzero self-distance at " + points[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      if (dist[i][j] != dist[j][i])
        v.issues.push_back("asymmetric pair (" + points[i] + ", " + points[j] +
                           ")");
      if (dist[i][j] <= Rational(0))
        v.issues.push_back("non-positive distance between distinct points (" +
                           points[i] + ", " + points[j] + ")");
    }
  }
  // strong triangle inequality: d(x,z) <= max(d(x,y), d(y,z))
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z)
        if (dist[x][z] > std::max(dist[x][y], dist[y][z]))
          v.triangle_violations.push_back({x, y, z});
  return v;
}

FiniteUltraSpace FiniteUltraSpace::create(
    std::vector<std::string> points, std::vector<std::vector<Rational>> dist) {
  auto v = validate(points, dist);
  if (!v.ok()) {
    std::string msg = "invalid ultrametric space";
    if (!v.issues.empty()) msg += ": " + v.issues.front();
    if (!v.triangle_violations.empty()) {
      const auto& t = v.triangle_violations.front();
      msg += ": strong triangle fails at (" + points[t.x] + ", " + points[t.y] +
             ", " + points[t.z] + ")";
    }
    fail_input(msg);
  }
  return FiniteUltraSpace(std::move(points), std::move(dist));
}

FiniteUltraSpace::FiniteUltraSpace(std::vector<std::string> points,
                                   std::vector<std::vector<Rational>> dist)
    : points_(std::move(points)), dist_(std::move(dist)) {
  for (std::size_t i = 0; i < points_.size(); ++i) index_[points_[i]] = i;
}

std::size_t FiniteUltraSpace::index_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) fail_input("unknown point id: " + id);
  return it->second;
}

Rational FiniteUltraSpace::diameter() const {
  Rational d(0);
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = i + 1; j < size(); ++j) d = std::max(d, dist_[i][j]);
  return d;
}

std::vector<Rational> FiniteUltraSpace::realized_scales() const {
  std::set<Rational> scales;
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = i + 1; j < size(); ++j) scales.insert(dist_[i][j]);
  return {scales.begin(), scales.end()};
}

std::vector<std::size_t> FiniteUltraSpace::ball(std::size_t x,
                                                const Rational& r) const {
  if (x >= size()) fail_input("ball center out of range");
  if (r < Rational(0)) fail_input("negative ball radius");
  std::vector<std::size_t> out;
  for (std::size_t y = 0; y < size(); ++y)
    if (dist_[x][y] <= r) out.push_back(y);
  return out;
}

std::uint64_t FiniteUltraSpace::cov(std::size_t x, const Rational& eps,
                                    const Rational& delta) const {
  if (eps < Rational(0) || delta < Rational(0))
    fail_input("negative radius in cov");
  auto b = ball(x, delta);
  // eps-balls centered inside partition the delta-ball (ball dichotomy)
  std::vector<bool> covered(b.size(), false);
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (covered[i]) continue;
    ++count;
    for (std::size_t j = i; j < b.size(); ++j)
      if (dist_[b[i]][b[j]] <= eps) covered[j] = true;
  }
  return count;
}

std::uint64_t FiniteUltraSpace::min_cover_bruteforce(
    std::size_t x, const Rational& eps, const Rational& delta) const {
  if (size() > 12) fail_input("min_cover_bruteforce size cap is 12 points");
  if (eps < Rational(0) || delta < Rational(0))
    fail_input("negative radius in min_cover_bruteforce");
  auto target = ball(x, delta);
  if (target.empty()) return 0;
  const std::size_t n = size();
  // exhaustive search over center subsets by increasing size
  for (std::uint64_t k = 1; k <= n; ++k) {
    std::vector<std::size_t> centers(k, 0);
    std::function<bool(std::size_t, std::size_t)> rec =
        [&](std::size_t pos, std::size_t from) -> bool {
      if (pos == k) {
        for (std::size_t y : target) {
          bool hit = false;
          for (std::size_t c : centers)
            if (dist_[c][y] <= eps) {
              hit = true;
              break;
            }
          if (!hit) return false;
        }
        return true;
      }
      for (std::size_t c = from; c < n; ++c) {
        centers[pos] = c;
        if (rec(pos + 1, c + 1)) return true;
      }
      return false;
    };
    if (rec(0, 0)) return k;
  }
  fail_internal("cover search exhausted without covering the ball");
}

std::optional<Rational> FiniteUltraSpace::large_subset_radius(
    const std::vector<std::size_t>& L) const {
  for (std::size_t l : L)
    if (l >= size()) fail_input("subset index out of range");
  if (L.empty()) {
    if (size() == 0) return Rational(0);
    return std::nullopt;
  }
  Rational r(0);
  for (std::size_t y = 0; y < size(); ++y) {
    Rational nearest = dist_[y][L[0]];
    for (std::size_t l : L) nearest = std::min(nearest, dist_[y][l]);
    r = std::max(r, nearest);
  }
  return r;
}

namespace {

// extends a partial isometry point by point; distances must match exactly
bool extend_isometry(const FiniteUltraSpace& X, std::vector<int>& image,
                     std::vector<bool>& used, std::size_t next) {
  const std::size_t n = X.size();
  while (next < n && image[next] >= 0) ++next;
  if (next == n) return true;
  for (std::size_t cand = 0; cand < n; ++cand) {
    if (used[cand]) continue;
    bool fits = true;
    for (std::size_t other = 0; other < n; ++other) {
      if (image[other] < 0) continue;
      if (X.dist(next, other) !=
          X.dist(cand, static_cast<std::size_t>(image[other]))) {
        fits = false;
        break;
      }
    }
    if (!fits) continue;
    image[next] = static_cast<int>(cand);
    used[cand] = true;
    if (extend_isometry(X, image, used, next + 1)) return true;
    image[next] = -1;
    used[cand] = false;
  }
  return false;
}

}  // namespace

bool FiniteUltraSpace::is_isometrically_homogeneous() const {
  if (size() > 8) fail_input("homogeneity check size cap is 8 points");
  if (size() <= 1) return true;
  for (std::size_t target = 1; target < size(); ++target) {
    std::vector<int> image(size(), -1);
    std::vector<bool> used(size(), false);
    image[0] = static_cast<int>(target);
    used[target] = true;
    if (!extend_isometry(*this, image, used, 1)) return false;
  }
  return true;
}

SequenceSpace::SequenceSpace(CardinalSeq degrees) : degrees_(std::move(degrees)) {
  for (std::size_t i = 0; i < degrees_.prefix().size(); ++i)
    if (degrees_.prefix()[i] == Cardinal::finite(0))
      fail_input("degree 0 at position " + std::to_string(i + 1));
  if (degrees_.tail_is_constant() &&
      degrees_.constant_tail_value() == Cardinal::finite(0))
    fail_input("degree 0 in the tail");
}

Cardinal SequenceSpace::degree(std::uint64_t k) const {
  if (k == 0) fail_input("coordinates are 1-based");
  return degrees_.at(k - 1);
}

SequenceSpace::Point SequenceSpace::normalize(Point p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  return p;
}

bool SequenceSpace::contains(const Point& p) const {
  for (std::size_t i = 0; i < p.size(); ++i) {
    Cardinal d = degrees_.at(i);
    if (d.is_finite() && p[i] >= d.finite_value()) return false;
  }
  return true;
}

std::uint64_t SequenceSpace::distance(const Point& a, const Point& b) const {
  std::size_t top = std::max(a.size(), b.size());
  for (std::size_t k = top; k >= 1; --k) {
    std::uint64_t av = k <= a.size() ? a[k - 1] : 0;
    std::uint64_t bv = k <= b.size() ? b[k - 1] : 0;
    if (av != bv) return k;
  }
  return 0;
}

std::string SequenceSpace::point_id(const Point& p) {
  Point q = normalize(p);
  if (q.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(q[i]);
  }
  return out;
}

SequenceSpace::Point SequenceSpace::parse_point(const std::string& id) {
  if (id.empty()) fail_input("empty point id");
  Point p;
  std::size_t start = 0;
  while (start <= id.size()) {
    auto dot = id.find('.', start);
    std::string part = id.substr(
        start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) fail_input("bad point id: " + id);
    std::uint64_t value = 0;
    for (char c : part) {
      if (c < '0' || c > '9') fail_input("bad point id: " + id);
      value = value * 10 + static_cast<std::uint64_t>(c - '0');
    }
    p.push_back(value);
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  return normalize(std::move(p));
}

bool SequenceSpace::is_bounded() const {
  if (!degrees_.tail_is_constant()) return false;
  return degrees_.constant_tail_value() == Cardinal::finite(1);
}

std::uint64_t SequenceSpace::bounded_support() const {
  if (!is_bounded()) fail_input("support is unbounded");
  std::uint64_t top = 0;
  for (std::size_t i = 0; i < degrees_.prefix().size(); ++i)
    if (degrees_.prefix()[i] != Cardinal::finite(1)) top = i + 1;
  return top;
}

std::vector<SequenceSpace::Point> SequenceSpace::enumerate_bounded() const {
  std::uint64_t support = bounded_support();
  for (std::uint64_t k = 1; k <= support; ++k)
    if (degree(k).is_infinite())
      fail_input("bounded space with an infinite level cannot be enumerated");
  std::vector<Point> points{{}};
  for (std::uint64_t k = 1; k <= support; ++k) {
    std::uint64_t d = degree(k).finite_value();
    std::vector<Point> next;
    next.reserve(points.size() * d);
    for (std::uint64_t v = 0; v < d; ++v)
      for (const auto& p : points) {
        Point q = p;
        q.resize(k, 0);
        q[k - 1] = v;
        next.push_back(std::move(q));
      }
    points = std::move(next);
  }
  for (auto& p : points) p = normalize(std::move(p));
  std::sort(points.begin(), points.end());
  return points;
}

FiniteUltraSpace SequenceSpace::truncate(std::uint64_t level,
                                         std::uint64_t cap) const {
  if (level == 0 || cap == 0) fail_input("truncate needs level, cap >= 1");
  std::vector<std::uint64_t> widths(level);
  std::uint64_t total = 1;
  for (std::uint64_t k = 1; k <= level; ++k) {
    Cardinal d = degree(k);
    std::uint64_t w =
        d.is_infinite() ? cap : std::min<std::uint64_t>(cap, d.finite_value());
    widths[k - 1] = w;
    if (total > 20000 / w) fail_input("truncate window exceeds 20000 points");
    total *= w;
  }
  std::vector<Point> tuples{{}};
  for (std::uint64_t k = 1; k <= level; ++k) {
    std::vector<Point> next;
    next.reserve(tuples.size() * widths[k - 1]);
    for (const auto& p : tuples)
      for (std::uint64_t v = 0; v < widths[k - 1]; ++v) {
        Point q = p;
        q.push_back(v);
        next.push_back(std::move(q));
      }
    tuples = std::move(next);
  }
  std::sort(tuples.begin(), tuples.end());
  std::vector<std::string> ids;
  ids.reserve(tuples.size());
  for (const auto& t : tuples) ids.push_back(point_id(t));
  std::vector<std::vector<Rational>> dist(
      tuples.size(), std::vector<Rational>(tuples.size(), Rational(0)));
  for (std::size_t i = 0; i < tuples.size(); ++i)
    for (std::size_t j = i + 1; j < tuples.size(); ++j) {
      Rational d(static_cast<std::int64_t>(distance(tuples[i], tuples[j])));
      dist[i][j] = dist[j][i] = d;
    }
  return FiniteUltraSpace::create(std::move(ids), std::move(dist));
}

MetricRef MetricRef::finite(std::shared_ptr<const FiniteUltraSpace> space) {
  if (!space) fail_internal("null finite space");
  MetricRef r;
  r.finite_ = std::move(space);
  return r;
}

MetricRef MetricRef::sequence(std::shared_ptr<const SequenceSpace> space) {
  if (!space) fail_internal("null sequence space");
  MetricRef r;
  r.sequence_ = std::move(space);
  return r;
}

const FiniteUltraSpace& MetricRef::finite_space() const {
  if (!finite_) fail_internal("not a finite space");
  return *finite_;
}

const SequenceSpace& MetricRef::sequence_space() const {
  if (!sequence_) fail_internal("not a sequence space");
  return *sequence_;
}

bool MetricRef::contains(const std::string& id) const {
  if (finite_) {
    try {
      finite_->index_of(id);
      return true;
    } catch (const Error&) {
      return false;
    }
  }
  try {
    return sequence_->contains(SequenceSpace::parse_point(id));
  } catch (const Error&) {
    return false;
  }
}

Rational MetricRef::distance(const std::string& a, const std::string& b) const {
  if (finite_) return finite_->dist(finite_->index_of(a), finite_->index_of(b));
  auto pa = SequenceSpace::parse_point(a), pb = SequenceSpace::parse_point(b);
  return Rational(static_cast<std::int64_t>(sequence_->distance(pa, pb)));
}

std::vector<std::string> MetricRef::all_points() const {
  if (finite_) return finite_->points();
  if (!sequence_->is_bounded())
    fail_input("cannot enumerate an unbounded sequence space");
  std::vector<std::string> out;
  for (const auto& p : sequence_->enumerate_bounded())
    out.push_back(SequenceSpace::point_id(p));
  return out;
}

}  // namespace uc
