#include "torusdiff/torus.hpp"

#include <algorithm>
#include <stdexcept>

namespace torusdiff {

// ---------------------------------------------------------------------------
// Point

Point Point::from_coords(std::vector<std::pair<int, Rational>> coords) {
  Point p;
  for (auto& [i, v] : coords) {
    if (i < 1) throw std::invalid_argument("point: coordinate indices are 1-based");
    v = mod1(v);
  }
  std::sort(coords.begin(), coords.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (size_t k = 0; k + 1 < coords.size(); ++k)
    if (coords[k].first == coords[k + 1].first)
      throw std::invalid_argument("point: duplicate coordinate index");
  for (auto& c : coords)
    if (!c.second.is_zero()) p.coords_.push_back(std::move(c));
  return p;
}

Point Point::single(int coord, const Rational& value) {
  return from_coords({{coord, value}});
}

Rational Point::coord(int i) const {
  auto it = std::lower_bound(coords_.begin(), coords_.end(), i,
                             [](const auto& a, int b) { return a.first < b; });
  if (it != coords_.end() && it->first == i) return it->second;
  return Rational(0);
}

Point Point::plus(const Point& o) const {
  std::vector<std::pair<int, Rational>> out;
  size_t a = 0, b = 0;
  while (a < coords_.size() || b < o.coords_.size()) {
    if (b == o.coords_.size() || (a < coords_.size() && coords_[a].first < o.coords_[b].first)) {
      out.push_back(coords_[a++]);
    } else if (a == coords_.size() || o.coords_[b].first < coords_[a].first) {
      out.push_back(o.coords_[b++]);
    } else {
      out.emplace_back(coords_[a].first, mod1(coords_[a].second + o.coords_[b].second));
      ++a, ++b;
    }
  }
  return from_coords(std::move(out));
}

Point Point::negated() const {
  std::vector<std::pair<int, Rational>> out;
  for (const auto& [i, v] : coords_) out.emplace_back(i, mod1(-v));
  return from_coords(std::move(out));
}

// ---------------------------------------------------------------------------
// Arc

Arc::Arc(Rational s, Rational len) : start(std::move(s)), length(std::move(len)) {
  if (start.sign() < 0 || start >= Rational(1))
    throw std::invalid_argument("arc: start must lie in [0,1)");
  if (length.sign() <= 0 || length > Rational(1))
    throw std::invalid_argument("arc: length must lie in (0,1]");
}

// ---------------------------------------------------------------------------
// CoordSet

CoordSet CoordSet::full() {
  CoordSet c;
  c.arcs_.emplace_back(Rational(0), Rational(1));
  return c;
}

bool CoordSet::is_full() const {
  return arcs_.size() == 1 && arcs_[0].length == Rational(1);
}

Rational CoordSet::measure() const {
  Rational m(0);
  for (const auto& a : arcs_) m += a.length;
  return m;
}

std::vector<std::pair<Rational, Rational>> CoordSet::to_intervals() const {
  std::vector<std::pair<Rational, Rational>> iv;
  const Rational one(1);
  for (const auto& a : arcs_) {
    Rational end = a.start + a.length;
    if (end <= one) {
      iv.emplace_back(a.start, end);
    } else {
      iv.emplace_back(a.start, one);
      iv.emplace_back(Rational(0), end - one);
    }
  }
  std::sort(iv.begin(), iv.end());
  return iv;
}

CoordSet CoordSet::from_intervals(std::vector<std::pair<Rational, Rational>> iv) {
  const Rational one(1);
  std::sort(iv.begin(), iv.end());
  std::vector<std::pair<Rational, Rational>> merged;
  for (auto& [lo, hi] : iv) {
    if (lo >= hi) continue;
    if (!merged.empty() && lo <= merged.back().second) {
      if (hi > merged.back().second) merged.back().second = hi;
    } else {
      merged.emplace_back(lo, hi);
    }
  }
  CoordSet c;
  if (merged.empty()) return c;
  if (merged.size() == 1 && merged[0].first.is_zero() && merged[0].second == one)
    return full();
  // Re-wrap: [x,1) followed mod 1 by [0,y) is a single wrapping arc.
  if (merged.size() >= 2 && merged.front().first.is_zero() && merged.back().second == one) {
    Rational wrap_start = merged.back().first;
    Rational wrap_len = (one - merged.back().first) + merged.front().second;
    merged.pop_back();
    merged.erase(merged.begin());
    for (const auto& [lo, hi] : merged) c.arcs_.emplace_back(lo, hi - lo);
    c.arcs_.emplace_back(wrap_start, wrap_len);
    return c;
  }
  for (const auto& [lo, hi] : merged) c.arcs_.emplace_back(lo, hi - lo);
  return c;
}

CoordSet CoordSet::from_arcs(std::vector<Arc> arcs) {
  std::vector<std::pair<Rational, Rational>> iv;
  const Rational one(1);
  for (const auto& a : arcs) {
    Rational end = a.start + a.length;
    if (end <= one) {
      iv.emplace_back(a.start, end);
    } else {
      iv.emplace_back(a.start, one);
      iv.emplace_back(Rational(0), end - one);
    }
  }
  return from_intervals(std::move(iv));
}

bool CoordSet::contains(const Rational& x) const {
  Rational v = mod1(x);
  for (const auto& a : arcs_)
    if (mod1(v - a.start) < a.length) return true;
  return false;
}

bool CoordSet::closure_contains(const Rational& x) const {
  Rational v = mod1(x);
  for (const auto& a : arcs_)
    if (mod1(v - a.start) <= a.length) return true;
  return false;
}

CoordSet CoordSet::intersect(const CoordSet& o) const {
  auto a = to_intervals();
  auto b = o.to_intervals();
  std::vector<std::pair<Rational, Rational>> out;
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const Rational& lo = max(a[i].first, b[j].first);
    const Rational& hi = min(a[i].second, b[j].second);
    if (lo < hi) out.emplace_back(lo, hi);
    if (a[i].second < b[j].second) ++i; else ++j;
  }
  return from_intervals(std::move(out));
}

CoordSet CoordSet::unite(const CoordSet& o) const {
  auto a = to_intervals();
  auto b = o.to_intervals();
  a.insert(a.end(), b.begin(), b.end());
  return from_intervals(std::move(a));
}

CoordSet CoordSet::complement() const {
  const Rational zero(0), one(1);
  auto iv = to_intervals();
  std::vector<std::pair<Rational, Rational>> out;
  Rational cursor = zero;
  for (const auto& [lo, hi] : iv) {
    if (cursor < lo) out.emplace_back(cursor, lo);
    cursor = hi;
  }
  if (cursor < one) out.emplace_back(cursor, one);
  return from_intervals(std::move(out));
}

bool CoordSet::subset_of(const CoordSet& o) const {
  return intersect(o.complement()).is_empty();
}

CoordSet CoordSet::translated(const Rational& delta) const {
  std::vector<Arc> shifted;
  shifted.reserve(arcs_.size());
  for (const auto& a : arcs_) shifted.emplace_back(mod1(a.start + delta), a.length);
  return from_arcs(std::move(shifted));
}

namespace {

// sup of the circle distance over closure(A) x closure(B). The difference
// y - x mod 1 sweeps a closed arc of length |A| + |B|; the distance is the
// tent function min(t, 1-t) over that arc.
Rational arc_pair_spread(const Arc& a, const Arc& b) {
  const Rational half(1, 2), one(1);
  Rational len = a.length + b.length;
  if (len >= one) return half;
  Rational lo = mod1(b.start - a.start - a.length);
  if (mod1(half - lo) <= len) return half;
  auto tent = [&](const Rational& t) { return min(t, one - t); };
  return max(tent(lo), tent(mod1(lo + len)));
}

}  // namespace

Rational CoordSet::cross_spread(const CoordSet& o) const {
  Rational best(0);
  for (const auto& a : arcs_)
    for (const auto& b : o.arcs_) best = max(best, arc_pair_spread(a, b));
  return best;
}

Rational CoordSet::spread() const {
  Rational best(0);
  for (size_t i = 0; i < arcs_.size(); ++i)
    for (size_t j = i; j < arcs_.size(); ++j)
      best = max(best, arc_pair_spread(arcs_[i], arcs_[j]));
  return best;
}

// ---------------------------------------------------------------------------
// ProductSet

ProductSet ProductSet::empty_set() {
  ProductSet p;
  p.empty_ = true;
  return p;
}

ProductSet ProductSet::box(const std::vector<std::pair<int, Arc>>& factors) {
  ProductSet p;
  for (const auto& [i, a] : factors)
    p = p.with_factor(i, CoordSet::from_arcs({a}));
  return p;
}

ProductSet ProductSet::with_factor(int coord, const CoordSet& c) const {
  if (coord < 1) throw std::invalid_argument("product set: coordinate indices are 1-based");
  if (empty_) return *this;
  ProductSet p = *this;
  if (c.is_empty()) return empty_set();
  if (c.is_full()) {
    p.factors_.erase(coord);
    return p;
  }
  auto it = p.factors_.find(coord);
  if (it == p.factors_.end()) {
    p.factors_.emplace(coord, c);
    return p;
  }
  CoordSet merged = it->second.intersect(c);
  if (merged.is_empty()) return empty_set();
  it->second = std::move(merged);
  return p;
}

CoordSet ProductSet::factor(int coord) const {
  auto it = factors_.find(coord);
  return it == factors_.end() ? CoordSet::full() : it->second;
}

Rational ProductSet::measure() const {
  if (empty_) return Rational(0);
  Rational m(1);
  for (const auto& [i, c] : factors_) m *= c.measure();
  return m;
}

ProductSet ProductSet::intersect(const ProductSet& o) const {
  if (empty_ || o.empty_) return empty_set();
  ProductSet out = *this;
  for (const auto& [i, c] : o.factors_) {
    out = out.with_factor(i, c);
    if (out.is_empty()) return out;
  }
  return out;
}

bool ProductSet::subset_of(const ProductSet& o) const {
  if (empty_) return true;
  if (o.empty_) return false;
  for (const auto& [i, c] : o.factors_)
    if (!factor(i).subset_of(c)) return false;
  return true;
}

bool ProductSet::contains(const Point& g) const {
  if (empty_) return false;
  for (const auto& [i, c] : factors_)
    if (!c.contains(g.coord(i))) return false;
  return true;
}

bool ProductSet::closure_contains(const Point& g) const {
  if (empty_) return false;
  for (const auto& [i, c] : factors_)
    if (!c.closure_contains(g.coord(i))) return false;
  return true;
}

ProductSet ProductSet::translated(const Point& g) const {
  if (empty_) return *this;
  ProductSet out;
  for (const auto& [i, c] : factors_)
    out.factors_.emplace(i, c.translated(g.coord(i)));
  return out;
}

// ---------------------------------------------------------------------------
// Region

Region::Region(ProductSet piece) {
  if (!piece.is_empty()) pieces_.push_back(std::move(piece));
}

Region Region::from_pieces(std::vector<ProductSet> pieces) {
  Region r;
  for (auto& p : pieces) {
    if (p.is_empty()) continue;
    if (std::find(r.pieces_.begin(), r.pieces_.end(), p) == r.pieces_.end())
      r.pieces_.push_back(std::move(p));
  }
  return r;
}

namespace {

constexpr size_t kMaxInclusionExclusionPieces = 20;

// m(c ∩ (P_idx ∪ P_{idx+1} ∪ ...)) by inclusion-exclusion with pruning of
// empty intersections.
Rational union_measure_rec(const std::vector<ProductSet>& ps, size_t idx, const ProductSet& c) {
  Rational total(0);
  for (size_t i = idx; i < ps.size(); ++i) {
    ProductSet inter = c.intersect(ps[i]);
    if (inter.is_empty()) continue;
    total += inter.measure() - union_measure_rec(ps, i + 1, inter);
  }
  return total;
}

// Drops pieces contained in another piece. Input has no duplicates.
std::vector<ProductSet> absorb_pieces(const std::vector<ProductSet>& pieces) {
  std::vector<bool> dropped(pieces.size(), false);
  for (size_t i = 0; i < pieces.size(); ++i)
    for (size_t j = 0; j < pieces.size(); ++j)
      if (i != j && !dropped[j] && pieces[i].subset_of(pieces[j])) {
        dropped[i] = true;
        break;
      }
  std::vector<ProductSet> out;
  for (size_t i = 0; i < pieces.size(); ++i)
    if (!dropped[i]) out.push_back(pieces[i]);
  return out;
}

}  // namespace

Rational Region::measure() const {
  if (pieces_.empty()) return Rational(0);
  if (pieces_.size() == 1) return pieces_[0].measure();
  std::vector<ProductSet> work = absorb_pieces(pieces_);
  if (work.size() == 1) return work[0].measure();
  bool disjoint = true;
  for (size_t i = 0; i < work.size() && disjoint; ++i)
    for (size_t j = i + 1; j < work.size(); ++j)
      if (!work[i].intersect(work[j]).is_empty()) {
        disjoint = false;
        break;
      }
  if (disjoint) {
    Rational m(0);
    for (const auto& p : work) m += p.measure();
    return m;
  }
  if (work.size() > kMaxInclusionExclusionPieces)
    throw std::runtime_error("region measure: too many overlapping pieces");
  return union_measure_rec(work, 0, ProductSet());
}

Rational cross_diameter(const ProductSet& p, const ProductSet& q) {
  if (p.is_empty() || q.is_empty())
    throw std::domain_error("cross_diameter: empty set");
  const Rational half(1, 2);
  int n = std::max(p.max_coord(), q.max_coord());
  Rational total(0);
  for (int i = 1; i <= n; ++i) {
    bool sp = p.factors().count(i) > 0, sq = q.factors().count(i) > 0;
    if (sp && sq) {
      total += pow2(-i) * p.factors().at(i).cross_spread(q.factors().at(i));
    } else {
      total += pow2(-i) * half;  // a full factor on either side reaches the antipode
    }
  }
  return total + pow2(-n - 1);  // tail over the implicit full coordinates
}

Rational Region::diameter() const {
  if (pieces_.empty()) throw std::domain_error("diameter: empty region");
  Rational best(0);
  for (size_t i = 0; i < pieces_.size(); ++i)
    for (size_t j = i; j < pieces_.size(); ++j)
      best = max(best, cross_diameter(pieces_[i], pieces_[j]));
  return best;
}

Region Region::intersect(const Region& o) const {
  std::vector<ProductSet> out;
  for (const auto& a : pieces_)
    for (const auto& b : o.pieces_) {
      ProductSet inter = a.intersect(b);
      if (!inter.is_empty()) out.push_back(std::move(inter));
    }
  return from_pieces(std::move(out));
}

Region Region::unite(const Region& o) const {
  std::vector<ProductSet> out = pieces_;
  out.insert(out.end(), o.pieces_.begin(), o.pieces_.end());
  return from_pieces(std::move(out));
}

bool Region::closure_contains(const Point& g) const {
  for (const auto& p : pieces_)
    if (p.closure_contains(g)) return true;
  return false;
}

bool Region::contains(const Point& g) const {
  for (const auto& p : pieces_)
    if (p.contains(g)) return true;
  return false;
}

Region Region::translated(const Point& g) const {
  std::vector<ProductSet> out;
  out.reserve(pieces_.size());
  for (const auto& p : pieces_) out.push_back(p.translated(g));
  return from_pieces(std::move(out));
}

// ---------------------------------------------------------------------------
// Free functions

Rational circle_dist(const Rational& d) {
  Rational f = mod1(d);
  return min(f, Rational(1) - f);
}

Rational rho(const Point& g, const Point& h) {
  Rational total(0);
  size_t a = 0, b = 0;
  const auto& ga = g.coords();
  const auto& hb = h.coords();
  while (a < ga.size() || b < hb.size()) {
    int i;
    Rational diff;
    if (b == hb.size() || (a < ga.size() && ga[a].first < hb[b].first)) {
      i = ga[a].first;
      diff = ga[a].second;
      ++a;
    } else if (a == ga.size() || hb[b].first < ga[a].first) {
      i = hb[b].first;
      diff = -hb[b].second;
      ++b;
    } else {
      i = ga[a].first;
      diff = ga[a].second - hb[b].second;
      ++a, ++b;
    }
    total += pow2(-i) * circle_dist(diff);
  }
  return total;
}

Rational measure(const Region& r) { return r.measure(); }
Rational diameter(const Region& r) { return r.diameter(); }
Region translate(const Region& r, const Point& g) { return r.translated(g); }
ProductSet intersect(const ProductSet& a, const ProductSet& b) { return a.intersect(b); }
bool closure_contains(const Region& r, const Point& g) { return r.closure_contains(g); }

}  // namespace torusdiff
