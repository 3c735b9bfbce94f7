#pragma once

#include <map>
#include <utility>
#include <vector>

#include "torusdiff/rational.hpp"

namespace torusdiff {

/// Element of the infinite torus with finitely many nonzero coordinates.
/// Coordinates are 1-based; unspecified coordinates are 0. Values live in
/// [0,1) and the group operation is coordinatewise addition mod 1.
class Point {
public:
  Point() = default;
  static Point from_coords(std::vector<std::pair<int, Rational>> coords);
  static Point single(int coord, const Rational& value);

  const std::vector<std::pair<int, Rational>>& coords() const { return coords_; }
  Rational coord(int i) const;
  bool is_zero() const { return coords_.empty(); }
  int max_coord() const { return coords_.empty() ? 0 : coords_.back().first; }

  Point plus(const Point& o) const;
  Point negated() const;
  Point minus(const Point& o) const { return plus(o.negated()); }

  friend bool operator==(const Point&, const Point&) = default;

private:
  std::vector<std::pair<int, Rational>> coords_;  // sorted, nonzero values in [0,1)
};

/// Half-open arc {start + t mod 1 : 0 <= t < length} on the circle.
/// length == 1 is the full circle; arcs may wrap past 1.
struct Arc {
  Rational start;   // in [0,1)
  Rational length;  // in (0,1]

  Arc(Rational s, Rational len);
  friend bool operator==(const Arc&, const Arc&) = default;
};

/// Finite union of pairwise-disjoint arcs on the circle, kept canonical:
/// sorted by start, overlaps and mod-1 abutments merged, at most one arc
/// wrapping past 1.
class CoordSet {
public:
  CoordSet() = default;  // empty set
  static CoordSet full();
  static CoordSet from_arcs(std::vector<Arc> arcs);  // union semantics

  const std::vector<Arc>& arcs() const { return arcs_; }
  bool is_empty() const { return arcs_.empty(); }
  bool is_full() const;
  Rational measure() const;

  bool contains(const Rational& x) const;          // half-open membership
  bool closure_contains(const Rational& x) const;

  CoordSet intersect(const CoordSet& o) const;
  CoordSet unite(const CoordSet& o) const;
  CoordSet complement() const;
  bool subset_of(const CoordSet& o) const;
  CoordSet translated(const Rational& delta) const;

  /// Diameter of the closure in the circle metric min(|x-y|, 1-|x-y|).
  Rational spread() const;
  /// sup of the circle distance over closure(*this) x closure(o).
  Rational cross_spread(const CoordSet& o) const;

  friend bool operator==(const CoordSet&, const CoordSet&) = default;

private:
  static CoordSet from_intervals(std::vector<std::pair<Rational, Rational>> iv);
  std::vector<std::pair<Rational, Rational>> to_intervals() const;

  std::vector<Arc> arcs_;
};

/// Interval of the infinite torus: a product of per-coordinate arc unions,
/// all but finitely many factors equal to the full circle. Stored factors
/// always have measure < 1; the canonical empty set stores no factors and
/// is flagged.
class ProductSet {
public:
  ProductSet() = default;  // full torus
  static ProductSet empty_set();
  /// Box with a single arc per listed coordinate.
  static ProductSet box(const std::vector<std::pair<int, Arc>>& factors);

  ProductSet with_factor(int coord, const CoordSet& c) const;

  bool is_empty() const { return empty_; }
  bool is_full_torus() const { return !empty_ && factors_.empty(); }
  const std::map<int, CoordSet>& factors() const { return factors_; }
  /// Factor at a coordinate; full circle when not stored.
  CoordSet factor(int coord) const;
  int max_coord() const { return factors_.empty() ? 0 : factors_.rbegin()->first; }

  Rational measure() const;
  ProductSet intersect(const ProductSet& o) const;
  bool subset_of(const ProductSet& o) const;
  bool contains(const Point& g) const;
  bool closure_contains(const Point& g) const;
  ProductSet translated(const Point& g) const;

  friend bool operator==(const ProductSet&, const ProductSet&) = default;

private:
  std::map<int, CoordSet> factors_;
  bool empty_ = false;
};

/// Finite union of product sets. The measure is independent of the piece
/// decomposition; pieces are deduplicated at construction.
class Region {
public:
  Region() = default;  // empty region
  explicit Region(ProductSet piece);
  static Region from_pieces(std::vector<ProductSet> pieces);

  const std::vector<ProductSet>& pieces() const { return pieces_; }
  bool is_empty() const { return pieces_.empty(); }

  Rational measure() const;
  Rational diameter() const;  // throws on empty region
  Region intersect(const Region& o) const;
  Region unite(const Region& o) const;
  bool closure_contains(const Point& g) const;
  bool contains(const Point& g) const;
  Region translated(const Point& g) const;

  friend bool operator==(const Region&, const Region&) = default;

private:
  std::vector<ProductSet> pieces_;  // non-empty, deduplicated
};

/// Distance min(|d|, 1-|d|) between circle points at difference d.
Rational circle_dist(const Rational& d);

/// The metric rho(g,h) = sum_n circle_dist(g_n - h_n) / 2^n.
Rational rho(const Point& g, const Point& h);

/// sup of rho over closure(p) x closure(q) for product sets.
Rational cross_diameter(const ProductSet& p, const ProductSet& q);

Rational measure(const Region& r);
Rational diameter(const Region& r);
Region translate(const Region& r, const Point& g);
ProductSet intersect(const ProductSet& a, const ProductSet& b);
bool closure_contains(const Region& r, const Point& g);

}  // namespace torusdiff
