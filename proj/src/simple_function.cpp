#include "torusdiff/simple_function.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

namespace torusdiff {

SimpleFunction SimpleFunction::from_terms(std::vector<Term> terms) {
  SimpleFunction f;
  for (auto& t : terms)
    if (!t.coeff.is_zero() && !t.support.is_empty()) f.terms_.push_back(std::move(t));
  return f;
}

SimpleFunction SimpleFunction::indicator(const ProductSet& s) {
  return from_terms({{Rational(1), s}});
}

SimpleFunction SimpleFunction::scaled_indicator(const Rational& c, const ProductSet& s) {
  return from_terms({{c, s}});
}

SimpleFunction SimpleFunction::plus(const SimpleFunction& o) const {
  std::vector<Term> all = terms_;
  all.insert(all.end(), o.terms_.begin(), o.terms_.end());
  return from_terms(std::move(all));
}

SimpleFunction SimpleFunction::scaled(const Rational& c) const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.push_back({t.coeff * c, t.support});
  return from_terms(std::move(out));
}

Rational SimpleFunction::value_at(const Point& g) const {
  Rational v(0);
  for (const auto& t : terms_)
    if (t.support.contains(g)) v += t.coeff;
  return v;
}

namespace {

constexpr unsigned long kMaxRefinementCells = 1ul << 22;

// Atoms of the partition of [0,1) cut at every interval endpoint of every
// factor the terms store at this coordinate. Each atom is entirely inside or
// outside every stored factor.
std::vector<std::pair<Rational, Rational>> coordinate_atoms(
    const std::vector<SimpleFunction::Term>& terms, int coord) {
  std::set<Rational> cuts;
  cuts.insert(Rational(0));
  cuts.insert(Rational(1));
  for (const auto& t : terms) {
    auto it = t.support.factors().find(coord);
    if (it == t.support.factors().end()) continue;
    for (const auto& a : it->second.arcs()) {
      Rational end = a.start + a.length;
      cuts.insert(a.start);
      if (end <= Rational(1)) {
        cuts.insert(end);
      } else {
        cuts.insert(end - Rational(1));
      }
    }
  }
  std::vector<std::pair<Rational, Rational>> atoms;
  for (auto it = cuts.begin(); std::next(it) != cuts.end(); ++it)
    atoms.emplace_back(*it, *std::next(it));
  return atoms;
}

struct Refinement {
  std::vector<int> coords;
  std::vector<std::vector<std::pair<Rational, Rational>>> atoms;  // per coord
};

Refinement build_refinement(const std::vector<SimpleFunction::Term>& terms) {
  std::set<int> coord_set;
  for (const auto& t : terms)
    for (const auto& [i, c] : t.support.factors()) coord_set.insert(i);
  Refinement r;
  unsigned long cells = 1;
  for (int i : coord_set) {
    r.coords.push_back(i);
    r.atoms.push_back(coordinate_atoms(terms, i));
    cells *= r.atoms.back().size();
    if (cells > kMaxRefinementCells)
      throw std::runtime_error("simple function refinement: too many cells");
  }
  return r;
}

// Calls fn(value, cell measure) for every cell of the refinement.
void for_each_cell(const std::vector<SimpleFunction::Term>& terms,
                   const std::function<void(const Rational&, const Rational&)>& fn) {
  Refinement r = build_refinement(terms);
  std::vector<std::pair<int, Rational>> midpoint(r.coords.size());
  std::function<void(size_t, Rational)> rec = [&](size_t depth, Rational cell_measure) {
    if (depth == r.coords.size()) {
      std::vector<std::pair<int, Rational>> coords;
      for (const auto& [i, v] : midpoint) coords.emplace_back(i, v);
      Point mid = Point::from_coords(std::move(coords));
      Rational value(0);
      for (const auto& t : terms)
        if (t.support.contains(mid)) value += t.coeff;
      fn(value, cell_measure);
      return;
    }
    for (const auto& [lo, hi] : r.atoms[depth]) {
      midpoint[depth] = {r.coords[depth], (lo + hi) / Rational(2)};
      rec(depth + 1, cell_measure * (hi - lo));
    }
  };
  rec(0, Rational(1));
}

}  // namespace

Rational SimpleFunction::l1_norm() const {
  if (terms_.empty()) return Rational(0);
  Rational total(0);
  for_each_cell(terms_, [&](const Rational& v, const Rational& m) { total += v.abs() * m; });
  return total;
}

std::pair<Rational, Rational> SimpleFunction::value_range() const {
  if (terms_.empty()) return {Rational(0), Rational(0)};
  bool first = true;
  Rational lo(0), hi(0);
  for_each_cell(terms_, [&](const Rational& v, const Rational&) {
    if (first) {
      lo = hi = v;
      first = false;
    } else {
      lo = min(lo, v);
      hi = max(hi, v);
    }
  });
  return {lo, hi};
}

Rational integrate(const SimpleFunction& f, const Region& r) {
  Rational total(0);
  for (const auto& t : f.terms()) {
    std::vector<ProductSet> cut;
    for (const auto& piece : r.pieces()) {
      ProductSet inter = t.support.intersect(piece);
      if (!inter.is_empty()) cut.push_back(std::move(inter));
    }
    if (cut.empty()) continue;
    total += t.coeff * Region::from_pieces(std::move(cut)).measure();
  }
  return total;
}

Rational average(const SimpleFunction& f, const Region& r) {
  Rational m = r.measure();
  if (m.is_zero()) throw std::domain_error("average: zero-measure region");
  return integrate(f, r) / m;
}

}  // namespace torusdiff
