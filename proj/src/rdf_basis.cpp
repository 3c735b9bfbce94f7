#include "torusdiff/rdf_basis.hpp"

#include <algorithm>
#include <stdexcept>

namespace torusdiff {

namespace {

constexpr std::uint64_t kMaxCandidates = 1ull << 20;

}  // namespace

LevelVector rdf_levels(int n) {
  if (n < 1) throw std::invalid_argument("rdf_levels: n must be >= 1");
  int m = 0;
  while ((m + 1) * (m + 1) < n) ++m;  // m^2 < n <= (m+1)^2
  LevelVector lv;
  lv.n = n;
  if (n <= m * m + m) {
    // appended coordinate climbing from 1 to m
    int j = n - m * m;
    lv.levels.assign(m, m);
    lv.levels.push_back(j);
  } else {
    // first j coordinates refined from m to m+1
    int j = n - m * m - m;
    lv.levels.assign(j, m + 1);
    lv.levels.insert(lv.levels.end(), m + 1 - j, m);
  }
  int sum = 0;
  for (int k : lv.levels) sum += k;
  if (sum != n) throw std::logic_error("rdf_levels: level sum mismatch");
  return lv;
}

ProductSet rdf_cell(int n) {
  LevelVector lv = rdf_levels(n);
  ProductSet p;
  for (size_t i = 0; i < lv.levels.size(); ++i)
    p = p.with_factor(static_cast<int>(i) + 1,
                      CoordSet::from_arcs({Arc(Rational(0), pow2(-lv.levels[i]))}));
  return p;
}

std::uint64_t rdf_group_size(int n) {
  LevelVector lv = rdf_levels(n);
  std::uint64_t size = 1;
  for (int k : lv.levels) size <<= k;
  return size;
}

std::uint64_t for_each_group_point(int n, const std::function<void(const Point&)>& fn) {
  LevelVector lv = rdf_levels(n);
  size_t d = lv.levels.size();
  std::vector<long> digit(d, 0);
  std::vector<long> radix(d);
  for (size_t i = 0; i < d; ++i) radix[i] = 1l << lv.levels[i];
  std::uint64_t count = 0;
  while (true) {
    std::vector<std::pair<int, Rational>> coords;
    for (size_t i = 0; i < d; ++i)
      if (digit[i] != 0) coords.emplace_back(static_cast<int>(i) + 1, Rational(digit[i], radix[i]));
    fn(Point::from_coords(std::move(coords)));
    ++count;
    // lexicographic odometer, last coordinate fastest
    size_t pos = d;
    while (pos > 0) {
      --pos;
      if (++digit[pos] < radix[pos]) break;
      digit[pos] = 0;
      if (pos == 0) return count;
    }
    if (d == 0) return count;
  }
}

std::vector<Point> rdf_group(int n) {
  if (n < 1) throw std::invalid_argument("rdf_group: n must be >= 1");
  if (rdf_group_size(n) > kMaxCandidates)
    throw std::invalid_argument("rdf_group: group too large to materialize");
  std::vector<Point> pts;
  pts.reserve(rdf_group_size(n));
  for_each_group_point(n, [&](const Point& p) { pts.push_back(p); });
  return pts;
}

ProductSet rdf_box(int n) {
  if (n < 1) throw std::invalid_argument("rdf_box: n must be >= 1");
  return rdf_cell(n * n);
}

Point rdf_shift(int n, int i) {
  if (n < 1 || i < 1 || i > n) throw std::invalid_argument("rdf_shift: need 1 <= i <= n");
  return Point::single(i, pow2(-n));
}

const char* family_name(FamilyKind k) {
  switch (k) {
    case FamilyKind::RdfRestricted: return "rdf-restricted";
    case FamilyKind::RdfShapes: return "rdf-shapes";
    case FamilyKind::DBasis: return "d-basis";
    case FamilyKind::GBasis: return "g-basis";
  }
  throw std::logic_error("family_name: unknown kind");
}

FamilyKind family_kind_from_name(const std::string& name) {
  if (name == "rdf-restricted") return FamilyKind::RdfRestricted;
  if (name == "rdf-shapes") return FamilyKind::RdfShapes;
  if (name == "d-basis") return FamilyKind::DBasis;
  if (name == "g-basis") return FamilyKind::GBasis;
  throw std::invalid_argument("unknown family name: " + name);
}

namespace {

std::uint64_t candidate_count(FamilyKind kind, int g) {
  std::uint64_t translates = 0;
  for (int n = 1; n <= g; ++n) {
    translates += rdf_group_size(n);
    if (translates > 2 * kMaxCandidates) return translates;  // early out
  }
  switch (kind) {
    case FamilyKind::RdfShapes: return static_cast<std::uint64_t>(g);
    case FamilyKind::RdfRestricted: return translates;
    case FamilyKind::DBasis: return translates + static_cast<std::uint64_t>(g) * (g + 1) / 2;
    case FamilyKind::GBasis: return 2 * translates;
  }
  throw std::logic_error("candidate_count: unknown kind");
}

}  // namespace

BasisFamily build_family(FamilyKind kind, int max_generation) {
  if (max_generation < 1) throw std::invalid_argument("build_family: max_generation must be >= 1");
  if (candidate_count(kind, max_generation) > kMaxCandidates)
    throw std::invalid_argument("build_family: candidate count cap exceeded");
  BasisFamily f;
  f.kind = kind;
  f.max_generation = max_generation;
  for (int n = 1; n <= max_generation; ++n) {
    ProductSet cell = rdf_cell(n);
    switch (kind) {
      case FamilyKind::RdfShapes:
        f.candidates.emplace_back(cell);
        break;
      case FamilyKind::RdfRestricted:
        for_each_group_point(n, [&](const Point& h) {
          f.candidates.emplace_back(cell.translated(h));
        });
        break;
      case FamilyKind::DBasis:
        for_each_group_point(n, [&](const Point& h) {
          f.candidates.emplace_back(cell.translated(h));
        });
        break;
      case FamilyKind::GBasis:
        for_each_group_point(n, [&](const Point& h) {
          f.candidates.emplace_back(cell.translated(h));
          f.candidates.push_back(
              Region::from_pieces({cell, cell.translated(h)}));
        });
        break;
    }
  }
  if (kind == FamilyKind::DBasis) {
    for (int n = 1; n <= max_generation; ++n) {
      ProductSet box = rdf_box(n);
      for (int i = 1; i <= n; ++i)
        f.candidates.push_back(
            Region::from_pieces({box, box.translated(rdf_shift(n, i))}));
    }
  }
  return f;
}

BasisFamily build_family(const std::string& name, int max_generation) {
  return build_family(family_kind_from_name(name), max_generation);
}

std::vector<std::pair<Rational, Rational>> family_profile(const BasisFamily& f) {
  std::vector<std::pair<Rational, Rational>> out;
  out.reserve(f.candidates.size());
  for (const auto& c : f.candidates) out.emplace_back(c.measure(), c.diameter());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace torusdiff
