#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "torusdiff/torus.hpp"

namespace torusdiff {

/// Exponents (k_1, ..., k_d) of a scheme cell: entry k_i stands for the
/// factor (0, 2^{-k_i}). The entries of the vector at index n sum to n, so
/// the cell has measure exactly 2^{-n}.
struct LevelVector {
  int n = 0;
  std::vector<int> levels;
  friend bool operator==(const LevelVector&, const LevelVector&) = default;
};

/// Level vector of generation n (n >= 1). Generations walk the scheme:
/// after the block of vectors of length m is exhausted at n = m^2, a new
/// coordinate is appended and climbs from 1 to m, then the coordinates are
/// refined one by one from m to m+1, reaching (m+1, ..., m+1) at (m+1)^2.
LevelVector rdf_levels(int n);

/// Cell V_n = prod (0, 2^{-k_i}) x T^{d, omega}; measure 2^{-n}.
ProductSet rdf_cell(int n);

/// Finite subgroup H_n = prod R_{2^{k_i}} x {0}, |H_n| = 2^n, enumerated in
/// lexicographic order of the coordinate digits.
std::vector<Point> rdf_group(int n);

/// Streams H_n without materializing it; returns the number of points.
std::uint64_t for_each_group_point(int n, const std::function<void(const Point&)>& fn);

std::uint64_t rdf_group_size(int n);

/// Box U_n = V_{n^2} = (0, 2^{-n})^n x T^{n, omega}.
ProductSet rdf_box(int n);

/// Shift e_{n,i}: all coordinates zero except 2^{-n} at coordinate i.
Point rdf_shift(int n, int i);

enum class FamilyKind { RdfRestricted, RdfShapes, DBasis, GBasis };

const char* family_name(FamilyKind k);
FamilyKind family_kind_from_name(const std::string& name);

/// Explicitly enumerated truncation of a differentiation basis. Every
/// candidate has strictly positive measure.
struct BasisFamily {
  FamilyKind kind;
  int max_generation = 0;
  std::vector<Region> candidates;
};

/// Candidates per family, up to the generation bound:
///   rdf-restricted: {h + V_n : n <= g, h in H_n}
///   rdf-shapes:     {V_n : n <= g}
///   d-basis:        rdf-restricted plus {U_n ∪ (e_{n,i} + U_n) : n <= g, i <= n}
///   g-basis:        rdf-restricted plus {V_n ∪ (h + V_n) : n <= g, h in H_n}
/// Throws when the candidate count would exceed the enumeration cap (2^20).
BasisFamily build_family(FamilyKind kind, int max_generation);
BasisFamily build_family(const std::string& name, int max_generation);

/// Per-candidate (measure, diameter) pairs sorted by measure, then diameter.
std::vector<std::pair<Rational, Rational>> family_profile(const BasisFamily& f);

}  // namespace torusdiff
