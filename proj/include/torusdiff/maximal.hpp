#pragma once

#include <optional>
#include <utility>

#include "torusdiff/certificate.hpp"
#include "torusdiff/rdf_basis.hpp"
#include "torusdiff/simple_function.hpp"

namespace torusdiff {

/// Query against the maximal operator of an enumerated family. When
/// diameter_cap is set the operator is truncated to candidates with
/// diam(B) < diameter_cap (strict).
struct MaximalQuery {
  BasisFamily family;
  SimpleFunction f;
  std::optional<Rational> diameter_cap;
};

/// sup |f_B| over admissible candidates containing g in their closure.
/// The empty supremum is 0.
Rational maximal_value(const MaximalQuery& q, const Point& g);

/// Union of the admissible candidates with |f_B| > lambda together with its
/// exact measure. (Closures are replaced by the measure-equal half-open
/// regions.)
std::pair<Region, Rational> superlevel_set(const MaximalQuery& q, const Rational& lambda);

/// lambda * m({M f > lambda}) / ||f||_1; throws on zero-norm f.
Rational weak_type_ratio(const MaximalQuery& q, const Rational& lambda);

/// (average of f over h + shape, whether g lies in the closure of h + shape).
/// A valid lower-bound witness for the full translation-invariant basis when
/// the flag is true.
std::pair<Rational, bool> witness_average(const SimpleFunction& f, const ProductSet& shape,
                                          const Point& h, const Point& g);

/// Claim that E witnesses a weak-type violation by factor 2^k: every point
/// of E has M f > lambda and lambda * m(E) > 2^k * ||f||_1.
struct DeltaWitness {
  SimpleFunction f;
  Rational lambda;
  Region E;
  int k = 0;
  std::optional<Rational> diameter_cap;
};

/// Checks a delta witness against a family: E must be contained in the
/// superlevel set (up to measure zero) and the size inequality must hold.
/// On a true verdict, m(E) is a certified lower bound for delta_k (or the
/// truncated variant when diameter_cap is set). Failure is a verdict, not
/// an error.
Certificate delta_witness_check(const DeltaWitness& w, const BasisFamily& family);

}  // namespace torusdiff
