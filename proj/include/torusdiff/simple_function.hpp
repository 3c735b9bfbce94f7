#pragma once

#include <utility>
#include <vector>

#include "torusdiff/torus.hpp"

namespace torusdiff {

/// Finite rational linear combination of indicators of product sets — the
/// only function class the engine integrates.
class SimpleFunction {
public:
  struct Term {
    Rational coeff;
    ProductSet support;
    friend bool operator==(const Term&, const Term&) = default;
  };

  SimpleFunction() = default;
  static SimpleFunction from_terms(std::vector<Term> terms);
  static SimpleFunction indicator(const ProductSet& s);
  static SimpleFunction scaled_indicator(const Rational& c, const ProductSet& s);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  SimpleFunction plus(const SimpleFunction& o) const;
  SimpleFunction scaled(const Rational& c) const;

  Rational value_at(const Point& g) const;

  /// Exact L1 norm via the common refinement of all support boundaries.
  Rational l1_norm() const;

  /// Exact (min, max) of the attained values (the refinement cells all have
  /// positive measure, so every cell value is attained on positive measure).
  std::pair<Rational, Rational> value_range() const;

  friend bool operator==(const SimpleFunction&, const SimpleFunction&) = default;

private:
  std::vector<Term> terms_;  // nonzero coefficients, non-empty supports
};

/// Integral of f over r: sum of coeff * m(support ∩ r).
Rational integrate(const SimpleFunction& f, const Region& r);

/// Average f_r = integrate(f, r) / m(r); throws on zero-measure regions.
Rational average(const SimpleFunction& f, const Region& r);

}  // namespace torusdiff
