#include "torusdiff/maximal.hpp"

#include <stdexcept>

namespace torusdiff {

namespace {

bool diameter_admissible(const Region& candidate, const std::optional<Rational>& cap) {
  return !cap || candidate.diameter() < *cap;
}

}  // namespace

Rational maximal_value(const MaximalQuery& q, const Point& g) {
  Rational best(0);
  for (const auto& b : q.family.candidates) {
    if (!b.closure_contains(g)) continue;
    if (!diameter_admissible(b, q.diameter_cap)) continue;
    best = max(best, average(q.f, b).abs());
  }
  return best;
}

std::pair<Region, Rational> superlevel_set(const MaximalQuery& q, const Rational& lambda) {
  std::vector<ProductSet> pieces;
  for (const auto& b : q.family.candidates) {
    if (!diameter_admissible(b, q.diameter_cap)) continue;
    if (average(q.f, b).abs() > lambda) {
      for (const auto& p : b.pieces()) pieces.push_back(p);
    }
  }
  Region s = Region::from_pieces(std::move(pieces));
  Rational m = s.measure();
  return {std::move(s), std::move(m)};
}

Rational weak_type_ratio(const MaximalQuery& q, const Rational& lambda) {
  Rational norm = q.f.l1_norm();
  if (norm.is_zero()) throw std::domain_error("weak_type_ratio: zero-norm function");
  return lambda * superlevel_set(q, lambda).second / norm;
}

std::pair<Rational, bool> witness_average(const SimpleFunction& f, const ProductSet& shape,
                                          const Point& h, const Point& g) {
  if (shape.measure().is_zero())
    throw std::domain_error("witness_average: zero-measure shape");
  ProductSet translated = shape.translated(h);
  return {average(f, Region(translated)), translated.closure_contains(g)};
}

Certificate delta_witness_check(const DeltaWitness& w, const BasisFamily& family) {
  Certificate cert;
  cert.claim = "delta-witness";
  cert.add_param("family", std::string(family_name(family.kind)));
  cert.add_param("max_generation", static_cast<long>(family.max_generation));
  cert.add_param("k", static_cast<long>(w.k));
  cert.add_param("lambda", w.lambda);
  if (w.diameter_cap) cert.add_param("diameter_cap", *w.diameter_cap);

  MaximalQuery q{family, w.f, w.diameter_cap};
  auto [superlevel, super_measure] = superlevel_set(q, w.lambda);
  Rational m_e = w.E.measure();
  // E ⊆ superlevel decided exactly through m(E \ S) = 0.
  Rational escaped = m_e - w.E.intersect(superlevel).measure();
  Rational norm = w.f.l1_norm();
  Rational threshold = pow2(w.k) * norm;

  cert.add_computed("m_E", m_e);
  cert.add_computed("m_superlevel", super_measure);
  cert.add_computed("m_E_minus_superlevel", escaped);
  cert.add_computed("l1_norm", norm);
  cert.add_computed("lambda_m_E", w.lambda * m_e);
  cert.bound = threshold;
  cert.verdict = escaped.is_zero() && w.lambda * m_e > threshold;
  return cert;
}

}  // namespace torusdiff
