#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "torusdiff/certificate.hpp"
#include "torusdiff/maximal.hpp"

namespace torusdiff {

/// Exact tail P(X >= threshold) for X ~ Binomial(trials, p), by direct
/// summation of binomial terms with big-integer coefficients.
Rational binomial_tail(long trials, const Rational& p, long threshold);

/// Tail ratio of the dilated-box band count: P(X >= 4n) for
/// X ~ Binomial(n^2, 1/(n+1)). Verdict: the ratio is < 1/2. The ratio does
/// not depend on the box side lengths.
Certificate lemma31_ratio(int n);

/// Box I = prod (0, alpha_i) in R^{n^2} together with the dilation data:
/// a point of (1+1/n)I is in the exceptional set J when at least 4n of its
/// coordinates fall in the upper band [alpha_i, (1+1/n) alpha_i).
struct LemmaBoxes {
  int n = 0;
  std::vector<Rational> alphas;  // n^2 strictly positive entries
};
LemmaBoxes make_lemma_boxes(int n, std::vector<Rational> alphas);

struct ShiftResult {
  std::vector<Rational> y;  // y_i = 0 on the core, alpha_i/n on the band
  long band_count = 0;
  Rational overlap_ratio;   // ((n-1)/n)^band_count
};
/// The shift construction for x in (1+1/n)I \ J; throws with the violating
/// coordinate or count when x is outside the domain.
ShiftResult lemma32_construct(const LemmaBoxes& boxes, const std::vector<Rational>& x);

/// Certifies: x lies in y + I coordinatewise and the overlap ratio
/// |(I + y) ∩ I| / |I| exceeds the certified upper bound of e^-8.
Certificate lemma32_shift(int n, const std::vector<Rational>& alphas,
                          const std::vector<Rational>& x);

/// Single-bump construction: the normalized indicator concentrated near the
/// diagonal point (1/2, ..., 1/2) is caught by a translate of the box
/// U_n = (0, 2^-n)^n at every point of a large set E_n.
/// Default epsilon is 2^{-2n-1}; any epsilon in (0, 2^{-(n+1)}) is accepted.
Certificate prop31_certificate(int n, std::optional<Rational> epsilon = {});

/// Grid-of-bumps construction over the odd dyadic grid; verifies the mass
/// and coverage identities and sampled witness averages >= 1.
/// Default epsilon is 2^{-n^2-2n}. Supports are enumerated for n <= 3 and
/// formula-checked for n = 4, 5.
Certificate prop32_certificate(int n, std::optional<Rational> epsilon = {});

/// Finite multi-stage assembly of the grid construction: exact measure of
/// the union of the bump supports and of the tail intersections of the
/// coverage sets, with their union-bound estimates.
Certificate prop32_assemble(int stages);

/// Lemma 3.3-style grid construction attached to an admissible box
/// Q = prod (0, r_i) x T. The middle block of (L+1)^2 coordinates carries a
/// translated-grid union A and the exceptional-set complement E; both have
/// exact closed-form measures and E-membership is an exact predicate.
struct GridConstruction {
  int K = 0, L = 0, n = 0;  // n = L + 1
  ProductSet Q;
  std::vector<Rational> r;         // stored factor lengths r_1..r_k
  std::vector<Rational> beta;      // grid step per middle coordinate
  std::vector<long long> counts;   // cells per middle coordinate
  Rational tail;                   // binomial band tail for n = L+1

  int block_size() const { return n * n; }
  int block_lo() const { return K + 1; }
  int block_hi() const { return K + block_size(); }

  Rational measure_A() const;
  Rational measure_E() const;
  bool in_E(const Point& g) const;

  /// m(A ∩ (h + Q)) by per-coordinate window overlaps (exact, no
  /// materialization).
  Rational window_overlap(const Point& h) const;

  struct WitnessData {
    Point h;
    Rational avg;   // (chi_A) averaged over h + Q
    Rational diam;  // diam(h + Q)
  };
  /// Witness for g in E: first K coordinates centered on g, middle block
  /// grid origin plus the band shift, remaining coordinates centered when g
  /// is nonzero there and 0 otherwise.
  WitnessData witness_for(const Point& g) const;

  /// Explicit region with per-coordinate arc unions, when the total arc
  /// count stays under the cap.
  std::optional<ProductSet> materialize(std::size_t max_total_arcs = 300000) const;

  std::vector<Point> default_samples(int count) const;
};

std::pair<GridConstruction, Certificate> lemma33_build(
    int K, int L, const ProductSet& Q, const std::vector<Point>& samples = {});

/// Shape source for the staged assembly: must return an admissible box for
/// the given (K, L) whose diameter is at most diam_bound.
using ShapeProvider = std::function<ProductSet(int K, int L, const Rational& diam_bound)>;

/// Smallest box (0, 2^-m)^m x T meeting the diameter bound.
ProductSet default_theorem31_shape(int K, int L, const Rational& diam_bound);

/// Two-to-three stage assembly: schedule K_{n+1} = K_n + (L_n+1)^2 + 1 with
/// L_n minimal such that UB(e^-L_n) <= epsilon/2^n; exact union measure of
/// the stage sets, pairwise independence identities over the disjoint
/// coordinate blocks, and stagewise witnesses.
Certificate theorem31_assemble(const Rational& epsilon, int stages,
                               ShapeProvider provider = {});

/// Weak-type failure of the adjacent-boxes basis: exact superlevel measure
/// of M chi_{U_n} at lambda = 1/3 is at least (n+1) m(U_n).
Certificate prop41_certificate(int n);

/// delta_k lower bound for the paired-tiles basis: chi_{V_{k+2}} has maximal
/// average > 1/3 away from a null set while 1/3 > 2^k ||f||_1.
Certificate prop42_certificate(int k);

/// Re-evaluates the comparisons recorded in a certificate (computed values
/// against each other and against the bound) without re-running the
/// construction. Unknown claims throw.
bool reverify(const Certificate& cert);

}  // namespace torusdiff
