#include "torusdiff/exp_bounds.hpp"

#include <stdexcept>

namespace torusdiff {

namespace {

// Largest e with 10^e <= v, for v > 0.
long decimal_exponent(const Rational& v) {
  const Rational one(1), ten(10);
  if (v >= one) {
    long e = 0;
    Rational w = v;
    while (w >= ten) {
      w /= ten;
      ++e;
    }
    return e;
  }
  long e = -1;
  Rational w = v * ten;
  while (w < one) {
    w *= ten;
    --e;
  }
  return e;
}

Rational pow10(long e) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(e));
  return Rational(p, mpz_class(1));
}

}  // namespace

std::pair<Rational, Rational> certified_exp_bounds(const Rational& x, int digits) {
  if (digits < 1) throw std::invalid_argument("certified_exp_bounds: digits must be >= 1");
  if (x.is_zero()) return {Rational(1), Rational(1)};

  Rational sum(1), term(1);
  Rational ax = x.abs(), abs_term(1);
  long k = 0;
  // Grow the partial sum until the bracket pins a single decimal grid cell.
  // e^x is irrational for rational x != 0, so this terminates.
  while (true) {
    for (int step = 0; step < 8; ++step) {
      ++k;
      term *= x / Rational(k);
      abs_term *= ax / Rational(k);
      sum += term;
    }
    if (Rational(k + 2) <= ax) continue;  // remainder bound needs k+2 > |x|
    Rational rem = abs_term * ax / Rational(k + 1) * Rational(k + 2) / (Rational(k + 2) - ax);
    Rational lo = sum - rem, hi = sum + rem;
    if (lo.sign() <= 0) continue;
    long e_lo = decimal_exponent(lo);
    if (e_lo != decimal_exponent(hi)) continue;
    long d = digits + (e_lo < -1 ? -1 - e_lo : 0);
    Rational scale = pow10(d);
    mpz_class f_lo = floor_int(lo * scale);
    if (f_lo != floor_int(hi * scale)) continue;
    return {Rational(f_lo, mpz_class(1)) / scale,
            Rational(f_lo + 1, mpz_class(1)) / scale};
  }
}

}  // namespace torusdiff
