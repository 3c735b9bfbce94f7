#include "torusdiff/rational.hpp"

#include <ostream>
#include <stdexcept>

namespace torusdiff {

Rational::Rational(long num, long den) {
  if (den == 0) throw std::domain_error("rational: zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rational::Rational(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw std::domain_error("rational: zero denominator");
  v_ = mpq_class(num) / mpq_class(den);
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("rational: division by zero");
  v_ /= o.v_;
  return *this;
}

Rational Rational::abs() const {
  return sign() < 0 ? -*this : *this;
}

std::string Rational::str() const {
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

Rational Rational::parse(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("rational: empty string");
  auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      mpz_class num(text.substr(0, slash));
      mpz_class den(text.substr(slash + 1));
      return Rational(num, den);
    }
    auto dot = text.find('.');
    if (dot == std::string::npos) return Rational(mpz_class(text), mpz_class(1));
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    if (digits.empty() || digits == "-" || digits == "+")
      throw std::invalid_argument("rational: malformed decimal");
    mpz_class num(digits);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, text.size() - dot - 1);
    return Rational(num, den);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("rational: cannot parse '" + text + "'");
  }
}

Rational pow(const Rational& base, long e) {
  if (e == 0) return Rational(1);
  bool invert = e < 0;
  unsigned long u = invert ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
  if (invert && base.is_zero()) throw std::domain_error("rational: 0^negative");
  mpz_class n, d;
  mpz_pow_ui(n.get_mpz_t(), base.num().get_mpz_t(), u);
  mpz_pow_ui(d.get_mpz_t(), base.den().get_mpz_t(), u);
  return invert ? Rational(d, n) : Rational(n, d);
}

Rational pow2(long e) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e < 0 ? -e : e));
  return e < 0 ? Rational(mpz_class(1), p) : Rational(p, mpz_class(1));
}

mpz_class floor_int(const Rational& x) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), x.num().get_mpz_t(), x.den().get_mpz_t());
  return q;
}

Rational mod1(const Rational& x) {
  return x - Rational(floor_int(x));
}

const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }
const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << r.str();
}

}  // namespace torusdiff
