#pragma once

#include <utility>

#include "torusdiff/rational.hpp"

namespace torusdiff {

/// Certified rational bracket LB < e^x < UB with UB - LB <= 10^-digits,
/// computed from exact Taylor partial sums with a geometric remainder bound.
/// The bracket consists of adjacent points of a decimal grid fine enough to
/// pin `digits` significant digits of e^x. For x = 0 returns (1, 1).
std::pair<Rational, Rational> certified_exp_bounds(const Rational& x, int digits);

}  // namespace torusdiff
