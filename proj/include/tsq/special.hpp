#pragma once

namespace tsq {

// Hurwitz zeta  zeta(s, a) = sum_{n>=0} (n + a)^-s  for real s > 1, a > 0.
//
// All evaluation goes through a scaled Euler-Maclaurin sum with the leading
// term a^-s factored out, so the scaled value is always O(1)..O(a/(s-1)) and
// never underflows, however large s gets.

struct ScaledZeta {
  double s = 0.0;
  double a = 0.0;
  // zeta(s, a) == a^-s * sum
  double sum = 0.0;

  double log_value() const;
};

ScaledZeta hurwitz_zeta_scaled(double s, double a);

// Throws DomainError when s <= 1 or a <= 0, std::range_error when the
// result does not fit in a normal double.
double hurwitz_zeta(double s, double a);

double log_hurwitz_zeta(double s, double a);

// d zeta(s, a) / da = -s zeta(s + 1, a)
double hurwitz_zeta_da(double s, double a);

}  // namespace tsq
