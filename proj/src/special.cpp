#include "tsq/special.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "tsq/errors.hpp"

namespace tsq {

namespace {

// B_{2k} / (2k)! for k = 1..6
constexpr std::array<double, 6> kBernoulliOverFactorial = {
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
};

// |B_14| / 14!, the first omitted correction
constexpr double kFirstOmitted = 1.0 / 74724249600.0;

constexpr double kCorrectionTarget = 1e-15;
constexpr double kNegligible = 1e-17;
constexpr double kLogDelegationThreshold = 700.0;

void check_args(double s, double a) {
  if (!(s > 1.0) || !std::isfinite(s)) {
    throw DomainError("hurwitz zeta requires s > 1 (got s = " + std::to_string(s) + ")");
  }
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw DomainError("hurwitz zeta requires a > 0 (got a = " + std::to_string(a) + ")");
  }
}

// Smallest a + N for which the B_14 term, relative to the integral tail
// (a+N)^{1-s}/(s-1), drops below kCorrectionTarget.
double required_shift(double s) {
  double log_rising = 0.0;  // ln[(s-1) s (s+1) ... (s+12)]
  for (int j = -1; j <= 12; ++j) {
    log_rising += std::log(s + j);
  }
  return std::exp((std::log(kFirstOmitted) + log_rising - std::log(kCorrectionTarget)) / 14.0);
}

struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      carry += (sum - t) + x;
    } else {
      carry += (x - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + carry; }
};

}  // namespace

double ScaledZeta::log_value() const { return -s * std::log(a) + std::log(sum); }

ScaledZeta hurwitz_zeta_scaled(double s, double a) {
  check_args(s, a);

  const double shift = required_shift(s);
  const double n_direct = shift > a ? std::ceil(shift - a) : 0.0;
  const long long terms = static_cast<long long>(n_direct);

  CompensatedSum total;
  for (long long n = 0; n < terms; ++n) {
    const double dn = static_cast<double>(n);
    const double w = std::exp(-s * std::log1p(dn / a));
    // Everything from n on is bounded by w * (1 + (a+n)/(s-1)).
    if (w * (1.0 + (a + dn) / (s - 1.0)) < kNegligible * total.value()) {
      return {s, a, total.value()};
    }
    total.add(w);
  }

  const double base = a + n_direct;
  const double w_base = std::exp(-s * std::log1p(n_direct / a));
  if (w_base > 0.0) {
    double rising = s;  // s (s+1) ... (s+2k-2)
    double inv_pow = 1.0 / base;  // base^-(2k-1)
    const double inv_sq = inv_pow * inv_pow;
    CompensatedSum corrections;
    corrections.add(base / (s - 1.0));
    corrections.add(0.5);
    for (std::size_t k = 0; k < kBernoulliOverFactorial.size(); ++k) {
      corrections.add(kBernoulliOverFactorial[k] * rising * inv_pow);
      const double m = 2.0 * static_cast<double>(k + 1);
      rising *= (s + m - 1.0) * (s + m);
      inv_pow *= inv_sq;
    }
    total.add(w_base * corrections.value());
  }
  return {s, a, total.value()};
}

double log_hurwitz_zeta(double s, double a) { return hurwitz_zeta_scaled(s, a).log_value(); }

double hurwitz_zeta(double s, double a) {
  const ScaledZeta z = hurwitz_zeta_scaled(s, a);
  const double value =
      s > kLogDelegationThreshold ? std::exp(z.log_value()) : std::pow(a, -s) * z.sum;
  if (!std::isnormal(value)) {
    throw std::range_error("hurwitz zeta(" + std::to_string(s) + ", " + std::to_string(a) +
                           ") is not representable; use log_hurwitz_zeta");
  }
  return value;
}

double hurwitz_zeta_da(double s, double a) {
  check_args(s, a);
  return -s * hurwitz_zeta(s + 1.0, a);
}

}  // namespace tsq
