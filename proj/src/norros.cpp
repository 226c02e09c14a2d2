#include "tsq/norros.hpp"

#include <cmath>
#include <string>

#include "tsq/errors.hpp"

namespace tsq {

namespace {

void check_hurst(double hurst) {
  if (!(hurst >= 0.5 && hurst < 1.0)) {
    throw DomainError("Hurst index must satisfy 0.5 <= H < 1 (got H = " + std::to_string(hurst) +
                      ")");
  }
}

constexpr double kBisectionWidth = 1e-12;

}  // namespace

NorrosInput::NorrosInput(double rho_in, double hurst_in) : rho(rho_in), hurst(hurst_in) {
  if (!(rho > 0.0 && rho < 1.0)) {
    throw DomainError("traffic intensity must satisfy 0 < rho < 1 (got rho = " +
                      std::to_string(rho) + ")");
  }
  check_hurst(hurst);
}

double norros_mean(const NorrosInput& input) {
  const double h = input.hurst;
  const double log_mean = std::log(input.rho) / (2.0 * (1.0 - h)) -
                          h / (1.0 - h) * std::log1p(-input.rho);
  return std::exp(log_mean);
}

double norros_mean(double rho, double hurst) { return norros_mean(NorrosInput(rho, hurst)); }

double norros_rho(double mean, double hurst) {
  check_hurst(hurst);
  if (!(mean > 0.0) || !std::isfinite(mean)) {
    throw DomainError("mean queue size must be positive and finite (got " + std::to_string(mean) +
                      ")");
  }
  const double y = std::pow(mean, 2.0 * (1.0 - hurst));
  const double two_h = 2.0 * hurst;
  auto g = [&](double r) { return std::pow(r, two_h) * y + r - 1.0; };
  auto dg = [&](double r) { return two_h * std::pow(r, two_h - 1.0) * y + 1.0; };

  // g(0) = -1 < 0 < g(1) = Y
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > kBisectionWidth) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  double r = 0.5 * (lo + hi);
  for (int k = 0; k < 2; ++k) {
    const double next = r - g(r) / dg(r);
    if (next > 0.0 && next < 1.0) r = next;
  }
  return 1.0 - r;
}

double q_from_hurst(double hurst) {
  check_hurst(hurst);
  return 1.5 - hurst;
}

double hurst_from_q(double q) {
  if (!(q > 0.5 && q <= 1.0)) {
    throw DomainError("entropy index must satisfy 1/2 < q <= 1 (got q = " + std::to_string(q) +
                      ")");
  }
  return 1.5 - q;
}

}  // namespace tsq
