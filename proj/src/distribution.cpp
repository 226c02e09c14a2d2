#include "tsq/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tsq/errors.hpp"

namespace tsq {

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int j = 1; j <= k; ++j) {
    r = r * (n - k + j) / j;
  }
  return r;
}

}  // namespace

QueueModel::QueueModel(double q, double beta) : q_(q), beta_(beta) {
  if (!(q > 0.5 && q < 1.0)) {
    throw DomainError("entropy index must satisfy 1/2 < q < 1 (got q = " + std::to_string(q) + ")");
  }
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw DomainError("beta must be positive and finite (got beta = " + std::to_string(beta) + ")");
  }
  s_ = 1.0 / (1.0 - q);
  c_ = 1.0 / (beta * (1.0 - q));
  if (!std::isfinite(c_)) {
    throw DomainError("beta too small: 1/(beta (1-q)) overflows");
  }
  normalizer_ = hurwitz_zeta_scaled(s_, c_);
}

double log_pmf(const QueueModel& model, std::uint64_t i) {
  const double di = static_cast<double>(i);
  return -model.s() * std::log1p(di / model.c()) - std::log(model.normalizer().sum);
}

double pmf(const QueueModel& model, std::uint64_t i) { return std::exp(log_pmf(model, i)); }

double log_tail(const QueueModel& model, std::uint64_t x) {
  const double shift = static_cast<double>(x) + 1.0;
  const ScaledZeta upper = hurwitz_zeta_scaled(model.s(), model.c() + shift);
  return -model.s() * std::log1p(shift / model.c()) + std::log(upper.sum) -
         std::log(model.normalizer().sum);
}

double tail(const QueueModel& model, std::uint64_t x) { return std::exp(log_tail(model, x)); }

TailAsymptote tail_asymptote(const QueueModel& model, std::uint64_t x) {
  if (x < 1) {
    throw DomainError("tail asymptote requires x >= 1");
  }
  const double q = model.q();
  TailAsymptote out;
  out.exponent = q / (1.0 - q);
  out.log_coefficient = -model.normalizer().log_value() + std::log((1.0 - q) / q);
  out.coefficient = std::exp(out.log_coefficient);
  out.value = std::exp(out.log_coefficient - out.exponent * std::log(static_cast<double>(x)));
  return out;
}

bool moment_exists(double q, int k) {
  const double kk = static_cast<double>(k);
  // s - k > 1 is the same condition; checked too so rounding cannot hand the
  // zeta routine an exponent <= 1.
  return q > kk / (kk + 1.0) && 1.0 / (1.0 - q) - kk > 1.0;
}

double moment(const QueueModel& model, int k) {
  if (k < 1) {
    throw DomainError("moment order must be >= 1");
  }
  if (!moment_exists(model.q(), k)) {
    throw MomentDoesNotExist(k, model.q());
  }
  const double s0 = model.normalizer().sum;
  double acc = 0.0;
  for (int j = 0; j <= k; ++j) {
    const double ratio =
        j == 0 ? 1.0 : hurwitz_zeta_scaled(model.s() - j, model.c()).sum / s0;
    const double sign = ((k - j) % 2 == 0) ? 1.0 : -1.0;
    acc += sign * binomial(k, j) * ratio;
  }
  return std::pow(model.c(), k) * acc;
}

double mean(const QueueModel& model) { return moment(model, 1); }

double variance(const QueueModel& model) {
  if (!moment_exists(model.q(), 2)) {
    throw MomentDoesNotExist(2, model.q());
  }
  const double s0 = model.normalizer().sum;
  const double r1 = hurwitz_zeta_scaled(model.s() - 1.0, model.c()).sum / s0;
  const double r2 = hurwitz_zeta_scaled(model.s() - 2.0, model.c()).sum / s0;
  const double c = model.c();
  return c * c * (r2 - r1 * r1);
}

double utilization(const QueueModel& model) { return 1.0 - pmf(model, 0); }

QosReport qos_report(const QueueModel& model, std::span<const std::uint64_t> thresholds) {
  QosReport report;
  report.q = model.q();
  report.beta = model.beta();
  report.mean = mean(model);
  if (moment_exists(model.q(), 2)) {
    report.variance = variance(model);
  }
  report.p0 = pmf(model, 0);
  report.utilization = 1.0 - report.p0;
  report.tail_exponent = model.q() / (1.0 - model.q());
  report.tail_coefficient = tail_asymptote(model, 1).coefficient;

  std::vector<std::uint64_t> xs(thresholds.begin(), thresholds.end());
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  report.tail_samples.reserve(xs.size());
  for (const auto x : xs) {
    report.tail_samples.push_back({x, tail(model, x)});
  }
  return report;
}

}  // namespace tsq
