#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tsq/special.hpp"

namespace tsq {

// Maximum-entropy queue-length law for Tsallis index q and multiplier beta:
//
//   p_i = (c + i)^-s / zeta(s, c),   s = 1/(1-q),  c = 1/(beta (1-q)).
//
// Only the power-law regime 1/2 < q < 1 is representable; q = 1 (geometric,
// M/M/1) is a limit, not a member of the family.
class QueueModel {
 public:
  QueueModel(double q, double beta);

  double q() const noexcept { return q_; }
  double beta() const noexcept { return beta_; }
  double s() const noexcept { return s_; }
  double c() const noexcept { return c_; }

  // zeta(s, c) with the c^-s factor removed, shared by every metric.
  const ScaledZeta& normalizer() const noexcept { return normalizer_; }

 private:
  double q_;
  double beta_;
  double s_;
  double c_;
  ScaledZeta normalizer_;
};

double pmf(const QueueModel& model, std::uint64_t i);
double log_pmf(const QueueModel& model, std::uint64_t i);

// P(i > x) = zeta(s, c + x + 1) / zeta(s, c)
double tail(const QueueModel& model, std::uint64_t x);
double log_tail(const QueueModel& model, std::uint64_t x);

struct TailAsymptote {
  double exponent = 0.0;         // q / (1-q)
  double coefficient = 0.0;      // (1/zeta(s,c)) (1-q)/q, may be +inf when q -> 1
  double log_coefficient = 0.0;
  double value = 0.0;            // coefficient * x^-exponent
};

// Large-x power law P(i > x) ~ B x^{-q/(1-q)}; requires x >= 1.
TailAsymptote tail_asymptote(const QueueModel& model, std::uint64_t x);

double mean(const QueueModel& model);

// E[i^k] from the binomial expansion of i = (c+i) - c into zeta(s-j, c).
// Throws MomentDoesNotExist when q <= k/(k+1).
double moment(const QueueModel& model, int k);

// Throws MomentDoesNotExist when q <= 2/3.
double variance(const QueueModel& model);

// 1 - p_0
double utilization(const QueueModel& model);

bool moment_exists(double q, int k);

struct TailSample {
  std::uint64_t x = 0;
  double probability = 0.0;
};

struct QosReport {
  double q = 0.0;
  double beta = 0.0;
  double mean = 0.0;
  std::optional<double> variance;
  double utilization = 0.0;
  double p0 = 0.0;
  double tail_exponent = 0.0;
  double tail_coefficient = 0.0;
  std::vector<TailSample> tail_samples;  // ascending x, strictly decreasing probability
};

// Thresholds are sorted and de-duplicated.
QosReport qos_report(const QueueModel& model, std::span<const std::uint64_t> thresholds);

}  // namespace tsq
