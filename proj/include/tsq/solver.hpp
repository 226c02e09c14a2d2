#pragma once

#include <optional>
#include <string>

#include "tsq/errors.hpp"

namespace tsq {

struct SolverConfig {
  std::optional<double> beta0;  // default: ln((A+1)/A), the exact q -> 1 answer
  double tol = 1e-10;           // relative change in beta
  int max_iter = 100;
};

struct SolverResult {
  double beta = 0.0;
  int iterations = 0;
  double residual = 0.0;  // |mean(q, beta) - A|
  bool fallback_used = false;
};

// Raised by solve_beta; carries the last iterate.
class SolverNoConvergence : public NoConvergence {
 public:
  SolverNoConvergence(const std::string& what, SolverResult last)
      : NoConvergence(what), last_(last) {}
  const SolverResult& last() const noexcept { return last_; }

 private:
  SolverResult last_;
};

// mean(QueueModel(q, beta)) - A; strictly decreasing in beta.
double mean_residual(double q, double beta, double target_mean);

// F(beta) = sum_i (i - A) [1 + beta (1-q) i]^{1/(q-1)}
//         = c zeta~(s-1, c) - (c + A) zeta~(s, c)
// with zeta~ the scaled zeta sums (the c^-s factors cancel exactly). Same zero
// and sign as mean_residual; this is the function the closed-form Newton
// step linearizes.
double moment_condition(double q, double beta, double target_mean);

// Closed-form Newton increment -F/F' for F = moment_condition, assembled
// from zeta(s-1, c), zeta(s, c) and zeta(s+1, c). Throws DegenerateStep when
// the denominator (common c^-s factor removed) is below 1e-300 in magnitude
// or not finite.
double newton_step(double q, double beta, double target_mean);

double initial_beta(double target_mean);

SolverResult solve_beta(double q, double target_mean, const SolverConfig& config = {});

}  // namespace tsq
