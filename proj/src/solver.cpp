#include "tsq/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tsq/distribution.hpp"
#include "tsq/special.hpp"

namespace tsq {

namespace {

constexpr int kMaxHalvings = 5;
constexpr int kMaxBisection = 400;
constexpr double kDegenerateDenominator = 1e-300;

void check_inputs(double q, double target_mean) {
  if (!(q > 0.5 && q < 1.0)) {
    throw DomainError("entropy index must satisfy 1/2 < q < 1 (got q = " + std::to_string(q) + ")");
  }
  if (!(target_mean > 0.0) || !std::isfinite(target_mean)) {
    throw DomainError("target mean must be positive and finite (got " +
                      std::to_string(target_mean) + ")");
  }
}

struct ScaledSums {
  double c;
  double lower;  // zeta~(s-1, c)
  double base;   // zeta~(s, c)
};

ScaledSums scaled_sums(double q, double beta) {
  const QueueModel model(q, beta);
  return {model.c(), hurwitz_zeta_scaled(model.s() - 1.0, model.c()).sum, model.normalizer().sum};
}

// Residual that maps evaluation failures (beta so small that c overflows)
// to "no value"; used only while probing trial points.
bool try_residual(double q, double beta, double target, double& out) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    return false;
  }
  try {
    out = mean_residual(q, beta, target);
  } catch (const DomainError&) {
    return false;
  }
  return std::isfinite(out);
}

class Solver {
 public:
  Solver(double q, double target, const SolverConfig& config)
      : q_(q), target_(target), config_(config), scale_(std::max(1.0, target)) {}

  SolverResult run() {
    const double beta0 = config_.beta0.value_or(initial_beta(target_));
    result_.beta = beta0;
    double r = mean_residual(q_, beta0, target_);
    result_.residual = std::abs(r);

    int newton_iterations = 0;
    while (newton_iterations < config_.max_iter) {
      ++newton_iterations;
      ++result_.iterations;
      const double beta = result_.beta;

      double step = 0.0;
      try {
        step = newton_step(q_, beta, target_);
      } catch (const DegenerateStep&) {
        return bisect(beta0);
      }
      if (!std::isfinite(step)) {
        return bisect(beta0);
      }
      if (std::abs(step) <= config_.tol * beta && certified(r)) {
        double r_final = 0.0;
        if (try_residual(q_, beta + step, target_, r_final) && certified(r_final)) {
          return finish(beta + step, r_final);
        }
        return finish(beta, r);
      }

      double trial = beta + step;
      double r_trial = 0.0;
      int halvings = 0;
      while (!try_residual(q_, trial, target_, r_trial) ||
             (std::abs(r_trial) > std::abs(r) && !certified(r_trial))) {
        if (halvings == kMaxHalvings) {
          return bisect(beta0);
        }
        step *= 0.5;
        trial = beta + step;
        ++halvings;
      }

      const double change = std::abs(trial - beta) / trial;
      result_.beta = trial;
      result_.residual = std::abs(r_trial);
      r = r_trial;
      if (change <= config_.tol && certified(r)) {
        return finish(trial, r);
      }
    }
    throw SolverNoConvergence("beta solver did not converge in " +
                                  std::to_string(config_.max_iter) + " iterations (q = " +
                                  std::to_string(q_) + ", A = " + std::to_string(target_) + ")",
                              result_);
  }

 private:
  bool certified(double r) const { return std::abs(r) <= config_.tol * scale_; }

  SolverResult finish(double beta, double r) {
    result_.beta = beta;
    result_.residual = std::abs(r);
    return result_;
  }

  // Geometric expansion from beta0 to a sign-changing bracket, then bisection.
  SolverResult bisect(double beta0) {
    result_.fallback_used = true;
    double lo = beta0;
    double hi = beta0;
    double r0 = 0.0;
    if (!try_residual(q_, beta0, target_, r0)) {
      throw no_bracket();
    }
    if (r0 == 0.0) {
      return finish(beta0, r0);
    }
    double r_probe = r0;
    for (int k = 0; k < kMaxBisection && (r0 > 0.0 ? r_probe > 0.0 : r_probe < 0.0); ++k) {
      ++result_.iterations;
      if (r0 > 0.0) {
        lo = hi;
        hi *= 2.0;
        if (!try_residual(q_, hi, target_, r_probe)) throw no_bracket();
      } else {
        hi = lo;
        lo *= 0.5;
        if (!try_residual(q_, lo, target_, r_probe)) throw no_bracket();
      }
    }
    if (r0 > 0.0 ? r_probe > 0.0 : r_probe < 0.0) {
      throw no_bracket();
    }

    for (int k = 0; k < kMaxBisection; ++k) {
      ++result_.iterations;
      const double mid = hi > 4.0 * lo ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
      double r_mid = 0.0;
      if (!try_residual(q_, mid, target_, r_mid)) throw no_bracket();
      if (r_mid == 0.0 || ((hi - lo) <= config_.tol * mid && certified(r_mid))) {
        return finish(mid, r_mid);
      }
      if (mid <= lo || mid >= hi) {
        break;
      }
      (r_mid > 0.0 ? lo : hi) = mid;
      result_.beta = mid;
      result_.residual = std::abs(r_mid);
    }
    throw SolverNoConvergence("bisection fallback exhausted without certifying the residual",
                              result_);
  }

  SolverNoConvergence no_bracket() const {
    return SolverNoConvergence("could not bracket the root of the mean equation (q = " +
                                   std::to_string(q_) + ", A = " + std::to_string(target_) + ")",
                               result_);
  }

  double q_;
  double target_;
  SolverConfig config_;
  double scale_;
  SolverResult result_;
};

}  // namespace

double mean_residual(double q, double beta, double target_mean) {
  check_inputs(q, target_mean);
  return mean(QueueModel(q, beta)) - target_mean;
}

double moment_condition(double q, double beta, double target_mean) {
  check_inputs(q, target_mean);
  const ScaledSums z = scaled_sums(q, beta);
  return z.c * z.lower - (z.c + target_mean) * z.base;
}

double newton_step(double q, double beta, double target_mean) {
  check_inputs(q, target_mean);
  const ScaledSums z = scaled_sums(q, beta);
  const double upper = hurwitz_zeta_scaled(1.0 / (1.0 - q) + 1.0, z.c).sum;  // zeta~(s+1, c)
  const double a = target_mean;
  const double c = z.c;
  const double numerator = c * z.lower - (c + a) * z.base;
  const double denominator = c * z.lower - (2.0 * c + a) * z.base + (a + c) * upper;
  if (!(std::abs(denominator) >= kDegenerateDenominator)) {
    throw DegenerateStep("Newton denominator vanished at beta = " + std::to_string(beta));
  }
  return numerator / (c * denominator);
}

double initial_beta(double target_mean) { return std::log1p(1.0 / target_mean); }

SolverResult solve_beta(double q, double target_mean, const SolverConfig& config) {
  check_inputs(q, target_mean);
  if (!(config.tol > 0.0)) {
    throw DomainError("solver tolerance must be positive");
  }
  if (config.max_iter < 1) {
    throw DomainError("solver max_iter must be >= 1");
  }
  if (config.beta0 && !(*config.beta0 > 0.0 && std::isfinite(*config.beta0))) {
    throw DomainError("initial beta must be positive and finite");
  }
  return Solver(q, target_mean, config).run();
}

}  // namespace tsq
