#pragma once

namespace tsq {

// Fractional-Brownian storage model: offered load rho with Hurst index H.
// H = 0.5 is admitted as the M/M/1 boundary.
struct NorrosInput {
  double rho;
  double hurst;

  NorrosInput(double rho, double hurst);
};

// N = rho^{1/(2(1-H))} / (1-rho)^{H/(1-H)}
double norros_mean(const NorrosInput& input);
double norros_mean(double rho, double hurst);

// Inverse of norros_mean at fixed H. Solves
//   g(r) = r^{2H} Y + r - 1 = 0,  r = 1 - rho,  Y = N^{2(1-H)}
// by bisection on (0, 1) followed by two Newton polish steps.
double norros_rho(double mean, double hurst);

// q = 1.5 - H, defined on 0.5 <= H < 1
double q_from_hurst(double hurst);
// H = 1.5 - q, defined on 1/2 < q <= 1
double hurst_from_q(double q);

}  // namespace tsq
