#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tsq/errors.hpp"

namespace tsq {

// One point of the (A, beta, rho) correspondence at fixed q: beta solves the
// maximum-entropy mean equation for A, rho inverts the storage model for A
// at H = 1.5 - q.
struct CorrespondenceRecord {
  double mean = 0.0;
  double beta = 0.0;
  double rho = 0.0;
  double q = 0.0;
};

// Records on a log-spaced grid of `points` means in [mean_min, mean_max],
// ascending in mean. Propagates SolverNoConvergence (message names the mean).
std::vector<CorrespondenceRecord> generate_correspondence(double q, double mean_min,
                                                          double mean_max, int points);

struct FitPoint {
  double beta = 0.0;
  double rho = 0.0;
};

std::vector<FitPoint> fit_points(std::span<const CorrespondenceRecord> records);

enum class ModelKind { ModelI, ModelII };

std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view text);

// Model I:  rho = a + b e^{-beta}                  params = {a, b}
// Model II: rho = c beta^{-eta} + d e^{-mu beta}   params = {c, eta, d, mu}
struct FitReport {
  ModelKind model_kind = ModelKind::ModelI;
  std::vector<double> params;
  double rmse = 0.0;
  double r_squared = 0.0;
  int iterations = 0;
  bool converged = false;
};

class FitNoConvergence : public NoConvergence {
 public:
  FitNoConvergence(const std::string& what, FitReport best)
      : NoConvergence(what), best_(std::move(best)) {}
  const FitReport& best() const noexcept { return best_; }

 private:
  FitReport best_;
};

// Closed-form least squares on the regressor e^{-beta}. Needs >= 3 points.
FitReport fit_model_i(std::span<const FitPoint> data);

// Damped Gauss-Newton in (c, ln eta, d, ln mu). Needs >= 5 points, beta > 0.
FitReport fit_model_ii(std::span<const FitPoint> data);

double evaluate_fit(const FitReport& report, double beta);

// Sum-of-squares summary of `report` over `data`.
void score_fit(FitReport& report, std::span<const FitPoint> data);

}  // namespace tsq
