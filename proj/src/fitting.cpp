#include "tsq/fitting.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "tsq/norros.hpp"
#include "tsq/solver.hpp"

namespace tsq {

namespace {

constexpr int kMaxIterations = 500;
constexpr double kDampingUp = 10.0;
constexpr double kDampingDown = 0.1;
constexpr double kInitialDamping = 1e-3;
constexpr double kMaxDamping = 1e20;
constexpr double kDefaultEta = 0.5;

double model_ii_value(double c, double eta, double d, double mu, double beta) {
  return c * std::pow(beta, -eta) + d * std::exp(-mu * beta);
}

struct LinearFit {
  double intercept;
  double slope;
};

// Ordinary least squares y = intercept + slope x.
LinearFit least_squares_line(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  const double x_mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double y_mean = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - x_mean) * (x[i] - x_mean);
    sxy += (x[i] - x_mean) * (y[i] - y_mean);
  }
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  if (*lo == *hi || !(sxx > 0.0)) {
    throw SingularFit("regressor is constant over the data; least squares is singular");
  }
  const double slope = sxy / sxx;
  return {y_mean - slope * x_mean, slope};
}

// Parameter vector in optimizer coordinates: (c, ln eta, d, ln mu).
using Theta = Eigen::Vector4d;

double half_cost(const Theta& t, std::span<const FitPoint> data) {
  const double eta = std::exp(t[1]);
  const double mu = std::exp(t[3]);
  double cost = 0.0;
  for (const auto& p : data) {
    const double r = model_ii_value(t[0], eta, t[2], mu, p.beta) - p.rho;
    cost += r * r;
  }
  return 0.5 * cost;
}

void jacobian(const Theta& t, std::span<const FitPoint> data, Eigen::MatrixXd& jac,
              Eigen::VectorXd& res) {
  const double eta = std::exp(t[1]);
  const double mu = std::exp(t[3]);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double beta = data[i].beta;
    const double power = std::pow(beta, -eta);
    const double decay = std::exp(-mu * beta);
    const auto row = static_cast<Eigen::Index>(i);
    res[row] = t[0] * power + t[2] * decay - data[i].rho;
    jac(row, 0) = power;
    jac(row, 1) = -t[0] * power * std::log(beta) * eta;
    jac(row, 2) = decay;
    jac(row, 3) = -t[2] * decay * beta * mu;
  }
}

FitReport model_ii_report(const Theta& t, std::span<const FitPoint> data, int iterations,
                          bool converged) {
  FitReport report;
  report.model_kind = ModelKind::ModelII;
  report.params = {t[0], std::exp(t[1]), t[2], std::exp(t[3])};
  report.iterations = iterations;
  report.converged = converged;
  score_fit(report, data);
  return report;
}

// Each term of Model II dominates one end of the beta range: the exponential
// at small beta, the power law at large beta.
Theta initial_theta(std::span<const FitPoint> sorted) {
  const std::size_t n = sorted.size();
  const std::size_t low_count = (n + 1) / 2;

  double d = sorted.front().rho;
  try {
    const FitReport low = fit_model_i(sorted.subspan(0, low_count));
    d = low.params[1];
  } catch (const SingularFit&) {
  }

  std::vector<double> log_beta;
  std::vector<double> log_rho;
  for (std::size_t i = n / 2; i < n; ++i) {
    if (sorted[i].rho > 0.0) {
      log_beta.push_back(std::log(sorted[i].beta));
      log_rho.push_back(std::log(sorted[i].rho));
    }
  }
  double c = sorted.back().rho;
  double eta = kDefaultEta;
  if (log_beta.size() >= 2) {
    try {
      const LinearFit line = least_squares_line(log_beta, log_rho);
      if (-line.slope > 0.0 && std::isfinite(line.slope)) {
        eta = -line.slope;
        c = std::exp(line.intercept);
      }
    } catch (const SingularFit&) {
    }
  }
  return Theta(c, std::log(eta), d, 0.0);
}

// Alternative starts: a single exponential through ln rho vs beta, and the
// Model I curve with its constant carried by a nearly flat power term.
std::vector<Theta> alternative_thetas(std::span<const FitPoint> sorted) {
  double rho_mean = 0.0;
  for (const auto& p : sorted) rho_mean += p.rho;
  rho_mean /= static_cast<double>(sorted.size());
  const double small = 1e-3 * std::max(std::abs(rho_mean), 1e-300);

  std::vector<Theta> out;
  std::vector<double> beta;
  std::vector<double> log_rho;
  for (const auto& p : sorted) {
    if (p.rho > 0.0) {
      beta.push_back(p.beta);
      log_rho.push_back(std::log(p.rho));
    }
  }
  if (beta.size() >= 2) {
    try {
      const LinearFit line = least_squares_line(beta, log_rho);
      if (line.slope < 0.0 && std::isfinite(line.intercept)) {
        out.emplace_back(small, 0.0, std::exp(line.intercept), std::log(-line.slope));
      }
    } catch (const SingularFit&) {
    }
  }
  try {
    const FitReport one = fit_model_i(sorted);
    const double c = one.params[0] > 0.0 ? one.params[0] : small;
    out.emplace_back(c, std::log(0.05), one.params[1], 0.0);
  } catch (const SingularFit&) {
  }
  return out;
}

constexpr double kLogBound = 40.0;

bool admissible(const Theta& t) {
  return t.allFinite() && std::abs(t[1]) <= kLogBound && std::abs(t[3]) <= kLogBound;
}

struct Refined {
  Theta theta;
  double cost;
  int iterations;
  bool converged;
};

Refined refine(Theta theta, std::span<const FitPoint> sorted) {
  const auto n = static_cast<Eigen::Index>(sorted.size());
  double cost = half_cost(theta, sorted);
  double lambda = kInitialDamping;
  Eigen::MatrixXd jac(n, 4);
  Eigen::VectorXd res(n);

  int iter = 0;
  while (iter < kMaxIterations) {
    jacobian(theta, sorted, jac, res);
    const Eigen::Vector4d grad = jac.transpose() * res;
    const double rmse = std::sqrt(2.0 * cost / static_cast<double>(n));
    if (grad.norm() <= 1e-8 * (1.0 + rmse)) {
      return {theta, cost, iter, true};
    }
    const Eigen::Matrix4d normal = jac.transpose() * jac;
    const double diag_floor = 1e-12 * normal.diagonal().maxCoeff();

    bool accepted = false;
    while (!accepted && iter < kMaxIterations && lambda < kMaxDamping) {
      ++iter;
      Eigen::Matrix4d damped = normal;
      for (int k = 0; k < 4; ++k) {
        damped(k, k) += lambda * std::max(normal(k, k), diag_floor);
      }
      const Eigen::Vector4d step = damped.ldlt().solve(-grad);
      const Theta trial = theta + step;
      const double trial_cost = admissible(trial) ? half_cost(trial, sorted) : cost;
      if (std::isfinite(trial_cost) && trial_cost < cost) {
        theta = trial;
        cost = trial_cost;
        lambda = std::max(lambda * kDampingDown, 1e-15);
        accepted = true;
      } else {
        lambda *= kDampingUp;
      }
    }
    if (!accepted) break;
  }
  return {theta, cost, iter, false};
}

}  // namespace

std::vector<CorrespondenceRecord> generate_correspondence(double q, double mean_min,
                                                          double mean_max, int points) {
  if (!(q > 0.5 && q < 1.0)) {
    throw DomainError("entropy index must satisfy 1/2 < q < 1");
  }
  if (!(mean_min > 0.0 && mean_min < mean_max && std::isfinite(mean_max))) {
    throw DomainError("mean grid requires 0 < mean_min < mean_max");
  }
  if (points < 2) {
    throw DomainError("mean grid requires at least 2 points");
  }
  const double hurst = hurst_from_q(q);
  const double log_lo = std::log(mean_min);
  const double log_span = std::log(mean_max) - log_lo;

  std::vector<CorrespondenceRecord> out;
  out.reserve(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) {
    double a = std::exp(log_lo + log_span * k / (points - 1));
    if (k == 0) a = mean_min;
    if (k == points - 1) a = mean_max;
    SolverResult solved;
    try {
      solved = solve_beta(q, a);
    } catch (const SolverNoConvergence& e) {
      throw SolverNoConvergence(std::string(e.what()) + " while generating mean " +
                                    std::to_string(a),
                                e.last());
    }
    out.push_back({a, solved.beta, norros_rho(a, hurst), q});
  }
  return out;
}

std::vector<FitPoint> fit_points(std::span<const CorrespondenceRecord> records) {
  std::vector<FitPoint> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    out.push_back({r.beta, r.rho});
  }
  return out;
}

std::string_view to_string(ModelKind kind) {
  return kind == ModelKind::ModelI ? "I" : "II";
}

ModelKind parse_model_kind(std::string_view text) {
  if (text == "I" || text == "1") return ModelKind::ModelI;
  if (text == "II" || text == "2") return ModelKind::ModelII;
  throw DomainError("model must be I or II (got '" + std::string(text) + "')");
}

double evaluate_fit(const FitReport& report, double beta) {
  const auto& p = report.params;
  if (report.model_kind == ModelKind::ModelI) {
    if (p.size() != 2) throw DomainError("Model I report needs 2 parameters");
    if (!(beta >= 0.0)) throw DomainError("Model I requires beta >= 0");
    return p[0] + p[1] * std::exp(-beta);
  }
  if (p.size() != 4) throw DomainError("Model II report needs 4 parameters");
  if (!(beta > 0.0)) throw DomainError("Model II requires beta > 0");
  return model_ii_value(p[0], p[1], p[2], p[3], beta);
}

void score_fit(FitReport& report, std::span<const FitPoint> data) {
  const double n = static_cast<double>(data.size());
  double rho_mean = 0.0;
  for (const auto& p : data) rho_mean += p.rho;
  rho_mean /= n;
  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (const auto& p : data) {
    const double r = evaluate_fit(report, p.beta) - p.rho;
    ss_res += r * r;
    ss_tot += (p.rho - rho_mean) * (p.rho - rho_mean);
  }
  report.rmse = std::sqrt(ss_res / n);
  if (ss_tot > 0.0) {
    report.r_squared = 1.0 - ss_res / ss_tot;
  } else {
    report.r_squared = ss_res == 0.0 ? 1.0 : 0.0;
  }
}

FitReport fit_model_i(std::span<const FitPoint> data) {
  if (data.size() < 3) {
    throw DomainError("Model I fit needs at least 3 points");
  }
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& p : data) {
    x.push_back(std::exp(-p.beta));
    y.push_back(p.rho);
  }
  const LinearFit line = least_squares_line(x, y);
  FitReport report;
  report.model_kind = ModelKind::ModelI;
  report.params = {line.intercept, line.slope};
  report.iterations = 1;
  report.converged = true;
  score_fit(report, data);
  return report;
}

FitReport fit_model_ii(std::span<const FitPoint> data) {
  if (data.size() < 5) {
    throw DomainError("Model II fit needs at least 5 points");
  }
  for (const auto& p : data) {
    if (!(p.beta > 0.0)) throw DomainError("Model II fit requires beta > 0 at every point");
  }
  std::vector<FitPoint> sorted(data.begin(), data.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const FitPoint& l, const FitPoint& r) { return l.beta < r.beta; });
  std::size_t distinct = 1;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].beta != sorted[i - 1].beta) ++distinct;
  }
  if (distinct < 4) {
    throw SingularFit("Model II needs at least 4 distinct beta values");
  }

  std::vector<Theta> starts = {initial_theta(sorted)};
  for (const Theta& t : alternative_thetas(sorted)) starts.push_back(t);

  std::optional<Refined> best;
  for (const Theta& start : starts) {
    if (!admissible(start)) continue;
    const Refined r = refine(start, sorted);
    const bool better = !best || (r.converged && !best->converged) ||
                        (r.converged == best->converged && r.cost < best->cost);
    if (better) best = r;
  }
  if (!best) {
    throw SingularFit("Model II fit found no finite starting point");
  }
  if (!best->converged) {
    throw FitNoConvergence("Model II fit did not reach the gradient tolerance in " +
                               std::to_string(best->iterations) + " iterations",
                           model_ii_report(best->theta, data, best->iterations, false));
  }
  return model_ii_report(best->theta, data, best->iterations, true);
}

}  // namespace tsq
