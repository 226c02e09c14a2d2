#include "tsq/figures.hpp"

#include <cmath>

#include "tsq/distribution.hpp"
#include "tsq/errors.hpp"
#include "tsq/fitting.hpp"
#include "tsq/norros.hpp"

namespace tsq {

namespace {

void check_spec(const FigureSpec& spec, const std::vector<double>& qs) {
  if (spec.figure_id < 1 || spec.figure_id > 5) {
    throw DomainError("figure id must be 1..5 (got " + std::to_string(spec.figure_id) + ")");
  }
  if (qs.empty()) {
    throw DomainError("figure needs at least one q value");
  }
  for (const double q : qs) {
    if (!(q > 0.5 && q < 1.0)) {
      throw DomainError("figure q values must lie in (1/2, 1) (got " + std::to_string(q) + ")");
    }
  }
  if (spec.points < 2) {
    throw DomainError("figure needs at least 2 points");
  }
  if (!(spec.rho_min > 0.0 && spec.rho_min < spec.rho_max && spec.rho_max < 1.0)) {
    throw DomainError("figure rho range must satisfy 0 < rho_min < rho_max < 1");
  }
}

std::vector<CorrespondenceRecord> rho_walk(double q, const FigureSpec& spec) {
  const double hurst = hurst_from_q(q);
  return generate_correspondence(q, norros_mean(spec.rho_min, hurst),
                                 norros_mean(spec.rho_max, hurst), spec.points);
}

}  // namespace

std::vector<double> default_figure_q_list(int figure_id) {
  if (figure_id == 3) return {0.7, 0.8, 0.9};
  return {0.6, 0.7, 0.8, 0.9};
}

FigureTable build_figure(const FigureSpec& spec) {
  const std::vector<double> qs =
      spec.q_list.empty() ? default_figure_q_list(spec.figure_id) : spec.q_list;
  check_spec(spec, qs);

  FigureTable table;
  switch (spec.figure_id) {
    case 1:
      table.columns = {"q", "beta", "rho"};
      break;
    case 2:
      table.columns = {"q", "beta", "rho", "rho_model_i", "rho_model_ii"};
      break;
    case 3:
      table.columns = {"q", "rho", "variance"};
      break;
    case 4:
      table.columns = {"q", "rho"};
      for (const auto x : spec.thresholds) table.columns.push_back("overflow_x" + std::to_string(x));
      break;
    default:
      table.columns = {"q", "rho", "utilization", "mm1_utilization"};
      break;
  }

  for (const double q : qs) {
    if (spec.figure_id == 1 || spec.figure_id == 2) {
      const auto records = generate_correspondence(q, spec.mean_min, spec.mean_max, spec.points);
      if (spec.figure_id == 1) {
        for (const auto& r : records) table.rows.push_back({q, r.beta, r.rho});
        continue;
      }
      const auto pts = fit_points(records);
      const FitReport model_i = fit_model_i(pts);
      const FitReport model_ii = fit_model_ii(pts);
      for (const auto& r : records) {
        table.rows.push_back(
            {q, r.beta, r.rho, evaluate_fit(model_i, r.beta), evaluate_fit(model_ii, r.beta)});
      }
      continue;
    }

    if (spec.figure_id == 3 && !moment_exists(q, 2)) {
      table.notes.push_back("q = " + std::to_string(q) +
                            " skipped: variance requires q > 2/3");
      continue;
    }
    for (const auto& r : rho_walk(q, spec)) {
      const QueueModel model(q, r.beta);
      switch (spec.figure_id) {
        case 3:
          table.rows.push_back({q, r.rho, variance(model)});
          break;
        case 4: {
          std::vector<double> row = {q, r.rho};
          for (const auto x : spec.thresholds) row.push_back(tail(model, x));
          table.rows.push_back(std::move(row));
          break;
        }
        default:
          table.rows.push_back({q, r.rho, utilization(model), r.rho});
          break;
      }
    }
  }
  return table;
}

}  // namespace tsq
