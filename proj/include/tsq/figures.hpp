#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tsq {

// Plot-ready datasets for the five figure kinds:
//   1: q, beta, rho
//   2: q, beta, rho, rho_model_i, rho_model_ii
//   3: q, rho, variance
//   4: q, rho, overflow_x<T> for each threshold T
//   5: q, rho, utilization, mm1_utilization
// Figures 1-2 walk a log grid of means; figures 3-5 walk the means that the
// storage model assigns to [rho_min, rho_max] at H = 1.5 - q.
struct FigureSpec {
  int figure_id = 1;
  std::vector<double> q_list;  // empty: per-figure default
  int points = 50;
  double mean_min = 0.1;
  double mean_max = 100.0;
  double rho_min = 0.05;
  double rho_max = 0.95;
  std::vector<std::uint64_t> thresholds = {10, 100, 1000};
};

struct FigureTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> notes;  // e.g. q values skipped for figure 3
};

std::vector<double> default_figure_q_list(int figure_id);

FigureTable build_figure(const FigureSpec& spec);

}  // namespace tsq
