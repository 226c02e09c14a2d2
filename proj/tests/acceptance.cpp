// Acceptance suite: one PASS/FAIL line per criterion.
//   tsq_acceptance                 run all criteria
//   tsq_acceptance --criterion N   run criterion N only
// Exit status is 0 only when every selected criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "oracles.hpp"
#include "tsq/cli.hpp"
#include "tsq/correspondence_csv.hpp"
#include "tsq/distribution.hpp"
#include "tsq/errors.hpp"
#include "tsq/figures.hpp"
#include "tsq/fitting.hpp"
#include "tsq/norros.hpp"
#include "tsq/solver.hpp"
#include "tsq/special.hpp"

namespace {

using oracle::relative_error;

// Tolerances and runtime budgets.
constexpr double kZetaTol = 1e-12;
constexpr double kNormalizationTol = 1e-10;
constexpr double kMomentTol = 1e-8;
constexpr double kGeometricPmfTol = 1e-2;
constexpr double kGeometricSlopeTol = 0.01;
constexpr double kLn2Tol = 0.02;
constexpr double kAsymptoteBand = 0.02;
constexpr double kExponentTol = 0.01;
constexpr double kDivergenceRatio = 1.1;
constexpr double kRoundTripTol = 1e-8;
constexpr double kStepTol = 1e-6;
constexpr double kNorrosTol = 1e-10;
constexpr double kRecoveryTol = 1e-6;

const double kQGrid[] = {0.55, 0.6, 0.7, 0.75, 0.8, 0.9, 0.95};
const double kBetaGrid[] = {0.1, 0.5, 1.0, 2.0, 5.0};

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(const char* pattern, double value) {
  char buf[128];
  std::snprintf(buf, sizeof buf, pattern, value);
  return buf;
}

Outcome zeta_correctness() {
  Outcome o;
  const double pi = std::numbers::pi;
  const double e2 = relative_error(tsq::hurwitz_zeta(2, 1), pi * pi / 6);
  const double e3 = relative_error(tsq::hurwitz_zeta(3, 1), oracle::kApery);
  const double e4 = relative_error(tsq::hurwitz_zeta(4, 1), std::pow(pi, 4) / 90);
  o.require(e2 <= kZetaTol, fmt("zeta(2) rel err %.3g", e2));
  o.require(e3 <= kZetaTol, fmt("zeta(3) rel err %.3g", e3));
  o.require(e4 <= kZetaTol, fmt("zeta(4) rel err %.3g", e4));
  double worst = 0.0;
  int points = 0;
  for (const double s : {1.5, 2.0, 3.0, 5.0, 10.0, 50.0}) {
    for (const double a : {0.1, 0.5, 1.0, 4.0, 100.0}) {
      const double lhs = tsq::hurwitz_zeta(s, a);
      const double rhs = std::pow(a, -s) + tsq::hurwitz_zeta(s, a + 1);
      worst = std::max(worst, relative_error(lhs, rhs));
      ++points;
    }
  }
  o.require(points == 30, "grid size");
  o.require(worst <= kZetaTol, fmt("shift identity rel err %.3g", worst));
  if (o.pass) o.detail = fmt("worst shift-identity error %.2g over 30 points", worst);
  return o;
}

Outcome normalization() {
  Outcome o;
  double worst = 0.0;
  for (const double q : kQGrid) {
    for (const double beta : kBetaGrid) {
      const tsq::QueueModel model(q, beta);
      for (const std::uint64_t m : {0u, 10u, 1000u}) {
        double sum = 0.0;
        for (std::uint64_t i = 0; i <= m; ++i) sum += tsq::pmf(model, i);
        worst = std::max(worst, std::abs(sum + tsq::tail(model, m) - 1.0));
      }
    }
  }
  o.require(worst <= kNormalizationTol, fmt("max |sum + tail - 1| = %.3g", worst));
  if (o.pass) o.detail = fmt("max |sum + tail - 1| = %.2g", worst);
  return o;
}

Outcome moments_vs_bruteforce() {
  Outcome o;
  double worst = 0.0;
  for (const auto& [q, beta] : {std::pair{0.75, 1.0}, std::pair{0.8, 0.5}, std::pair{0.9, 2.0}}) {
    const tsq::QueueModel model(q, beta);
    const auto sums = oracle::moment_bruteforce(q, beta, 1000000);
    const double em = relative_error(tsq::mean(model), sums.mean());
    const double ev = relative_error(tsq::variance(model), sums.variance());
    worst = std::max({worst, em, ev});
    o.require(em <= kMomentTol, fmt("mean rel err %.3g", em));
    o.require(ev <= kMomentTol, fmt("variance rel err %.3g", ev));
  }
  if (o.pass) o.detail = fmt("worst rel err %.2g", worst);
  return o;
}

Outcome mm1_recovery() {
  Outcome o;
  const double q = 0.999;
  const double beta = 0.5;
  const tsq::QueueModel model(q, beta);
  const oracle::Geometric geo(beta);
  double pmf_err = 0.0;
  for (std::uint64_t i = 0; i <= 200; ++i) {
    pmf_err = std::max(pmf_err, std::abs(tsq::pmf(model, i) - geo.pmf(i)));
  }
  o.require(pmf_err <= kGeometricPmfTol, fmt("pmf abs err %.3g", pmf_err));

  // least-squares slope of ln tail(x) on x = 10..50
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::uint64_t x = 10; x <= 50; ++x) {
    xs.push_back(static_cast<double>(x));
    ys.push_back(tsq::log_tail(model, x));
  }
  const double xm = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  const double ym = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - xm) * (xs[k] - xm);
    sxy += (xs[k] - xm) * (ys[k] - ym);
  }
  const double slope = sxy / sxx;
  const double slope_err = relative_error(slope, -beta);
  o.require(slope_err <= kGeometricSlopeTol,
            fmt("ln tail slope %.5f", slope) + fmt(" vs -beta, rel err %.4f", slope_err));

  const double b = tsq::solve_beta(q, 1.0).beta;
  const double ln2_err = relative_error(b, std::log(2.0));
  o.require(ln2_err <= kLn2Tol, fmt("solve_beta(0.999, 1) rel err %.3g", ln2_err));
  if (o.pass) o.detail = fmt("slope %.5f", slope);
  return o;
}

Outcome power_law_tail() {
  Outcome o;
  const tsq::QueueModel model(0.75, 1.0);
  const double x = 1e6;
  const auto asym = tsq::tail_asymptote(model, static_cast<std::uint64_t>(x));
  const double ratio = tsq::tail(model, static_cast<std::uint64_t>(x)) /
                       (asym.coefficient * std::pow(x, -3.0));
  o.require(std::abs(ratio - 1.0) <= kAsymptoteBand, fmt("tail/asymptote = %.6f", ratio));
  const double slope = std::log2(tsq::tail(model, 1000000) / tsq::tail(model, 2000000));
  o.require(relative_error(slope, 3.0) <= kExponentTol, fmt("dyadic exponent %.6f", slope));
  if (o.pass) o.detail = fmt("tail/asymptote %.6f", ratio) + fmt(", dyadic exponent %.6f", slope);
  return o;
}

Outcome moment_frontier() {
  Outcome o;
  const std::vector<std::uint64_t> cuts = {1000, 10000, 100000, 1000000};
  int infeasible = 0;
  for (const int k : {1, 2, 3}) {
    for (const double q : {0.55, 0.6, 2.0 / 3.0, 0.7, 0.75, 0.8}) {
      const bool exists = q > k / (k + 1.0);
      bool raised = false;
      try {
        (void)tsq::moment(tsq::QueueModel(q, 1.0), k);
      } catch (const tsq::MomentDoesNotExist&) {
        raised = true;
      }
      const std::string where = "k=" + std::to_string(k) + fmt(", q=%.4g", q);
      o.require(raised == !exists, "raise mismatch at " + where);
      if (!exists) {
        ++infeasible;
        const auto sums = oracle::moment_partial_sums(q, 1.0, k, cuts);
        for (std::size_t j = 1; j < sums.size(); ++j) {
          o.require(sums[j] / sums[j - 1] >= kDivergenceRatio, "partial sums settle at " + where);
        }
      }
    }
  }
  if (o.pass) o.detail = std::to_string(infeasible) + " infeasible cells diverge";
  return o;
}

Outcome solver_round_trip() {
  Outcome o;
  double worst = 0.0;
  for (const double q : kQGrid) {
    for (const double beta : kBetaGrid) {
      const double a = tsq::mean(tsq::QueueModel(q, beta));
      worst = std::max(worst, relative_error(tsq::solve_beta(q, a).beta, beta));
    }
  }
  o.require(worst <= kRoundTripTol, fmt("round trip rel err %.3g", worst));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> q_dist(0.55, 0.95);
  std::uniform_real_distribution<double> log_beta(std::log(0.1), std::log(5.0));
  std::uniform_real_distribution<double> offset(1.3, 2.0);
  double step_worst = 0.0;
  for (int sample = 0; sample < 10; ++sample) {
    const double q = q_dist(rng);
    const double beta = std::exp(log_beta(rng));
    const double off = offset(rng);
    const double target = tsq::mean(tsq::QueueModel(q, sample % 2 ? beta * off : beta / off));
    const auto f = [&](double b) { return tsq::moment_condition(q, b, target); };
    const double fd = -f(beta) / oracle::central_difference(f, beta, 1e-5 * beta);
    step_worst = std::max(step_worst, relative_error(tsq::newton_step(q, beta, target), fd));
  }
  o.require(step_worst <= kStepTol, fmt("closed-form step vs finite difference %.3g", step_worst));
  if (o.pass) {
    o.detail = fmt("round trip %.2g", worst) + fmt(", step agreement %.2g", step_worst);
  }
  return o;
}

Outcome norros_inversion() {
  Outcome o;
  double worst = 0.0;
  for (const double h : {0.5, 0.6, 0.75, 0.9}) {
    for (int k = 1; k <= 9; ++k) {
      const double rho = 0.1 * k;
      worst = std::max(worst, std::abs(tsq::norros_rho(tsq::norros_mean(rho, h), h) - rho));
    }
  }
  o.require(worst <= kNorrosTol, fmt("round trip abs err %.3g", worst));
  const double n = tsq::norros_mean(0.5, 0.75);
  o.require(std::abs(n - 2.0) <= 1e-12, fmt("norros_mean(0.5, 0.75) = %.15g", n));
  const double back = tsq::norros_rho(2.0, 0.75);
  o.require(std::abs(back - 0.5) <= kNorrosTol, fmt("norros_rho(2, 0.75) = %.15g", back));
  if (o.pass) o.detail = fmt("round trip %.2g", worst);
  return o;
}

Outcome fit_ordering() {
  Outcome o;
  std::string ratios;
  for (const double q : {0.6, 0.7, 0.8, 0.9}) {
    const auto data = tsq::fit_points(tsq::generate_correspondence(q, 0.1, 100.0, 50));
    const auto one = tsq::fit_model_i(data);
    const auto two = tsq::fit_model_ii(data);
    o.require(two.rmse <= one.rmse, fmt("q=%.2g: model II rmse above model I", q));
    ratios += (ratios.empty() ? "" : " ") + fmt("%.3g", two.rmse / one.rmse);
  }

  std::vector<tsq::FitPoint> lin;
  for (int k = 0; k < 50; ++k) {
    const double beta = 0.1 + 4.9 * k / 49.0;
    lin.push_back({beta, 0.2 + 0.5 * std::exp(-beta)});
  }
  const auto one = tsq::fit_model_i(lin);
  o.require(std::abs(one.params[0] - 0.2) <= kRecoveryTol && std::abs(one.params[1] - 0.5) <= kRecoveryTol,
            "model I recovery");

  std::vector<tsq::FitPoint> nonlin;
  for (int k = 0; k < 50; ++k) {
    const double beta = 0.05 * std::pow(200.0, k / 49.0);
    nonlin.push_back({beta, 0.1 * std::pow(beta, -1.5) + 0.6 * std::exp(-2.0 * beta)});
  }
  const auto two = tsq::fit_model_ii(nonlin);
  const double truth[] = {0.1, 1.5, 0.6, 2.0};
  double worst = 0.0;
  for (int j = 0; j < 4; ++j) worst = std::max(worst, std::abs(two.params[j] - truth[j]));
  o.require(worst <= kRecoveryTol, fmt("model II recovery err %.3g", worst));
  if (o.pass) o.detail = "rmse II/I = " + ratios + fmt(", recovery err %.2g", worst);
  return o;
}

Outcome utilization_transition() {
  Outcome o;
  tsq::FigureSpec spec;
  spec.figure_id = 5;
  spec.q_list = {0.6};
  const auto table = tsq::build_figure(spec);
  const auto col = [&](const std::string& name) {
    return static_cast<std::size_t>(
        std::find(table.columns.begin(), table.columns.end(), name) - table.columns.begin());
  };
  const std::size_t u = col("utilization");
  const std::size_t r = col("rho");
  int changes = 0;
  double crossing = 0.0;
  for (std::size_t k = 1; k < table.rows.size(); ++k) {
    const bool before = table.rows[k - 1][u] < table.rows[k - 1][r];
    const bool after = table.rows[k][u] < table.rows[k][r];
    if (before != after) {
      ++changes;
      crossing = table.rows[k][r];
    }
  }
  o.require(changes >= 1, "no sign change of utilization - rho");
  o.require(table.rows.front()[u] < table.rows.front()[r], "low end not below rho");
  o.require(table.rows.back()[u] > table.rows.back()[r], "high end not above rho");
  if (o.pass) o.detail = std::to_string(changes) + fmt(" crossing(s), near rho = %.3f", crossing);
  return o;
}

struct CliRun {
  int code;
  std::string out;
};

CliRun cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = tsq::cli::run(args, out, err);
  return {code, out.str()};
}

Outcome cli_contract() {
  Outcome o;
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("tsq_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string data = (dir / "d.csv").string();
  const std::string bad = (dir / "bad.csv").string();
  const std::string flat = (dir / "flat.csv").string();
  std::ofstream(bad) << "mean,beta,rho,q\n1,2,nope,0.6\n";
  std::ofstream(flat) << "mean,beta,rho,q\n1,2,0.5,0.6\n2,2,0.6,0.6\n3,2,0.7,0.6\n";

  struct Case {
    std::vector<std::string> args;
    int code;
  };
  const std::vector<Case> cases = {
      {{"zeta", "2", "1"}, 0},
      {{"zeta", "0.5", "1"}, 2},
      {{"pmf", "--q", "0.75", "--beta", "1"}, 0},
      {{"pmf", "--q", "0.75", "--beta", "-1"}, 2},
      {{"tail", "--q", "0.75", "--beta", "1"}, 0},
      {{"tail", "--q", "1.5", "--beta", "1"}, 2},
      {{"metrics", "--q", "0.75", "--beta", "1"}, 0},
      {{"metrics", "--q", "1.2", "--beta", "1"}, 2},
      {{"solve-beta", "--q", "0.75", "--mean", "2"}, 0},
      {{"solve-beta", "--q", "0.75", "--mean", "0"}, 2},
      {{"solve-beta", "--q", "0.75", "--mean", "2", "--max-iter", "1"}, 3},
      {{"norros-mean", "--rho", "0.5", "--hurst", "0.75"}, 0},
      {{"norros-mean", "--rho", "1.5", "--hurst", "0.75"}, 2},
      {{"norros-rho", "--mean", "2", "--hurst", "0.75"}, 0},
      {{"norros-rho", "--mean", "2", "--hurst", "0.2"}, 2},
      {{"generate", "--q", "0.6", "--out", data}, 0},
      {{"generate", "--q", "0.3"}, 2},
      {{"fit", "--model", "II", "--in", data}, 0},
      {{"fit", "--model", "I", "--in", data}, 0},
      {{"fit", "--model", "IV", "--in", data}, 2},
      {{"fit", "--model", "I", "--in", flat}, 3},
      {{"fit", "--model", "II", "--in", bad}, 4},
      {{"fit", "--model", "II", "--in", (dir / "missing.csv").string()}, 4},
      {{"figure", "--id", "5", "--q", "0.6", "--points", "10"}, 0},
      {{"figure", "--id", "9"}, 2},
      {{"bogus"}, 2},
  };
  int seen[5] = {};
  for (const auto& c : cases) {
    const int got = cli(c.args).code;
    if (got >= 0 && got < 5) ++seen[got];
    std::string line;
    for (const auto& a : c.args) line += (line.empty() ? "" : " ") + a;
    o.require(got == c.code, "'" + line + "' exited " + std::to_string(got) + ", want " +
                                 std::to_string(c.code));
  }
  o.require(seen[0] && seen[2] && seen[3] && seen[4], "exit codes 0/2/3/4 not all exercised");

  std::ifstream in(data);
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  std::istringstream parse_in(text);
  const auto records = tsq::read_correspondence_csv(parse_in);
  std::ostringstream again;
  tsq::write_correspondence_csv(again, records);
  o.require(again.str() == text, "CSV re-emit differs");

  const auto json_run = cli({"--format", "json", "generate", "--q", "0.6"});
  const auto doc = nlohmann::json::parse(json_run.out);
  bool same = doc.size() == records.size();
  for (std::size_t k = 0; same && k < records.size(); ++k) {
    same = doc[k]["mean"].get<double>() == records[k].mean &&
           doc[k]["beta"].get<double>() == records[k].beta &&
           doc[k]["rho"].get<double>() == records[k].rho && doc[k]["q"].get<double>() == records[k].q;
  }
  o.require(same, "JSON values differ from CSV");
  fs::remove_all(dir);
  if (o.pass) o.detail = std::to_string(cases.size()) + " invocations, round trips exact";
  return o;
}

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;
  std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {1, "zeta correctness", 1.0, zeta_correctness},
      {2, "distribution normalization", 10.0, normalization},
      {3, "moment formulas vs brute force", 30.0, moments_vs_bruteforce},
      {4, "M/M/1 recovery at q = 0.999", 5.0, mm1_recovery},
      {5, "power-law tail", 5.0, power_law_tail},
      {6, "moment-existence frontier", 30.0, moment_frontier},
      {7, "solver round trip", 30.0, solver_round_trip},
      {8, "storage-model inversion", 1.0, norros_inversion},
      {9, "fit quality ordering", 60.0, fit_ordering},
      {10, "utilization transition", 10.0, utilization_transition},
      {11, "CLI contract", 10.0, cli_contract},
  };
  return all;
}

bool run_one(const Criterion& c) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = c.run();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (seconds > c.budget_seconds) {
    o.require(false, fmt("over budget of %.0f s", c.budget_seconds));
  }
  std::printf("[%s] criterion %d: %s (%s; %.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.title,
              o.detail.c_str(), seconds);
  std::fflush(stdout);
  return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int k = 1; k < argc; ++k) {
    const std::string arg = argv[k];
    if (arg == "--criterion" && k + 1 < argc) {
      only = std::atoi(argv[++k]);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
      return 2;
    }
  }
  bool all_pass = true;
  bool matched = false;
  for (const auto& c : criteria()) {
    if (only != 0 && c.id != only) continue;
    matched = true;
    all_pass = run_one(c) && all_pass;
  }
  if (!matched) {
    std::fprintf(stderr, "no criterion %d\n", only);
    return 2;
  }
  return all_pass ? 0 : 1;
}
