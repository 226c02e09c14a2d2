#include "tsq/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>

#include "render.hpp"
#include "tsq/correspondence_csv.hpp"
#include "tsq/distribution.hpp"
#include "tsq/errors.hpp"
#include "tsq/figures.hpp"
#include "tsq/fitting.hpp"
#include "tsq/norros.hpp"
#include "tsq/solver.hpp"
#include "tsq/special.hpp"

namespace tsq::cli {

namespace {

using nlohmann::ordered_json;

constexpr const char* kVarianceNote = "variance undefined: requires q > 2/3";

ordered_json finite_or_null(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(); }

ordered_json cmd_zeta(double s, double a, bool log_form, bool derivative) {
  ordered_json doc;
  doc["s"] = s;
  doc["a"] = a;
  if (log_form) {
    doc["log_value"] = log_hurwitz_zeta(s, a);
  } else if (derivative) {
    doc["derivative"] = hurwitz_zeta_da(s, a);
  } else {
    doc["value"] = hurwitz_zeta(s, a);
  }
  return doc;
}

ordered_json cmd_pmf(double q, double beta, const std::vector<std::uint64_t>& indices) {
  const QueueModel model(q, beta);
  ordered_json rows = ordered_json::array();
  for (const auto i : indices) {
    rows.push_back({{"q", q}, {"beta", beta}, {"i", i}, {"pmf", pmf(model, i)},
                    {"log_pmf", log_pmf(model, i)}});
  }
  return rows;
}

ordered_json cmd_tail(double q, double beta, const std::vector<std::uint64_t>& xs) {
  const QueueModel model(q, beta);
  ordered_json rows = ordered_json::array();
  for (const auto x : xs) {
    ordered_json row = {{"q", q}, {"beta", beta}, {"x", x}, {"tail", tail(model, x)}};
    row["asymptote"] = x >= 1 ? finite_or_null(tail_asymptote(model, x).value) : ordered_json();
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json metrics_json(const QosReport& report) {
  ordered_json doc;
  doc["q"] = report.q;
  doc["beta"] = report.beta;
  doc["mean"] = report.mean;
  doc["variance"] = report.variance ? ordered_json(*report.variance) : ordered_json();
  doc["variance_note"] = report.variance ? ordered_json() : ordered_json(kVarianceNote);
  doc["utilization"] = report.utilization;
  doc["p0"] = report.p0;
  doc["tail_exponent"] = report.tail_exponent;
  doc["tail_coefficient"] = finite_or_null(report.tail_coefficient);
  ordered_json samples = ordered_json::array();
  for (const auto& t : report.tail_samples) {
    samples.push_back({{"x", t.x}, {"probability", t.probability}});
  }
  doc["tail_samples"] = std::move(samples);
  return doc;
}

// field,value rows for csv/table output of a metrics report
ordered_json metrics_rows(const ordered_json& doc) {
  ordered_json rows = ordered_json::array();
  for (const auto& [key, value] : doc.items()) {
    if (key == "tail_samples") {
      for (const auto& t : value) {
        rows.push_back({{"field", "tail_x" + t["x"].dump()}, {"value", t["probability"]}});
      }
    } else {
      rows.push_back({{"field", key}, {"value", value}});
    }
  }
  return rows;
}

ordered_json solver_json(double q, double target, const SolverResult& r) {
  return {{"q", q},
          {"mean", target},
          {"beta", r.beta},
          {"iterations", r.iterations},
          {"residual", r.residual},
          {"fallback_used", r.fallback_used}};
}

ordered_json records_json(const std::vector<CorrespondenceRecord>& records) {
  ordered_json rows = ordered_json::array();
  for (const auto& r : records) {
    rows.push_back({{"mean", r.mean}, {"beta", r.beta}, {"rho", r.rho}, {"q", r.q}});
  }
  return rows;
}

ordered_json fit_json(const FitReport& report, std::size_t points) {
  ordered_json doc;
  doc["model"] = std::string(to_string(report.model_kind));
  if (report.model_kind == ModelKind::ModelI) {
    doc["a"] = report.params[0];
    doc["b"] = report.params[1];
  } else {
    doc["c"] = report.params[0];
    doc["eta"] = report.params[1];
    doc["d"] = report.params[2];
    doc["mu"] = report.params[3];
  }
  doc["rmse"] = report.rmse;
  doc["r_squared"] = report.r_squared;
  doc["iterations"] = report.iterations;
  doc["converged"] = report.converged;
  doc["points"] = points;
  return doc;
}

ordered_json figure_json(const FigureTable& table) {
  ordered_json rows = ordered_json::array();
  for (const auto& row : table.rows) {
    ordered_json obj;
    for (std::size_t k = 0; k < table.columns.size(); ++k) obj[table.columns[k]] = row[k];
    rows.push_back(std::move(obj));
  }
  return rows;
}

int fail(std::ostream& err, int code, const std::string& what) {
  err << "tsq: " << what << '\n';
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tsallis maximum-entropy queue-length model"};
  app.name("tsq");
  app.require_subcommand(1);
  app.fallthrough();

  std::string format_text;
  std::string out_path;
  app.add_option("--format", format_text, "Output format")
      ->check(CLI::IsMember({"table", "csv", "json"}));
  app.add_option("--out", out_path, "Write results to this file instead of stdout");

  // zeta
  double zeta_s = 0.0;
  double zeta_a = 0.0;
  bool zeta_log = false;
  bool zeta_da = false;
  auto* zeta = app.add_subcommand("zeta", "Hurwitz zeta(s, a)");
  zeta->add_option("s", zeta_s, "Exponent, s > 1")->required();
  zeta->add_option("a", zeta_a, "Shift, a > 0")->required();
  auto* log_flag = zeta->add_flag("--log", zeta_log, "Print ln zeta(s, a)");
  zeta->add_flag("--da", zeta_da, "Print d zeta / da")->excludes(log_flag);

  double q = 0.0;
  double beta = 0.0;
  auto add_model = [&](CLI::App* sub) {
    sub->add_option("--q", q, "Tsallis entropy index, 1/2 < q < 1")->required();
    sub->add_option("--beta", beta, "Lagrange multiplier, beta > 0")->required();
  };

  std::vector<std::uint64_t> pmf_indices;
  std::uint64_t pmf_max_i = 10;
  auto* pmf_cmd = app.add_subcommand("pmf", "Queue-length probabilities p_i");
  add_model(pmf_cmd);
  pmf_cmd->add_option("--i", pmf_indices, "Comma-separated packet counts")->delimiter(',');
  pmf_cmd->add_option("--max-i", pmf_max_i, "Emit i = 0..max-i when --i is absent");

  std::vector<std::uint64_t> tail_xs = {0, 10, 100, 1000};
  auto* tail_cmd = app.add_subcommand("tail", "Overflow probabilities P(i > x)");
  add_model(tail_cmd);
  tail_cmd->add_option("--x", tail_xs, "Comma-separated thresholds")->delimiter(',');

  std::vector<std::uint64_t> metric_xs = {10, 100, 1000};
  auto* metrics = app.add_subcommand("metrics", "QoS report: mean, variance, utilization, tail");
  add_model(metrics);
  metrics->add_option("--tail", metric_xs, "Comma-separated overflow thresholds")->delimiter(',');

  double target_mean = 0.0;
  double beta0 = 0.0;
  SolverConfig solver_config;
  auto* solve = app.add_subcommand("solve-beta", "Solve for beta given q and the mean queue size");
  solve->add_option("--q", q, "Tsallis entropy index")->required();
  solve->add_option("--mean", target_mean, "Mean queue size A > 0")->required();
  auto* beta0_opt = solve->add_option("--beta0", beta0, "Initial guess");
  solve->add_option("--tol", solver_config.tol, "Relative tolerance")->capture_default_str();
  solve->add_option("--max-iter", solver_config.max_iter, "Newton iteration cap")
      ->capture_default_str();

  double rho = 0.0;
  double hurst = 0.0;
  auto* nmean = app.add_subcommand("norros-mean", "Storage-model mean queue size for (rho, H)");
  nmean->add_option("--rho", rho, "Traffic intensity, 0 < rho < 1")->required();
  nmean->add_option("--hurst", hurst, "Hurst index, 0.5 <= H < 1")->required();

  auto* nrho = app.add_subcommand("norros-rho", "Invert the storage model for rho");
  nrho->add_option("--mean", target_mean, "Mean queue size > 0")->required();
  nrho->add_option("--hurst", hurst, "Hurst index, 0.5 <= H < 1")->required();

  double mean_min = 0.1;
  double mean_max = 100.0;
  int points = 50;
  auto* generate = app.add_subcommand("generate", "Generate (mean, beta, rho, q) records");
  generate->add_option("--q", q, "Tsallis entropy index")->required();
  generate->add_option("--mean-min", mean_min)->capture_default_str();
  generate->add_option("--mean-max", mean_max)->capture_default_str();
  generate->add_option("--points", points)->capture_default_str();

  std::string model_text;
  std::string in_path;
  auto* fit = app.add_subcommand("fit", "Fit rho(beta) Model I or II to a generated CSV");
  fit->add_option("--model", model_text, "I or II")->required();
  fit->add_option("--in", in_path, "CSV produced by generate")->required();

  FigureSpec figure_spec;
  auto* figure = app.add_subcommand("figure", "Plot-ready CSV for figure 1..5");
  figure->add_option("--id", figure_spec.figure_id, "Figure number 1..5")->required();
  figure->add_option("--q", figure_spec.q_list, "Comma-separated q values")->delimiter(',');
  figure->add_option("--points", figure_spec.points)->capture_default_str();
  figure->add_option("--mean-min", figure_spec.mean_min)->capture_default_str();
  figure->add_option("--mean-max", figure_spec.mean_max)->capture_default_str();
  figure->add_option("--rho-min", figure_spec.rho_min)->capture_default_str();
  figure->add_option("--rho-max", figure_spec.rho_max)->capture_default_str();
  figure->add_option("--thresholds", figure_spec.thresholds, "Overflow thresholds for figure 4")
      ->delimiter(',');

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kInvalidArguments;
  }

  try {
    const bool tabular_default = app.got_subcommand(generate) || app.got_subcommand(figure);
    const Format format = format_text.empty()
                              ? (tabular_default ? Format::Csv : Format::Table)
                              : parse_format(format_text);

    std::ostringstream buffer;
    if (app.got_subcommand(zeta)) {
      render(buffer, format, cmd_zeta(zeta_s, zeta_a, zeta_log, zeta_da));
    } else if (app.got_subcommand(pmf_cmd)) {
      if (pmf_indices.empty()) {
        pmf_indices.resize(pmf_max_i + 1);
        std::iota(pmf_indices.begin(), pmf_indices.end(), std::uint64_t{0});
      }
      render(buffer, format, cmd_pmf(q, beta, pmf_indices));
    } else if (app.got_subcommand(tail_cmd)) {
      render(buffer, format, cmd_tail(q, beta, tail_xs));
    } else if (app.got_subcommand(metrics)) {
      const ordered_json doc = metrics_json(qos_report(QueueModel(q, beta), metric_xs));
      render(buffer, format, format == Format::Json ? doc : metrics_rows(doc));
    } else if (app.got_subcommand(solve)) {
      if (*beta0_opt) solver_config.beta0 = beta0;
      render(buffer, format, solver_json(q, target_mean, solve_beta(q, target_mean, solver_config)));
    } else if (app.got_subcommand(nmean)) {
      render(buffer, format, {{"rho", rho}, {"hurst", hurst}, {"mean", norros_mean(rho, hurst)}});
    } else if (app.got_subcommand(nrho)) {
      render(buffer, format,
             {{"mean", target_mean}, {"hurst", hurst}, {"rho", norros_rho(target_mean, hurst)}});
    } else if (app.got_subcommand(generate)) {
      const auto records = generate_correspondence(q, mean_min, mean_max, points);
      if (format == Format::Csv) {
        write_correspondence_csv(buffer, records);
      } else {
        render(buffer, format, records_json(records));
      }
    } else if (app.got_subcommand(fit)) {
      const ModelKind kind = parse_model_kind(model_text);
      const auto records = read_correspondence_csv_file(in_path);
      const std::size_t needed = kind == ModelKind::ModelI ? 3 : 5;
      if (records.size() < needed) {
        throw MalformedInput(0, "'" + in_path + "' has " + std::to_string(records.size()) +
                                    " rows; Model " + std::string(to_string(kind)) + " needs " +
                                    std::to_string(needed));
      }
      const auto pts = fit_points(records);
      const FitReport report = kind == ModelKind::ModelI ? fit_model_i(pts) : fit_model_ii(pts);
      render(buffer, format, fit_json(report, pts.size()));
    } else if (app.got_subcommand(figure)) {
      const FigureTable table = build_figure(figure_spec);
      for (const auto& note : table.notes) err << "tsq: " << note << '\n';
      render(buffer, format, figure_json(table));
    }

    if (out_path.empty()) {
      out << buffer.str();
    } else {
      std::ofstream file(out_path);
      if (!file) {
        return fail(err, kInvalidArguments, "cannot open output file '" + out_path + "'");
      }
      file << buffer.str();
    }
    return kOk;
  } catch (const MalformedInput& e) {
    return fail(err, kMalformedInput, std::string("malformed input: ") + e.what());
  } catch (const FitNoConvergence& e) {
    return fail(err, kNoConvergence, std::string(e.what()) +
                                         " (best rmse " + std::to_string(e.best().rmse) + ")");
  } catch (const NoConvergence& e) {
    return fail(err, kNoConvergence, e.what());
  } catch (const SingularFit& e) {
    return fail(err, kNoConvergence, e.what());
  } catch (const std::domain_error& e) {
    return fail(err, kInvalidArguments, e.what());
  } catch (const std::range_error& e) {
    return fail(err, kInvalidArguments, e.what());
  }
}

}  // namespace tsq::cli
