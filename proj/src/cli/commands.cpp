#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "format.hpp"
#include "minlen/cli.hpp"
#include "minlen/errors.hpp"
#include "minlen/parallel.hpp"
#include "minlen/wavefunction.hpp"

namespace minlen::cli {

namespace {

using nlohmann::json;
using detail::cell;
using detail::write_csv_row;

/// Writes to output.path when set, else to the given stream.
class Sink {
public:
  Sink(const RunConfig& config, std::ostream& fallback) : stream_(&fallback) {
    if (!config.output_path.empty()) {
      file_.open(config.output_path, std::ios::binary | std::ios::trunc);
      if (!file_) throw ConfigError("cannot write '" + config.output_path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& operator*() { return *stream_; }

private:
  std::ofstream file_;
  std::ostream* stream_;
};

SolveOptions solve_options(const RunConfig& config) {
  SolveOptions o;
  o.tol = config.tol;
  o.quad_tol = std::min(1e-13, config.tol * 0.1);
  return o;
}

json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

std::vector<std::optional<int>> requested_levels(const RunConfig& config) {
  if (config.interaction == InteractionKind::Delta) return {std::nullopt};
  if (config.n) return {*config.n};
  if (config.n_max) {
    std::vector<std::optional<int>> levels;
    for (int n = config.delta == 0.0 ? 1 : 0; n <= *config.n_max; ++n) levels.emplace_back(n);
    return levels;
  }
  throw ConfigError("coulomb interaction needs solve.n or solve.n_max");
}

std::optional<int> single_level(const RunConfig& config) {
  if (config.interaction == InteractionKind::Delta) return std::nullopt;
  if (!config.n) throw ConfigError("coulomb interaction needs solve.n");
  return config.n;
}

std::string domain_label(const TwoBodySystem& sys, double p0) {
  return std::string(to_string(momentum_support(sys, p0).domain));
}

void report_no_bound_state(std::ostream& err, double p0, std::string_view reason) {
  err << "no bound state at p0 = " << format_double(p0);
  if (!reason.empty()) err << ": " << reason;
  err << '\n';
}

} // namespace

int cmd_solve(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto sys = build_system(config);
  const auto interaction = build_interaction(config);
  const auto levels = requested_levels(config);
  const auto support = momentum_support(sys, config.p0);
  if (support.empty()) {
    report_no_bound_state(err, config.p0, "empty momentum support");
    return kExitNoBoundState;
  }

  std::vector<BoundState> states;
  int status = kExitOk;
  for (const auto& n : levels) {
    const auto result = solve(sys, interaction, config.p0, n, solve_options(config));
    if (const auto* s = std::get_if<BoundState>(&result)) {
      states.push_back(*s);
    } else {
      report_no_bound_state(err, config.p0, std::get<NoBoundState>(result).reason);
      status = kExitNoBoundState;
    }
  }

  Sink sink(config, out);
  if (config.format == OutputFormat::Csv) {
    write_csv_row(*sink, {"p0", "n", "E", "s", "residual", "c1", "c2", "domain"});
    for (const auto& s : states) {
      write_csv_row(*sink, {format_double(s.p0), s.n ? std::to_string(*s.n) : std::string(), format_double(s.E),
                            format_double(s.s), format_double(s.residual), format_double(s.support.c1),
                            format_double(s.support.c2), std::string(to_string(s.support.domain))});
    }
  } else {
    json doc = json::array();
    for (const auto& s : states) {
      doc.push_back({{"p0", s.p0},
                     {"n", s.n ? json(*s.n) : json(nullptr)},
                     {"E", s.E},
                     {"s", s.s},
                     {"residual", s.residual},
                     {"c1", number(s.support.c1)},
                     {"c2", number(s.support.c2)},
                     {"domain", to_string(s.support.domain)}});
    }
    *sink << doc.dump(2) << '\n';
  }
  return status;
}

int cmd_scan(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto sys = build_system(config);
  const auto interaction = build_interaction(config);
  const auto n = single_level(config);
  const std::vector<double> grid = config.p0_grid.empty() ? std::vector<double>{config.p0} : config.p0_grid;
  const auto points = scan_p0(sys, interaction, grid, n, solve_options(config));

  int status = kExitOk;
  struct Row {
    double p0;
    std::optional<double> E;
    std::optional<double> residual;
    std::string domain;
  };
  std::vector<Row> rows;
  for (const auto& pt : points) {
    Row row{pt.p0, std::nullopt, std::nullopt, domain_label(sys, pt.p0)};
    if (const auto* s = std::get_if<BoundState>(&pt.outcome)) {
      row.E = s->E;
      row.residual = s->residual;
    } else if (const auto* f = std::get_if<ScanFailure>(&pt.outcome)) {
      if (!momentum_support(sys, pt.p0).empty()) {
        err << "error at p0 = " << format_double(pt.p0) << ": " << f->message << '\n';
        status = kExitError;
      }
    }
    rows.push_back(std::move(row));
  }

  Sink sink(config, out);
  if (config.format == OutputFormat::Csv) {
    write_csv_row(*sink, {"p0", "E", "residual", "domain"});
    for (const auto& r : rows) write_csv_row(*sink, {format_double(r.p0), cell(r.E), cell(r.residual), r.domain});
  } else {
    json doc = json::array();
    for (const auto& r : rows) {
      doc.push_back({{"p0", r.p0},
                     {"E", r.E ? json(*r.E) : json(nullptr)},
                     {"residual", r.residual ? json(*r.residual) : json(nullptr)},
                     {"domain", r.domain}});
    }
    *sink << doc.dump(2) << '\n';
  }
  return status;
}

int cmd_wavefunction(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto sys = build_system(config);
  const auto interaction = build_interaction(config);
  const auto n = single_level(config);
  if (momentum_support(sys, config.p0).empty()) {
    report_no_bound_state(err, config.p0, "empty momentum support");
    return kExitNoBoundState;
  }
  const auto result = solve(sys, interaction, config.p0, n, solve_options(config));
  if (const auto* none = std::get_if<NoBoundState>(&result)) {
    report_no_bound_state(err, config.p0, none->reason);
    return kExitNoBoundState;
  }
  const auto& state = std::get<BoundState>(result);
  const auto wf = build_wavefunction(state, sys, interaction, config.grid_size);

  Sink sink(config, out);
  if (config.format == OutputFormat::Csv) {
    write_csv_row(*sink, {"p", "re", "im", "abs2"});
    for (std::size_t k = 0; k < wf.grid.size(); ++k) {
      const auto v = wf.values[k];
      write_csv_row(*sink, {format_double(wf.grid[k]), format_double(v.real()), format_double(v.imag()),
                            format_double(std::norm(v))});
    }
  } else {
    json doc = {{"E", wf.E},
                {"p0", wf.p0},
                {"n", wf.n ? json(*wf.n) : json(nullptr)},
                {"norm_check", wf.norm_check},
                {"normalization", wf.normalization},
                {"total_phase", wf.total_phase},
                {"p", json::array()},
                {"re", json::array()},
                {"im", json::array()},
                {"abs2", json::array()}};
    for (std::size_t k = 0; k < wf.grid.size(); ++k) {
      doc["p"].push_back(wf.grid[k]);
      doc["re"].push_back(wf.values[k].real());
      doc["im"].push_back(wf.values[k].imag());
      doc["abs2"].push_back(std::norm(wf.values[k]));
    }
    *sink << doc.dump(2) << '\n';
  }
  return kExitOk;
}

int cmd_series_compare(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto interaction = build_interaction(config);
  const auto n = single_level(config);
  const double kappa = config.interaction == InteractionKind::Delta
                           ? coupling_kappa(std::get<DeltaInteraction>(interaction))
                           : coupling_kappa(std::get<CoulombInteraction>(interaction), *n, config.hbar);
  const double m1 = config.particle1.mass;
  const double m2 = config.particle2.mass;
  const double m_min = std::min(m1, m2);

  struct Row {
    double param = 0.0;
    std::optional<double> numeric;
    double series = 0.0;
    std::vector<std::string> warnings;
    std::string error;
  };
  std::vector<Row> rows(config.series_sweep.size());

  parallel_for(rows.size(), 0, [&](std::size_t i) {
    Row& row = rows[i];
    row.param = config.series_sweep[i];
    try {
      const double x = row.param;
      std::optional<TwoBodySystem> sys;
      SeriesPrediction prediction;
      if (config.series_family == SeriesFamily::Cutoff) {
        sys.emplace(Particle{m1, DeformationFamily::cutoff(x * m1 / m_min)},
                    Particle{m2, DeformationFamily::cutoff(x * m2 / m_min)}, config.hbar);
        prediction = m1 == m2 ? series_cutoff_identical(*sys, kappa, config.p0, x)
                              : series_cutoff_distinct(*sys, kappa, config.p0, sys->b2());
      } else {
        sys.emplace(Particle{m1, DeformationFamily::inverse_sqrt(x)}, Particle{m2, DeformationFamily::inverse_sqrt(x)},
                    config.hbar);
        prediction = series_inversesqrt_identical(*sys, kappa, config.p0, x, config.transcription);
      }
      row.series = prediction.partial_sum(config.series_terms);
      row.warnings = prediction.warnings;
      const auto result = solve(*sys, interaction, config.p0, n, solve_options(config));
      if (const auto* s = std::get_if<BoundState>(&result)) row.numeric = s->E;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  });

  int status = kExitOk;
  for (const auto& row : rows) {
    for (const auto& w : row.warnings) err << "warning at " << format_double(row.param) << ": " << w << '\n';
    if (!row.error.empty()) {
      err << "error at " << format_double(row.param) << ": " << row.error << '\n';
      status = kExitError;
    } else if (!row.numeric) {
      report_no_bound_state(err, config.p0, "series point " + format_double(row.param));
      if (status == kExitOk) status = kExitNoBoundState;
    }
  }

  // Expansion parameter of the series: 1/b for cutoff, sqrt(beta) for inversesqrt.
  auto expansion = [&](double x) { return config.series_family == SeriesFamily::Cutoff ? 1.0 / x : std::sqrt(x); };
  std::vector<std::optional<double>> diff(rows.size());
  std::vector<std::optional<double>> order(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].numeric) diff[i] = std::abs(*rows[i].numeric - rows[i].series);
    if (i > 0 && diff[i] && diff[i - 1] && *diff[i] > 0.0 && *diff[i - 1] > 0.0) {
      order[i] = std::log(*diff[i] / *diff[i - 1]) /
                 std::log(expansion(rows[i].param) / expansion(rows[i - 1].param));
    }
  }

  Sink sink(config, out);
  if (config.format == OutputFormat::Csv) {
    write_csv_row(*sink, {"param", "E_numeric", "E_series", "abs_diff", "fitted_order"});
    for (std::size_t i = 0; i < rows.size(); ++i) {
      write_csv_row(*sink, {format_double(rows[i].param), cell(rows[i].numeric), format_double(rows[i].series),
                            cell(diff[i]), cell(order[i])});
    }
  } else {
    json doc = json::array();
    auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    for (std::size_t i = 0; i < rows.size(); ++i) {
      doc.push_back({{"param", rows[i].param},
                     {"E_numeric", opt(rows[i].numeric)},
                     {"E_series", rows[i].series},
                     {"abs_diff", opt(diff[i])},
                     {"fitted_order", opt(order[i])}});
    }
    *sink << doc.dump(2) << '\n';
  }
  return status;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-body bound states in deformed Heisenberg algebras with a minimal length", "minlen"};
  app.fallthrough();
  app.require_subcommand(0, 1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_path;
  std::string format;
  bool dump = false;
  app.add_option("--config", config_path, "Configuration file (flat key = value)");
  app.add_option("--set", overrides, "Override one key, key=value (repeatable)");
  app.add_option("--out", out_path, "Write results to this file instead of stdout");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--dump-config", dump, "Print the effective configuration and exit");

  auto* solve_cmd = app.add_subcommand("solve", "Bound-state energy at one p0");
  auto* scan_cmd = app.add_subcommand("scan", "Energy over a p0 grid (CSV p0,E,residual,domain)");
  auto* wf_cmd = app.add_subcommand("wavefunction", "Momentum-space wavefunction (CSV p,re,im,abs2)");
  auto* series_cmd = app.add_subcommand("series-compare", "Numerical energies against the perturbative series");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    KeyValues kv;
    if (!config_path.empty()) kv = parse_key_values(read_file(config_path));
    for (const auto& assignment : overrides) apply_override(kv, assignment);
    if (!out_path.empty()) kv["output.path"] = out_path;
    if (!format.empty()) kv["output.format"] = format;
    const auto config = to_run_config(kv);

    if (dump) {
      out << dump_config(config);
      return kExitOk;
    }
    if (solve_cmd->parsed()) return cmd_solve(config, out, err);
    if (scan_cmd->parsed()) return cmd_scan(config, out, err);
    if (wf_cmd->parsed()) return cmd_wavefunction(config, out, err);
    if (series_cmd->parsed()) return cmd_series_compare(config, out, err);
    err << "a subcommand is required (solve, scan, wavefunction, series-compare)\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

} // namespace minlen::cli
