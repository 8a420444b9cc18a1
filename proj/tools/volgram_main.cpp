// volgram: nonparametric Bayesian estimation of a time-dependent volatility
// coefficient from discretely observed diffusion paths.
//
// Subcommands: simulate, estimate, select, contract. All outputs are CSV
// plus a .meta.json sidecar recording the resolved configuration, so every
// run can be reproduced from its artifacts alone.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "volgram/errors.hpp"
#include "volgram/experiments.hpp"
#include "volgram/io.hpp"
#include "volgram/parallel.hpp"
#include "volgram/posterior.hpp"
#include "volgram/sde.hpp"
#include "volgram/selection.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

struct IngestFlags {
  std::string input;
  std::optional<std::string> time_column;
  std::string value_column = "value";
  std::string missing = "drop";
  bool no_rescale = false;
  bool strict_times = false;
  bool log_transform = false;
};

void add_ingest_flags(CLI::App* cmd, IngestFlags& flags) {
  cmd->add_option("--input", flags.input, "input CSV (header row required)")
      ->required();
  cmd->add_option("--time-col", flags.time_column,
                  "time column name or 0-based index (default: none, rows "
                  "are equispaced)");
  cmd->add_option("--value-col", flags.value_column,
                  "value column name or 0-based index");
  cmd->add_option("--missing", flags.missing, "missing-value policy")
      ->check(CLI::IsMember({"drop", "error"}));
  cmd->add_flag("--no-rescale", flags.no_rescale,
                "keep the observed time span instead of rescaling to [0,1]");
  cmd->add_flag("--strict-times", flags.strict_times,
                "reject non-equispaced time stamps");
  cmd->add_flag("--log", flags.log_transform,
                "fit the log of the value column");
}

volgram::ObservedPath run_ingest(const IngestFlags& flags) {
  volgram::IngestSpec spec;
  spec.path = flags.input;
  spec.time_column = flags.time_column;
  spec.value_column = flags.value_column;
  spec.missing = flags.missing == "error"
                     ? volgram::IngestSpec::Missing::error
                     : volgram::IngestSpec::Missing::drop;
  spec.rescale = !flags.no_rescale;
  spec.strict_times = flags.strict_times;
  spec.log_transform = flags.log_transform;
  return volgram::ingest(spec);
}

// Dispersion specs: s1 | s2 | const:<v>. s2 is tabulated from a seed
// derived from the run seed so it stays independent of the driving noise.
volgram::TimeFn make_dispersion(const std::string& spec, std::uint64_t seed,
                                std::size_t fine_points) {
  if (spec == "s1") return volgram::make_s1();
  if (spec == "s2") {
    volgram::SimConfig cfg;
    cfg.fine_grid_points = fine_points;
    cfg.seed = volgram::derive_seed(seed, 0xD15);
    return volgram::make_s2(cfg);
  }
  if (spec.rfind("const:", 0) == 0)
    return volgram::make_constant_dispersion(std::stod(spec.substr(6)));
  throw CLI::ValidationError("--s", "expected s1, s2 or const:<value>");
}

volgram::DriftFn make_drift(const std::string& spec) {
  if (spec == "b0") return volgram::make_zero_drift();
  if (spec == "b1") return volgram::make_b1();
  throw CLI::ValidationError("--drift", "expected b0 or b1");
}

void emit(const std::string& out_path, const std::string& content,
          const ordered_json& meta) {
  volgram::write_file_atomic(out_path, content);
  volgram::write_file_atomic(out_path + ".meta.json", meta.dump(2) + "\n");
  std::cerr << "volgram: config " << meta.dump() << "\n";
  std::cerr << "volgram: wrote " << out_path << "\n";
}

int run(int argc, char** argv) {
  CLI::App app{"Nonparametric Bayesian volatility estimation"};
  app.require_subcommand(1);

  // ---- simulate ----------------------------------------------------------
  auto* sim_cmd = app.add_subcommand(
      "simulate", "simulate a diffusion path and export it as CSV");
  std::string sim_s = "s1";
  std::string sim_drift = "b0";
  std::uint64_t sim_seed = 1;
  std::size_t sim_n = 0;
  std::size_t sim_fine = 800'001;
  double sim_horizon = 1.0;
  double sim_x0 = 0.0;
  std::string sim_out = "path.csv";
  sim_cmd->add_option("--s", sim_s, "dispersion: s1 | s2 | const:<v>");
  sim_cmd->add_option("--drift", sim_drift, "drift: b0 | b1");
  sim_cmd->add_option("--seed", sim_seed, "generator seed");
  sim_cmd->add_option("--n", sim_n,
                      "increments after subsampling (0 = export fine path)");
  sim_cmd->add_option("--fine", sim_fine, "fine grid points");
  sim_cmd->add_option("--horizon", sim_horizon, "time horizon");
  sim_cmd->add_option("--x0", sim_x0, "initial value");
  sim_cmd->add_option("--out", sim_out, "output CSV path");

  // ---- estimate ----------------------------------------------------------
  auto* est_cmd = app.add_subcommand(
      "estimate",
      "fit the conjugate posterior and export marginal credible bands");
  IngestFlags est_in;
  add_ingest_flags(est_cmd, est_in);
  std::size_t est_bins = 40;
  double est_alpha = 0.001;
  double est_beta = 0.001;
  double est_level = 0.90;
  std::string est_out = "estimate.csv";
  est_cmd->add_option("--bins", est_bins, "number of bins N");
  est_cmd->add_option("--alpha", est_alpha, "prior shape");
  est_cmd->add_option("--beta", est_beta, "prior scale");
  est_cmd->add_option("--level", est_level, "credible level (marginal bands)");
  est_cmd->add_option("--out", est_out, "output CSV path");

  // ---- select ------------------------------------------------------------
  auto* sel_cmd = app.add_subcommand(
      "select", "scan bin counts by DIC or marginal likelihood");
  IngestFlags sel_in;
  add_ingest_flags(sel_cmd, sel_in);
  std::string sel_criterion = "dic";
  std::vector<std::size_t> sel_grid = {5, 10, 20, 40, 80, 160, 320};
  double sel_alpha = 0.001;
  double sel_beta = 0.001;
  std::string sel_out = "selection.csv";
  sel_cmd->add_option("--criterion", sel_criterion, "dic | ml")
      ->check(CLI::IsMember({"dic", "ml"}));
  sel_cmd->add_option("--grid", sel_grid, "candidate bin counts")
      ->delimiter(',');
  sel_cmd->add_option("--alpha", sel_alpha, "prior shape");
  sel_cmd->add_option("--beta", sel_beta, "prior scale");
  sel_cmd->add_option("--out", sel_out, "output CSV path (JSON written too)");

  // ---- contract ----------------------------------------------------------
  auto* con_cmd = app.add_subcommand(
      "contract", "empirical posterior contraction-rate experiment");
  std::string con_s = "s1";
  std::string con_drift = "b0";
  double con_lambda = 1.0;
  std::string con_norm = "l2";
  std::vector<std::size_t> con_nlist = {5000, 10000, 20000, 40000};
  std::size_t con_draws = 500;
  double con_quantile = 0.9;
  std::uint64_t con_seed = 1;
  std::size_t con_realisations = 1;
  std::size_t con_fine = 800'001;
  double con_alpha = 0.1;
  double con_beta = 0.1;
  bool con_full_scale = false;
  bool con_fresh = false;
  std::string con_target = "s";
  std::string con_out = "contraction.csv";
  con_cmd->add_option("--s", con_s, "true dispersion: s1 | s2 | const:<v>");
  con_cmd->add_option("--drift", con_drift, "drift: b0 | b1");
  con_cmd->add_option("--lambda", con_lambda, "smoothness in (0,1]");
  con_cmd->add_option("--norm", con_norm, "l2 | sup")
      ->check(CLI::IsMember({"l2", "sup"}));
  con_cmd->add_option("--nlist", con_nlist, "increment counts")
      ->delimiter(',');
  con_cmd->add_option("--draws", con_draws, "posterior draws per n");
  con_cmd->add_option("--quantile", con_quantile, "distance quantile");
  con_cmd->add_option("--seed", con_seed, "base seed");
  con_cmd->add_option("--realisations", con_realisations,
                      "independent path realisations");
  con_cmd->add_option("--fine", con_fine, "fine grid points");
  con_cmd->add_option("--alpha", con_alpha, "prior shape");
  con_cmd->add_option("--beta", con_beta, "prior scale");
  con_cmd->add_flag("--full-scale", con_full_scale,
                    "paper-scale run: n up to 80000, 2000 draws, 4 "
                    "realisations");
  con_cmd->add_flag("--fresh-paths", con_fresh,
                    "simulate a fresh path per n instead of nested "
                    "subsampling");
  con_cmd->add_option("--target", con_target,
                      "distance target: s | s2 (dispersion or its square)")
      ->check(CLI::IsMember({"s", "s2"}));
  con_cmd->add_option("--out", con_out, "output CSV path (JSON written too)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the usage message
    return code == 0 ? 0 : kExitUsage;
  }

  if (sim_cmd->parsed()) {
    volgram::SimConfig cfg{sim_fine, sim_horizon, sim_x0, sim_seed};
    const volgram::TimeFn dispersion = make_dispersion(sim_s, sim_seed, sim_fine);
    const volgram::DriftFn drift = make_drift(sim_drift);
    const std::vector<double> fine = euler_simulate(cfg, drift, dispersion);
    const volgram::ObservedPath path =
        sim_n == 0 ? volgram::ObservedPath{fine, sim_horizon}
                   : volgram::subsample(fine, sim_n, sim_horizon);

    ordered_json meta;
    meta["command"] = "simulate";
    meta["dispersion"] = dispersion.id();
    meta["drift"] = drift.id();
    meta["seed"] = sim_seed;
    meta["fine_grid_points"] = sim_fine;
    meta["horizon"] = sim_horizon;
    meta["x0"] = sim_x0;
    meta["n"] = path.increments();
    emit(sim_out, path_csv(path), meta);
    return 0;
  }

  if (est_cmd->parsed()) {
    const volgram::ObservedPath path = run_ingest(est_in);
    if (est_bins == path.increments())
      std::cerr << "volgram: warning: one increment per bin; posterior "
                   "moments may be undefined for small priors\n";
    const volgram::PriorSpec prior{est_alpha, est_beta};
    const volgram::DispersionEstimate est =
        credible_band(fit(path, est_bins, prior), est_level);

    ordered_json meta;
    meta["command"] = "estimate";
    meta["input"] = est_in.input;
    meta["n"] = path.increments();
    meta["bins"] = est_bins;
    meta["prior"] = {{"alpha", est_alpha}, {"beta", est_beta}};
    meta["level"] = est_level;
    meta["band_type"] = "marginal";  // per-bin, not simultaneous
    meta["log_transform"] = est_in.log_transform;
    volgram::write_file_atomic(est_out + ".summary.json", estimate_json(est));
    emit(est_out, estimate_csv(est), meta);
    return 0;
  }

  if (sel_cmd->parsed()) {
    const volgram::ObservedPath path = run_ingest(sel_in);
    const volgram::PriorSpec prior{sel_alpha, sel_beta};
    const volgram::Criterion criterion = sel_criterion == "dic"
                                             ? volgram::Criterion::dic
                                             : volgram::Criterion::ml;
    const volgram::SelectionResult result =
        select(path, sel_grid, prior, criterion);

    ordered_json meta;
    meta["command"] = "select";
    meta["input"] = sel_in.input;
    meta["n"] = path.increments();
    meta["criterion"] = sel_criterion;
    meta["grid"] = sel_grid;
    meta["prior"] = {{"alpha", sel_alpha}, {"beta", sel_beta}};
    meta["best"] = result.best;
    volgram::write_file_atomic(
        sel_out + ".summary.json", selection_json(result));
    emit(sel_out, selection_csv(result), meta);
    std::cerr << "volgram: best N = " << result.best << "\n";
    return 0;
  }

  // contract
  if (con_full_scale) {
    con_nlist = {5000, 10000, 20000, 40000, 80000};
    con_draws = 2000;
    con_fine = 800'001;
    con_realisations = 4;
  }
  volgram::ContractionConfig cfg;
  cfg.dispersion = make_dispersion(con_s, con_seed, con_fine);
  cfg.drift = make_drift(con_drift);
  cfg.lambda = con_lambda;
  cfg.n_list = con_nlist;
  cfg.draws = con_draws;
  cfg.quantile = con_quantile;
  cfg.norm = con_norm == "l2" ? volgram::Norm::l2 : volgram::Norm::sup;
  cfg.target = con_target == "s" ? volgram::Target::dispersion
                                 : volgram::Target::diffusion;
  cfg.base_seed = con_seed;
  cfg.realisations = con_realisations;
  cfg.fine_grid_points = con_fine;
  cfg.path_mode =
      con_fresh ? volgram::PathMode::fresh : volgram::PathMode::nested;
  const volgram::PriorSpec prior{con_alpha, con_beta};
  const volgram::ContractionReport report = run_contraction(cfg, prior);

  ordered_json meta;
  meta["command"] = "contract";
  meta["dispersion"] = cfg.dispersion.id();
  meta["drift"] = cfg.drift.id();
  meta["lambda"] = con_lambda;
  meta["norm"] = con_norm;
  meta["target"] = con_target;
  meta["n_list"] = con_nlist;
  meta["draws"] = con_draws;
  meta["quantile"] = con_quantile;
  meta["seed"] = con_seed;
  meta["realisations"] = con_realisations;
  meta["fine_grid_points"] = con_fine;
  meta["path_mode"] = con_fresh ? "fresh" : "nested";
  meta["prior"] = {{"alpha", con_alpha}, {"beta", con_beta}};
  volgram::write_file_atomic(con_out + ".summary.json",
                             contraction_json(report));
  emit(con_out, contraction_csv(report), meta);
  std::cerr << "volgram: pooled slope = " << report.pooled.slope << " (se "
            << report.pooled.se << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const volgram::DataError& e) {
    std::cerr << "volgram: data error: " << e.what() << "\n";
    return kExitData;
  } catch (const volgram::NumericError& e) {
    std::cerr << "volgram: numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const CLI::Error& e) {
    std::cerr << "volgram: usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "volgram: usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "volgram: numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "volgram: error: " << e.what() << "\n";
    return kExitNumeric;
  }
}
