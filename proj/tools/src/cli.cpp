#include "regarma_cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "regarma/diagnostics.hpp"
#include "regarma/error.hpp"
#include "regarma/harness.hpp"
#include "regarma/io.hpp"
#include "regarma/select.hpp"
#include "regarma/simulate.hpp"

namespace regarma::cli {
namespace fs = std::filesystem;

namespace {

constexpr int kDefaultAcfLags = 20;

struct FitArgs {
    std::string input;
    std::string response;
    std::optional<int> p, q, pmax, qmax;
    std::string criterion = "bic";
    int folds = 5;
    bool adaptive = true;
    std::string order_method = "b";
    std::string pilot = "same";
    int grid_size = 50;
    bool independent_grid = false;
    double max_df_fraction = 0.5;
    std::optional<double> lambda, gamma, tau;
    int acf_lags = kDefaultAcfLags;
    std::string out;
    bool strict = false;
};

struct SimulateArgs {
    SimulationConfig config;
    std::string out;
};

struct BenchArgs {
    std::optional<std::uint64_t> seed;
    std::string manifest;
    ExperimentGrid grid;
    std::string out;
    bool strict = false;
};

struct BoundsArgs {
    std::string fit;
    std::string input;
    std::string response;
    std::optional<double> sigma;
    std::string truth;
    bool strict = false;
};

void ensure_dir(const std::string& dir) {
    if (dir.empty()) throw Error(ErrorCode::Config, "--out is required");
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create output directory " + dir + ": " + ec.message());
}

void require_file(const std::string& path, const char* flag) {
    if (path.empty()) throw Error(ErrorCode::Config, std::string(flag) + " is required");
    if (!fs::is_regular_file(path)) throw Error(ErrorCode::Io, "no such file: " + path);
}

SelectionOptions selection_options(const FitArgs& a) {
    SelectionOptions opts;
    opts.adaptive = a.adaptive;
    opts.folds = a.folds;
    opts.max_df_fraction = a.max_df_fraction;
    if (a.pilot == "selected") opts.pilot_mode = PilotMode::Selected;
    return opts;
}

std::vector<PenaltyScales> make_grid(const FitArgs& a, const TimeSeriesDataset& ds, int p, int q) {
    if (a.lambda || a.gamma || a.tau) {
        const double l = a.lambda.value_or(0.0);
        return {{l, a.gamma.value_or(l), a.tau.value_or(l)}};
    }
    if (a.independent_grid) return independent_penalty_grid(ds, p, q);
    return default_penalty_grid(ds, p, q, a.grid_size);
}

/// Penalty selection at fixed orders, or order selection when maxima are given.
SelectionResult run_selection(const FitArgs& a, const TimeSeriesDataset& ds, int pmax, int qmax,
                              bool choose_orders) {
    const CriterionKind kind = criterion_from_string(a.criterion);
    const SelectionOptions opts = selection_options(a);
    if (!choose_orders) {
        const auto grid = make_grid(a, ds, pmax, qmax);
        return select_penalties(ds, pmax, qmax, grid, kind, opts);
    }
    std::vector<PenaltyScales> grid;
    if (a.lambda || a.gamma || a.tau) grid = make_grid(a, ds, pmax, qmax);
    if (a.order_method == "a") return select_orders_method_a(ds, pmax, qmax, grid, kind, opts);
    if (a.independent_grid) grid = independent_penalty_grid(ds, pmax, qmax);
    return select_orders_method_b(ds, pmax, qmax, grid, kind, opts);
}

struct Orders {
    int p = 0;
    int q = 0;
    bool choose = false;
};

Orders resolve_orders(const FitArgs& a) {
    const bool fixed = a.p.has_value() || a.q.has_value();
    const bool maxima = a.pmax.has_value() || a.qmax.has_value();
    if (fixed && maxima) throw Error(ErrorCode::Config, "use either --p/--q or --pmax/--qmax");
    if (maxima) return {a.pmax.value_or(0), a.qmax.value_or(0), true};
    return {a.p.value_or(0), a.q.value_or(0), false};
}

void validate_fit_args(const FitArgs& a) {
    if (a.response.empty()) throw Error(ErrorCode::Config, "--response is required");
    criterion_from_string(a.criterion);
    if (a.order_method != "a" && a.order_method != "b") {
        throw Error(ErrorCode::Config, "--order-method must be a or b");
    }
    if (a.pilot != "same" && a.pilot != "selected") {
        throw Error(ErrorCode::Config, "--pilot must be same or selected");
    }
    for (const auto& v : {a.p, a.q, a.pmax, a.qmax}) {
        if (v && *v < 0) throw Error(ErrorCode::Config, "orders must be nonnegative");
    }
}

void print_hint(const FitArgs& a, const TimeSeriesDataset& ds, const Orders& o, std::ostream& err) {
    if (!o.choose || a.order_method != "b") return;
    // Method a is recommended when observations are few relative to the model size.
    const int size = ds.r() + o.p + o.q;
    if (ds.T() < 100 || ds.T() < 2 * size) {
        err << "hint: few observations (T = " << ds.T() << " for " << size
            << " candidate coefficients); consider --order-method a\n";
    }
}

void print_selection(const SelectionResult& sel, std::ostream& out) {
    out << "criterion: " << to_string(sel.criterion_kind) << '\n'
        << "orders: p = " << sel.best_p << ", q = " << sel.best_q << '\n'
        << "scales: lambda = " << format_double(sel.best_scales.lambda)
        << ", gamma = " << format_double(sel.best_scales.gamma)
        << ", tau = " << format_double(sel.best_scales.tau) << '\n'
        << "value: " << format_double(sel.best_criterion) << " (df " << sel.best_df << ")\n";
}

enum class Family { Lasso, Ar, Ma, Arma };

std::string family_label(Family f, int p, int q, bool adaptive) {
    switch (f) {
        case Family::Lasso: return model_label(0, 0, adaptive);
        case Family::Ar: return "REGAR(" + std::to_string(p) + ")";
        case Family::Ma: return "REGMA(" + std::to_string(q) + ")";
        case Family::Arma: break;
    }
    return "REGARMA(" + std::to_string(p) + "," + std::to_string(q) + ")";
}

int check_convergence(const RegarmaFit& fit, bool strict, std::ostream& err) {
    if (fit.converged) return kExitOk;
    err << "warning: solver did not converge (kkt " << format_double(fit.kkt_violation) << ")\n";
    return strict ? kExitNumeric : kExitOk;
}

int cmd_fit(const FitArgs& a, std::ostream& out, std::ostream& err) {
    validate_fit_args(a);
    require_file(a.input, "--input");
    ensure_dir(a.out);
    const TimeSeriesDataset raw = read_dataset_csv(a.input, a.response);
    const Orders o = resolve_orders(a);
    print_hint(a, raw, o, err);
    const Standardized st = standardize(raw);

    const SelectionResult sel = run_selection(a, st.data, o.p, o.q, o.choose);
    const RegarmaFit& fit = *sel.best_fit;
    print_selection(sel, out);

    std::vector<MetricsReport> metrics;
    if (o.choose) {
        // Table layout: lasso, AR-only, MA-only and full model, each selected the same way.
        FitArgs lasso = a;
        lasso.order_method = "a";
        metrics.push_back(compute_metrics(*run_selection(lasso, st.data, 0, 0, false).best_fit,
                                          family_label(Family::Lasso, 0, 0, a.adaptive)));
        if (o.p > 0) {
            const auto s = run_selection(a, st.data, o.p, 0, true);
            metrics.push_back(
                compute_metrics(*s.best_fit, family_label(Family::Ar, s.best_p, 0, a.adaptive)));
        }
        if (o.q > 0) {
            const auto s = run_selection(a, st.data, 0, o.q, true);
            metrics.push_back(
                compute_metrics(*s.best_fit, family_label(Family::Ma, 0, s.best_q, a.adaptive)));
        }
        if (o.p > 0 && o.q > 0) {
            metrics.push_back(compute_metrics(
                fit, family_label(Family::Arma, sel.best_p, sel.best_q, a.adaptive)));
        }
    } else {
        metrics.push_back(compute_metrics(fit, model_label(fit.p(), fit.q(), a.adaptive)));
    }

    const fs::path dir(a.out);
    write_text_file(dir / "fit.json", fit_to_json(fit, raw.column_names(), &st.transform));
    write_metrics_csv(metrics, dir / "metrics.csv");
    const int lags = std::min(a.acf_lags, static_cast<int>(fit.residuals.size()) - 1);
    if (lags >= 1) write_acf_csv(residual_acf(fit.residuals, lags), dir / "residual_acf.csv");
    write_selection_table_csv(sel, dir / "selection.csv");

    for (const auto& m : metrics) {
        out << std::left << std::setw(18) << m.model_label << " mse " << format_double(m.mse)
            << "  mae " << format_double(m.mae) << "  bic " << format_double(m.bic) << "  df "
            << m.df << '\n';
    }
    return check_convergence(fit, a.strict, err);
}

int cmd_select(const FitArgs& a, std::ostream& out, std::ostream& err) {
    validate_fit_args(a);
    require_file(a.input, "--input");
    ensure_dir(a.out);
    const TimeSeriesDataset raw = read_dataset_csv(a.input, a.response);
    const Orders o = resolve_orders(a);
    print_hint(a, raw, o, err);
    const Standardized st = standardize(raw);
    const SelectionResult sel = run_selection(a, st.data, o.p, o.q, o.choose);
    print_selection(sel, out);
    write_selection_table_csv(sel, fs::path(a.out) / "selection.csv");
    return check_convergence(*sel.best_fit, a.strict, err);
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
    a.config.validate();
    ensure_dir(a.out);
    const SimulatedData sim = generate_dataset(a.config);
    const fs::path dir(a.out);
    write_dataset_csv(sim.data, dir / "data.csv");
    write_text_file(dir / "truth.json", truth_to_json(sim.truth, &a.config));
    out << "wrote " << (dir / "data.csv").string() << " (" << sim.data.T() << " rows, "
        << sim.data.r() + 1 << " columns) and " << (dir / "truth.json").string() << '\n';
    return kExitOk;
}

int cmd_bench(BenchArgs a, std::ostream& out, std::ostream& err) {
    if (!a.manifest.empty()) {
        require_file(a.manifest, "--manifest");
        a.grid = read_manifest(a.manifest);
    } else if (!a.seed) {
        throw Error(ErrorCode::Config, "bench requires --seed or --manifest");
    } else {
        a.grid.base_seed = *a.seed;
    }
    a.grid.validate();
    ensure_dir(a.out);
    const fs::path dir(a.out);
    const auto rows = run_comparison(a.grid);
    const auto summary = summarize_cells(rows);
    write_comparison_csv(rows, dir / "comparison.csv");
    write_summary_csv(summary, dir / "summary.csv");
    write_plot_data(summary, dir);
    write_manifest(a.grid, dir / "manifest.json");

    int aborted = 0, failed = 0;
    for (const auto& r : rows) {
        if (r.status == "aborted") ++aborted;
        else if (!r.ok()) ++failed;
    }
    out << "cells: " << a.grid.cell_count() << ", rows: " << rows.size() << ", aborted: " << aborted
        << ", errors: " << failed << '\n';
    if ((aborted > 0 || failed > 0) && a.strict) {
        err << "error: incomplete grid under --strict\n";
        return kExitNumeric;
    }
    return kExitOk;
}

int cmd_bounds(const BoundsArgs& a, std::ostream& out) {
    require_file(a.fit, "--fit");
    require_file(a.input, "--input");
    if (a.response.empty()) throw Error(ErrorCode::Config, "--response is required");
    LoadedFit loaded = fit_from_json(read_text_file(a.fit));
    const TimeSeriesDataset raw = read_dataset_csv(a.input, a.response);
    if (raw.column_names() != loaded.column_names || raw.T() != loaded.fit.T) {
        throw Error(ErrorCode::ShapeMismatch,
                    "dataset columns or length differ from the fit (" + std::to_string(raw.r()) +
                        " columns, T = " + std::to_string(raw.T()) + " vs " +
                        std::to_string(loaded.column_names.size()) + " columns, T = " +
                        std::to_string(loaded.fit.T) + ")");
    }
    const StandardizationTransform transform =
        loaded.has_transform ? loaded.transform : standardize(raw).transform;
    const TimeSeriesDataset ds = apply_standardization(raw, transform);
    RegarmaFit& fit = loaded.fit;
    restore_fit_series(fit, ds);

    std::optional<SimulationTruth> truth;
    if (!a.truth.empty()) {
        require_file(a.truth, "--truth");
        truth = truth_from_json(read_text_file(a.truth));
    }
    const std::optional<double> sigma = a.sigma ? a.sigma : (truth ? std::optional(truth->sigma) : std::nullopt);
    if (!sigma || !(*sigma > 0.0)) {
        throw Error(ErrorCode::Config, "a positive --sigma (or --truth) is required");
    }
    const BoundInputs b = realized_bound_inputs(fit, ds, *sigma / transform.y_scale);
    const double t5 = theorem5_bound(b);
    const double r2 = remark2_bound(b);

    out << "model: " << model_label(fit.p(), fit.q(), fit.spec.adaptive) << "  (n = " << b.n
        << ", r = " << b.r << ", p = " << b.p << ", q = " << b.q << ")\n"
        << "sigma (standardized): " << format_double(b.sigma) << '\n'
        << "K_lambda " << format_double(b.K_lambda) << "  K_gamma " << format_double(b.K_gamma)
        << "  K_tau " << format_double(b.K_tau) << "  K_max " << format_double(b.K_max())
        << "  K* " << format_double(b.K_star()) << '\n'
        << "M1 (X) " << format_double(b.M1) << "  M2 (AR) " << format_double(b.M2) << "  M3 (MA) "
        << format_double(b.M3) << "  M_max " << format_double(b.M_max()) << '\n'
        << "theorem5_bound " << format_double(t5) << '\n'
        << "remark2_bound  " << format_double(r2) << '\n';
    if (fit.p() == 0 && fit.q() == 0) {
        out << "note: p = q = 0, the bound reduces to the plain lasso prediction bound\n";
    }
    if (!truth) return kExitOk;

    if (truth->beta0.size() != fit.beta.size()) {
        throw Error(ErrorCode::ShapeMismatch, "truth beta length differs from the fit");
    }
    const Vector oracle = oracle_predictions(raw, *truth);
    const int truth_T0 = static_cast<int>(truth->phi0.size() + truth->theta0.size());
    const int start = std::max(truth_T0, fit.T0);
    const int count = fit.T - start;
    Vector predicted(count), target(count);
    for (int i = 0; i < count; ++i) {
        predicted[i] = fit.fitted[start + i - fit.T0];
        target[i] = transform.response_to_standardized(oracle[start + i - truth_T0]);
    }
    const double mspe = mspe_hat(predicted, target);
    const bool holds = mspe <= t5;
    out << "mspe_hat " << format_double(mspe) << "  (" << (holds ? "within" : "ABOVE")
        << " theorem5_bound)\n";
    return !holds && a.strict ? kExitNumeric : kExitOk;
}

template <class Fn>
int guarded(Fn&& fn, std::ostream& err) {
    try {
        return fn();
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.is_input_error() || e.code() == ErrorCode::Parse ? kExitInput : kExitNumeric;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumeric;
    }
}

void add_fit_options(CLI::App* cmd, FitArgs& a) {
    cmd->add_option("--input", a.input, "CSV with a header row");
    cmd->add_option("--response", a.response, "response column name");
    cmd->add_option("--p", a.p, "AR order");
    cmd->add_option("--q", a.q, "MA order");
    cmd->add_option("--pmax", a.pmax, "maximal AR order (order selection)");
    cmd->add_option("--qmax", a.qmax, "maximal MA order (order selection)");
    cmd->add_option("--criterion", a.criterion, "bic, aic or cv");
    cmd->add_option("--folds", a.folds, "blocked CV folds");
    cmd->add_flag("--adaptive,!--no-adaptive", a.adaptive, "adaptive weights (default on)");
    cmd->add_option("--order-method", a.order_method, "a (exhaustive) or b (shrinkage)");
    cmd->add_option("--pilot", a.pilot, "adaptive pilot: same or selected");
    cmd->add_option("--grid-size", a.grid_size, "penalty grid length");
    cmd->add_flag("--independent-grid", a.independent_grid, "3-D per-block penalty grid");
    cmd->add_option("--max-df-fraction", a.max_df_fraction, "df eligibility cap as a fraction of n");
    cmd->add_option("--lambda", a.lambda, "fixed regression penalty scale");
    cmd->add_option("--gamma", a.gamma, "fixed AR penalty scale");
    cmd->add_option("--tau", a.tau, "fixed MA penalty scale");
    cmd->add_option("--seed", [](const CLI::results_t&) { return true; },
                    "accepted for uniformity; fitting is deterministic")
        ->type_name("UINT")
        ->expected(1);
    cmd->add_option("--out", a.out, "output directory");
    cmd->add_flag("--strict", a.strict, "non-convergence is an error");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sparse regression with ARMA errors"};
    app.name("regarma");
    app.require_subcommand(1);

    FitArgs fit_args;
    auto* fit_cmd = app.add_subcommand("fit", "fit a model and write fit.json, metrics.csv, residual_acf.csv");
    add_fit_options(fit_cmd, fit_args);
    fit_cmd->add_option("--acf-lags", fit_args.acf_lags, "residual ACF lags");

    FitArgs select_args;
    auto* select_cmd = app.add_subcommand("select", "print the selected penalties and orders");
    add_fit_options(select_cmd, select_args);

    SimulateArgs sim;
    auto* sim_cmd = app.add_subcommand("simulate", "write a simulated dataset and its truth");
    sim_cmd->add_option("--T", sim.config.T, "series length");
    sim_cmd->add_option("--r", sim.config.r, "regressors");
    sim_cmd->add_option("--zero-prop", sim.config.zero_proportion, "fraction of zero betas");
    sim_cmd->add_option("--sigma", sim.config.sigma, "noise standard deviation");
    sim_cmd->add_option("--p", sim.config.p, "AR order");
    sim_cmd->add_option("--q", sim.config.q, "MA order");
    sim_cmd->add_option("--seed", sim.config.seed, "random seed");
    sim_cmd->add_option("--burn-in", sim.config.burn_in, "discarded warm-up length");
    sim_cmd->add_option("--out", sim.out, "output directory");

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "Monte Carlo method comparison");
    bench_cmd->add_option("--seed", bench.seed, "base seed (required without --manifest)");
    bench_cmd->add_option("--manifest", bench.manifest, "rerun the grid recorded in a manifest");
    bench_cmd->add_option("--T-values", bench.grid.T_values, "series lengths")->delimiter(',');
    bench_cmd->add_option("--r-values", bench.grid.r_values, "regressor counts")->delimiter(',');
    bench_cmd->add_option("--sigma-values", bench.grid.sigma_values, "noise levels")->delimiter(',');
    bench_cmd->add_option("--zero-props", bench.grid.zero_props, "sparsity levels")->delimiter(',');
    bench_cmd->add_option("--replicates", bench.grid.replicates, "replicates per cell");
    bench_cmd->add_option("--dgp-p", bench.grid.dgp_p, "true AR order");
    bench_cmd->add_option("--dgp-q", bench.grid.dgp_q, "true MA order");
    bench_cmd->add_option("--grid-size", bench.grid.penalty_grid_size, "penalty grid length");
    bench_cmd->add_option("--cell-budget", bench.grid.cell_budget_seconds, "seconds per cell");
    bench_cmd->add_option("--out", bench.out, "output directory");
    bench_cmd->add_flag("--strict", bench.strict, "aborted or failed cells are an error");

    BoundsArgs bounds;
    auto* bounds_cmd = app.add_subcommand("bounds", "realized prediction error bounds of a fit");
    bounds_cmd->add_option("--fit", bounds.fit, "fit.json from the fit command");
    bounds_cmd->add_option("--input", bounds.input, "dataset CSV the fit was made on");
    bounds_cmd->add_option("--response", bounds.response, "response column name");
    bounds_cmd->add_option("--sigma", bounds.sigma, "noise standard deviation (original units)");
    bounds_cmd->add_option("--truth", bounds.truth, "truth.json; enables the mspe_hat check");
    bounds_cmd->add_flag("--strict", bounds.strict, "mspe_hat above the bound is an error");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    }

    if (fit_cmd->parsed()) return guarded([&] { return cmd_fit(fit_args, out, err); }, err);
    if (select_cmd->parsed()) return guarded([&] { return cmd_select(select_args, out, err); }, err);
    if (sim_cmd->parsed()) return guarded([&] { return cmd_simulate(sim, out); }, err);
    if (bench_cmd->parsed()) return guarded([&] { return cmd_bench(bench, out, err); }, err);
    return guarded([&] { return cmd_bounds(bounds, out); }, err);
}

}  // namespace regarma::cli
