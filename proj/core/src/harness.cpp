#include "regarma/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <thread>
#include <tuple>

#include <boost/math/distributions/normal.hpp>
#include <json.hpp>

#include "regarma/diagnostics.hpp"
#include "regarma/error.hpp"
#include "regarma/io.hpp"

namespace regarma {
namespace {

using Clock = std::chrono::steady_clock;

struct MethodOrders {
    int p;
    int q;
};

MethodOrders orders_for(Method m, int dgp_p, int dgp_q) {
    switch (m) {
        case Method::AdaptiveLasso: return {0, 0};
        case Method::AdaptiveRegarma: return {dgp_p, dgp_q};
        case Method::Regar: return {dgp_p, 0};
        case Method::Regma: return {0, dgp_q};
    }
    return {0, 0};
}

constexpr Method kMethods[] = {Method::AdaptiveLasso, Method::AdaptiveRegarma, Method::Regar,
                               Method::Regma};

SelectionResult select_bic(const TimeSeriesDataset& ds, int p, int q, bool adaptive,
                           int grid_size) {
    SelectionOptions opts;
    opts.adaptive = adaptive;
    const auto grid = default_penalty_grid(ds, p, q, grid_size);
    return select_penalties(ds, p, q, grid, CriterionKind::BIC, opts);
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    return out;
}

template <class Range>
std::string join_numbers(const Range& values) {
    std::string s;
    for (const auto& v : values) {
        if (!s.empty()) s += ' ';
        if constexpr (std::is_floating_point_v<std::decay_t<decltype(v)>>) {
            s += format_double(v);
        } else {
            s += std::to_string(v);
        }
    }
    return s;
}

struct Moments {
    double mean = 0.0;
    double sd = 0.0;
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
};

Moments sample_moments(const std::vector<double>& x) {
    Moments m;
    const double n = static_cast<double>(x.size());
    m.mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : x) {
        const double d = v - m.mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    m.sd = std::sqrt(m2 * n / std::max(1.0, n - 1.0));
    m.skewness = m2 > 0 ? m3 / std::pow(m2, 1.5) : 0.0;
    m.excess_kurtosis = m2 > 0 ? m4 / (m2 * m2) - 3.0 : 0.0;
    return m;
}

}  // namespace

int worker_count() {
    if (const char* env = std::getenv("REGARMA_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(int n, const std::function<void(int)>& fn, int workers) {
    if (n <= 0) return;
    workers = std::max(1, std::min(workers, n));
    if (workers == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (int i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

std::string_view to_string(Method m) noexcept {
    switch (m) {
        case Method::AdaptiveLasso: return "adaptive_lasso";
        case Method::AdaptiveRegarma: return "adaptive_regarma";
        case Method::Regar: return "regar";
        case Method::Regma: return "regma";
    }
    return "unknown";
}

void ExperimentGrid::validate() const {
    if (T_values.empty() || r_values.empty() || sigma_values.empty() || zero_props.empty()) {
        throw Error(ErrorCode::Config, "experiment grid lists must be nonempty");
    }
    if (replicates < 1) throw Error(ErrorCode::Config, "replicates must be >= 1");
    if (dgp_p < 0 || dgp_q < 0) throw Error(ErrorCode::Config, "DGP orders must be >= 0");
    if (penalty_grid_size < 1) throw Error(ErrorCode::Config, "penalty grid size must be >= 1");
}

int ExperimentGrid::cell_count() const {
    return static_cast<int>(T_values.size() * r_values.size() * sigma_values.size() *
                            zero_props.size());
}

std::vector<GridCell> enumerate_cells(const ExperimentGrid& grid) {
    std::vector<GridCell> cells;
    for (int T : grid.T_values) {
        for (int r : grid.r_values) {
            for (double s : grid.sigma_values) {
                for (double z : grid.zero_props) {
                    cells.push_back({static_cast<int>(cells.size()), T, r, s, z});
                }
            }
        }
    }
    return cells;
}

std::uint64_t replicate_seed(const ExperimentGrid& grid, int cell, int replicate) {
    return derive_seed(grid.base_seed, static_cast<std::uint64_t>(cell),
                       static_cast<std::uint64_t>(replicate));
}

ComparisonRow evaluate_method(const SimulatedData& sim, Method method, int dgp_p, int dgp_q,
                              int penalty_grid_size) {
    const auto [p, q] = orders_for(method, dgp_p, dgp_q);
    const Standardized st = standardize(sim.data);
    const SelectionResult sel = select_bic(st.data, p, q, true, penalty_grid_size);
    const RegarmaFit& fit = *sel.best_fit;

    ComparisonRow row;
    row.method = method;
    row.p = p;
    row.q = q;
    row.n = fit.n;
    row.df = fit.df;

    // Compare on the time points usable by both the truth and the fitted model.
    const Vector oracle = oracle_predictions(sim.data, sim.truth);
    const int truth_T0 = dgp_p + dgp_q;
    const int start = std::max(truth_T0, fit.T0);
    const int count = sim.data.T() - start;
    Vector predicted(count), target(count);
    for (int i = 0; i < count; ++i) {
        const int t = start + i;
        predicted[i] = fit.fitted[t - fit.T0];
        target[i] = st.transform.response_to_standardized(oracle[t - truth_T0]);
    }
    row.mspe = mspe_hat(predicted, target);
    row.bic = information_criterion(fit, CriterionKind::BIC);

    const Vector beta = st.transform.beta_to_original(fit.beta);
    row.beta_mse = (beta - sim.truth.beta0).squaredNorm() / static_cast<double>(beta.size());
    int agree = 0;
    for (Eigen::Index j = 0; j < beta.size(); ++j) {
        const bool est_nz = std::abs(fit.beta[j]) > kZeroThreshold;
        const bool true_nz = sim.truth.beta0[j] != 0.0;
        agree += est_nz == true_nz ? 1 : 0;
    }
    row.support_recovery = static_cast<double>(agree) / static_cast<double>(beta.size());

    const double sigma_std = sim.truth.sigma / st.transform.y_scale;
    const BoundInputs b = realized_bound_inputs(fit, st.data, sigma_std);
    row.theorem5 = theorem5_bound(b);
    row.remark2 = remark2_bound(b);
    return row;
}

std::vector<ComparisonRow> run_comparison(const ExperimentGrid& grid, int workers) {
    grid.validate();
    const auto cells = enumerate_cells(grid);
    const int reps = grid.replicates;
    const int tasks = static_cast<int>(cells.size()) * reps;
    constexpr int kMethodCount = static_cast<int>(std::size(kMethods));
    std::vector<ComparisonRow> rows(static_cast<std::size_t>(tasks) * kMethodCount);
    std::vector<std::atomic<double>> cell_seconds(cells.size());
    for (auto& c : cell_seconds) c = 0.0;

    parallel_for(tasks, [&](int task) {
        const GridCell& cell = cells[task / reps];
        const int rep = task % reps;
        const std::uint64_t seed = replicate_seed(grid, cell.index, rep);
        auto fill = [&](ComparisonRow& row, Method m) {
            const auto [p, q] = orders_for(m, grid.dgp_p, grid.dgp_q);
            row.method = m;
            row.cell = cell.index;
            row.T = cell.T;
            row.r = cell.r;
            row.sigma = cell.sigma;
            row.zero_prop = cell.zero_prop;
            row.replicate = rep;
            row.seed = seed;
            row.p = p;
            row.q = q;
        };
        std::optional<SimulatedData> sim;
        std::string sim_error;
        try {
            SimulationConfig cfg{cell.T, cell.r, cell.zero_prop, cell.sigma,
                                 grid.dgp_p, grid.dgp_q, seed, 500};
            sim = generate_dataset(cfg);
        } catch (const std::exception& e) {
            sim_error = e.what();
        }
        for (int k = 0; k < kMethodCount; ++k) {
            ComparisonRow& row = rows[static_cast<std::size_t>(task) * kMethodCount + k];
            const Method m = kMethods[k];
            if (!sim) {
                fill(row, m);
                row.status = "error: " + sim_error;
                continue;
            }
            if (cell_seconds[cell.index].load() > grid.cell_budget_seconds) {
                fill(row, m);
                row.status = "aborted";
                continue;
            }
            const auto start = Clock::now();
            try {
                row = evaluate_method(*sim, m, grid.dgp_p, grid.dgp_q, grid.penalty_grid_size);
                fill(row, m);
            } catch (const std::exception& e) {
                fill(row, m);
                row.status = std::string("error: ") + e.what();
            }
            const double secs = std::chrono::duration<double>(Clock::now() - start).count();
            double cur = cell_seconds[cell.index].load();
            while (!cell_seconds[cell.index].compare_exchange_weak(cur, cur + secs)) {
            }
        }
    }, workers);
    return rows;
}

std::vector<CellSummary> summarize_cells(const std::vector<ComparisonRow>& rows) {
    std::map<std::pair<int, int>, CellSummary> acc;
    for (const auto& row : rows) {
        if (!row.ok()) continue;
        auto& s = acc[{row.cell, static_cast<int>(row.method)}];
        s.method = row.method;
        s.cell = row.cell;
        s.T = row.T;
        s.r = row.r;
        s.sigma = row.sigma;
        s.zero_prop = row.zero_prop;
        s.replicates += 1;
        s.mean_mspe += row.mspe;
        s.mean_bic += row.bic;
        s.mean_beta_mse += row.beta_mse;
        s.mean_support_recovery += row.support_recovery;
    }
    std::vector<CellSummary> out;
    for (auto& [key, s] : acc) {
        const double k = s.replicates;
        s.mean_mspe /= k;
        s.mean_bic /= k;
        s.mean_beta_mse /= k;
        s.mean_support_recovery /= k;
        out.push_back(s);
    }
    return out;
}

void write_comparison_csv(const std::vector<ComparisonRow>& rows, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "method,cell,T,r,sigma,zero_prop,replicate,seed,p,q,n,df,mspe,bic,beta_mse,"
           "support_recovery,theorem5_bound,remark2_bound,status\n";
    for (const auto& r : rows) {
        out << to_string(r.method) << ',' << r.cell << ',' << r.T << ',' << r.r << ','
            << format_double(r.sigma) << ',' << format_double(r.zero_prop) << ',' << r.replicate
            << ',' << r.seed << ',' << r.p << ',' << r.q << ',' << r.n << ',' << r.df << ','
            << format_double(r.mspe) << ',' << format_double(r.bic) << ','
            << format_double(r.beta_mse) << ',' << format_double(r.support_recovery) << ','
            << format_double(r.theorem5) << ',' << format_double(r.remark2) << ',' << r.status
            << '\n';
    }
}

void write_summary_csv(const std::vector<CellSummary>& rows, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "method,cell,T,r,sigma,zero_prop,replicates,mean_mspe,mean_bic,mean_beta_mse,"
           "mean_support_recovery\n";
    for (const auto& s : rows) {
        out << to_string(s.method) << ',' << s.cell << ',' << s.T << ',' << s.r << ','
            << format_double(s.sigma) << ',' << format_double(s.zero_prop) << ',' << s.replicates
            << ',' << format_double(s.mean_mspe) << ',' << format_double(s.mean_bic) << ','
            << format_double(s.mean_beta_mse) << ',' << format_double(s.mean_support_recovery)
            << '\n';
    }
}

void write_plot_data(const std::vector<CellSummary>& rows, const std::filesystem::path& dir) {
    struct Acc {
        double mspe = 0, bic = 0, beta = 0;
        int k = 0;
    };
    using Key = std::tuple<int, int, std::string>;
    std::map<Key, Acc> by_T_r;
    std::map<std::tuple<double, int, int, std::string>, Acc> by_sigma;
    for (const auto& s : rows) {
        const std::string m(to_string(s.method));
        auto add = [&](Acc& a) {
            a.mspe += s.mean_mspe * s.replicates;
            a.bic += s.mean_bic * s.replicates;
            a.beta += s.mean_beta_mse * s.replicates;
            a.k += s.replicates;
        };
        add(by_T_r[{s.T, s.r, m}]);
        add(by_sigma[{s.sigma, s.r, s.T, m}]);
    }
    auto emit_T_r = [&](const std::string& file, const std::string& column, auto pick) {
        auto out = open_out(dir / file);
        out << "T,r,method," << column << '\n';
        for (const auto& [key, a] : by_T_r) {
            out << std::get<0>(key) << ',' << std::get<1>(key) << ',' << std::get<2>(key) << ','
                << format_double(pick(a) / a.k) << '\n';
        }
    };
    emit_T_r("figure_mspe_by_T_r.csv", "mean_mspe", [](const Acc& a) { return a.mspe; });
    emit_T_r("figure_bic_by_T_r.csv", "mean_bic", [](const Acc& a) { return a.bic; });
    emit_T_r("figure_beta_mse_by_T_r.csv", "mean_beta_mse", [](const Acc& a) { return a.beta; });
    auto out = open_out(dir / "figure_mspe_by_sigma.csv");
    out << "sigma,r,T,method,mean_mspe\n";
    for (const auto& [key, a] : by_sigma) {
        out << format_double(std::get<0>(key)) << ',' << std::get<1>(key) << ','
            << std::get<2>(key) << ',' << std::get<3>(key) << ',' << format_double(a.mspe / a.k)
            << '\n';
    }
}

void write_manifest(const ExperimentGrid& grid, const std::filesystem::path& path) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["format"] = "regarma-bench-manifest";
    j["version"] = 1;
    j["generator"] = "regarma 0.1.0";
    j["grid"] = {{"T_values", grid.T_values},
                 {"r_values", grid.r_values},
                 {"sigma_values", grid.sigma_values},
                 {"zero_props", grid.zero_props},
                 {"replicates", grid.replicates},
                 {"base_seed", grid.base_seed},
                 {"dgp_p", grid.dgp_p},
                 {"dgp_q", grid.dgp_q},
                 {"penalty_grid_size", grid.penalty_grid_size},
                 {"cell_budget_seconds", grid.cell_budget_seconds}};
    ordered_json seeds = ordered_json::array();
    for (const auto& c : enumerate_cells(grid)) {
        for (int rep = 0; rep < grid.replicates; ++rep) {
            seeds.push_back({{"cell", c.index},
                             {"T", c.T},
                             {"r", c.r},
                             {"sigma", c.sigma},
                             {"zero_prop", c.zero_prop},
                             {"replicate", rep},
                             {"seed", replicate_seed(grid, c.index, rep)}});
        }
    }
    j["seeds"] = std::move(seeds);
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

ExperimentGrid read_manifest(const std::filesystem::path& path) {
    using nlohmann::json;
    try {
        const json j = json::parse(read_text_file(path));
        if (j.at("format").get<std::string>() != "regarma-bench-manifest") {
            throw Error(ErrorCode::Parse, "not a bench manifest");
        }
        const json& g = j.at("grid");
        ExperimentGrid grid;
        grid.T_values = g.at("T_values").get<std::vector<int>>();
        grid.r_values = g.at("r_values").get<std::vector<int>>();
        grid.sigma_values = g.at("sigma_values").get<std::vector<double>>();
        grid.zero_props = g.at("zero_props").get<std::vector<double>>();
        grid.replicates = g.at("replicates").get<int>();
        grid.base_seed = g.at("base_seed").get<std::uint64_t>();
        grid.dgp_p = g.at("dgp_p").get<int>();
        grid.dgp_q = g.at("dgp_q").get<int>();
        grid.penalty_grid_size = g.at("penalty_grid_size").get<int>();
        grid.cell_budget_seconds = g.at("cell_budget_seconds").get<double>();
        grid.validate();
        if (j.contains("seeds")) {
            for (const auto& s : j.at("seeds")) {
                const int cell = s.at("cell").get<int>();
                const int rep = s.at("replicate").get<int>();
                if (s.at("seed").get<std::uint64_t>() != replicate_seed(grid, cell, rep)) {
                    throw Error(ErrorCode::Config, "manifest seed for cell " + std::to_string(cell) +
                                                       " replicate " + std::to_string(rep) +
                                                       " does not match the base seed");
                }
            }
        }
        return grid;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Parse, std::string("manifest: ") + e.what());
    }
}

std::vector<OracleRow> run_oracle_experiment(const OracleExperimentConfig& config, int workers) {
    if (config.T_values.empty() || config.replicates < 1) {
        throw Error(ErrorCode::Config, "oracle experiment needs T values and replicates");
    }
    struct Counts {
        int zero_total = 0, zero_hit = 0, nz_total = 0, nz_hit = 0;
        int zero_hit_plain = 0, nz_hit_plain = 0;
    };
    const int reps = config.replicates;
    const int tasks = static_cast<int>(config.T_values.size()) * reps;
    std::vector<Counts> counts(tasks);
    parallel_for(tasks, [&](int task) {
        const int ti = task / reps;
        const int rep = task % reps;
        const int T = config.T_values[ti];
        SimulationConfig cfg{T, config.r, config.zero_prop, config.sigma, config.p, config.q,
                             derive_seed(config.base_seed, static_cast<std::uint64_t>(T),
                                         static_cast<std::uint64_t>(rep)),
                             500};
        const SimulatedData sim = generate_dataset(cfg);
        const Standardized st = standardize(sim.data);
        const SelectionResult sel = select_bic(st.data, config.p, config.q, true, 50);
        const RegarmaFit& adaptive = *sel.best_fit;
        const RegarmaFit plain = fit_regarma(st.data, config.p, config.q, sel.best_penalties);

        Vector truth(config.p + config.q + config.r);
        truth << sim.truth.phi0, sim.truth.theta0, sim.truth.beta0;
        const Vector est = adaptive.stacked_coefficients();
        const Vector est_plain = plain.stacked_coefficients();
        Counts& c = counts[task];
        for (Eigen::Index j = 0; j < truth.size(); ++j) {
            const bool nz = std::abs(est[j]) > kZeroThreshold;
            const bool nz_plain = std::abs(est_plain[j]) > kZeroThreshold;
            if (truth[j] == 0.0) {
                ++c.zero_total;
                c.zero_hit += nz ? 0 : 1;
                c.zero_hit_plain += nz_plain ? 0 : 1;
            } else {
                ++c.nz_total;
                c.nz_hit += nz ? 1 : 0;
                c.nz_hit_plain += nz_plain ? 1 : 0;
            }
        }
    }, workers);

    std::vector<OracleRow> out;
    for (std::size_t ti = 0; ti < config.T_values.size(); ++ti) {
        Counts sum;
        for (int rep = 0; rep < reps; ++rep) {
            const Counts& c = counts[ti * reps + rep];
            sum.zero_total += c.zero_total;
            sum.zero_hit += c.zero_hit;
            sum.nz_total += c.nz_total;
            sum.nz_hit += c.nz_hit;
            sum.zero_hit_plain += c.zero_hit_plain;
            sum.nz_hit_plain += c.nz_hit_plain;
        }
        auto frac = [](int a, int b) { return b == 0 ? 1.0 : static_cast<double>(a) / b; };
        out.push_back({config.T_values[ti], frac(sum.zero_hit, sum.zero_total),
                       frac(sum.nz_hit, sum.nz_total), frac(sum.zero_hit_plain, sum.zero_total),
                       frac(sum.nz_hit_plain, sum.nz_total)});
    }
    return out;
}

BiasResult run_bias_experiment(const BiasExperimentConfig& config, int workers) {
    if (config.replicates < 2) throw Error(ErrorCode::Config, "bias experiment needs >= 2 replicates");
    if (!(config.penalty_fraction >= 0.0)) {
        throw Error(ErrorCode::Config, "penalty_fraction must be >= 0");
    }
    for (Eigen::Index j = 0; j < config.beta0.size(); ++j) {
        if (!(config.beta0[j] > 0.0)) {
            throw Error(ErrorCode::Config, "bias experiment needs an all-positive beta truth");
        }
    }
    const int p = static_cast<int>(config.phi0.size());
    const int q = static_cast<int>(config.theta0.size());
    const int r = static_cast<int>(config.beta0.size());
    const SimulationTruth truth{config.beta0, config.phi0, config.theta0, config.sigma};
    std::vector<double> bias_plain(config.replicates), bias_adaptive(config.replicates);
    parallel_for(config.replicates, [&](int rep) {
        SimulationConfig cfg{config.T, r, 0.0, config.sigma, p, q,
                             derive_seed(config.base_seed, static_cast<std::uint64_t>(rep)), 500};
        const SimulatedData sim = generate_dataset(cfg, truth);
        const Standardized st = standardize(sim.data);
        auto mean_bias = [&](bool adaptive) {
            Vector est;
            if (config.penalty_fraction > 0.0) {
                const double lam = config.penalty_fraction * max_penalty(st.data, p, q);
                const PenaltyConfig base = PenaltyConfig::uniform(r, p, q, lam, lam, lam);
                est = adaptive ? fit_adaptive_regarma(st.data, p, q, base).beta
                               : fit_regarma(st.data, p, q, base).beta;
            } else {
                est = select_bic(st.data, p, q, adaptive, 50).best_fit->beta;
            }
            return (st.transform.beta_to_original(est) - config.beta0).mean();
        };
        bias_plain[rep] = mean_bias(false);
        bias_adaptive[rep] = mean_bias(true);
    }, workers);

    BiasResult res;
    res.replicates = config.replicates;
    const Moments a = sample_moments(bias_plain);
    const Moments b = sample_moments(bias_adaptive);
    const double root = std::sqrt(static_cast<double>(config.replicates));
    res.mean_bias_lasso = a.mean;
    res.se_lasso = a.sd / root;
    res.mean_bias_adaptive = b.mean;
    res.se_adaptive = b.sd / root;
    return res;
}

double normal_quantile_correlation(std::vector<double> sample) {
    const std::size_t n = sample.size();
    if (n < 3) throw Error(ErrorCode::TooFewSamples, "need at least 3 values");
    std::sort(sample.begin(), sample.end());
    const boost::math::normal_distribution<double> std_normal;
    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double prob = (static_cast<double>(i + 1) - 0.375) / (static_cast<double>(n) + 0.25);
        scores[i] = boost::math::quantile(std_normal, prob);
    }
    const double mx = std::accumulate(sample.begin(), sample.end(), 0.0) / n;
    const double my = std::accumulate(scores.begin(), scores.end(), 0.0) / n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (sample[i] - mx) * (scores[i] - my);
        sxx += (sample[i] - mx) * (sample[i] - mx);
        syy += (scores[i] - my) * (scores[i] - my);
    }
    if (sxx == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

NormalityReport run_normality_probe(const NormalityConfig& config, int workers) {
    NormalityReport report;
    report.replicates = config.replicates;
    // Distributional summaries of fewer replicates than this are not meaningful.
    constexpr int kMinReplicates = 20;
    if (config.replicates < kMinReplicates) {
        report.sufficient = false;
        return report;
    }
    report.sufficient = true;
    const int p = static_cast<int>(config.phi0.size());
    const int q = static_cast<int>(config.theta0.size());
    const int r = static_cast<int>(config.beta0.size());
    const SimulationTruth truth{config.beta0, config.phi0, config.theta0, config.sigma};

    Vector truth_stacked(p + q + r);
    truth_stacked << config.phi0, config.theta0, config.beta0;
    std::vector<int> support;
    std::vector<std::string> labels;
    for (int j = 0; j < p + q + r; ++j) {
        if (truth_stacked[j] == 0.0) continue;
        support.push_back(j);
        if (j < p) labels.push_back("phi" + std::to_string(j + 1));
        else if (j < p + q) labels.push_back("theta" + std::to_string(j - p + 1));
        else labels.push_back("beta" + std::to_string(j - p - q + 1));
    }

    std::vector<std::vector<double>> draws(support.size(), std::vector<double>(config.replicates));
    parallel_for(config.replicates, [&](int rep) {
        SimulationConfig cfg{config.T, r, 0.0, config.sigma, p, q,
                             derive_seed(config.base_seed, static_cast<std::uint64_t>(rep)), 500};
        const SimulatedData sim = generate_dataset(cfg, truth);
        const Standardized st = standardize(sim.data);
        const SelectionResult sel = select_bic(st.data, p, q, true, 50);
        const RegarmaFit& fit = *sel.best_fit;
        Vector est(p + q + r);
        est << fit.phi, fit.theta, st.transform.beta_to_original(fit.beta);
        const double root_n = std::sqrt(static_cast<double>(fit.n));
        for (std::size_t k = 0; k < support.size(); ++k) {
            const int j = support[k];
            draws[k][rep] = root_n * (est[j] - truth_stacked[j]);
        }
    }, workers);

    for (std::size_t k = 0; k < support.size(); ++k) {
        const Moments m = sample_moments(draws[k]);
        report.coordinates.push_back({labels[k], m.mean, m.sd, m.skewness, m.excess_kurtosis,
                                      normal_quantile_correlation(draws[k])});
    }
    return report;
}

}  // namespace regarma
