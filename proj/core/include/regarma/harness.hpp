#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "regarma/select.hpp"
#include "regarma/simulate.hpp"

namespace regarma {

/// Worker count from REGARMA_THREADS, else hardware concurrency (at least 1).
int worker_count();

/// Runs fn(i) for i in [0, n) on up to `workers` threads. Exceptions propagate.
void parallel_for(int n, const std::function<void(int)>& fn, int workers = worker_count());

enum class Method { AdaptiveLasso, AdaptiveRegarma, Regar, Regma };

std::string_view to_string(Method m) noexcept;

struct ExperimentGrid {
    std::vector<int> T_values{50, 100, 150, 200, 250};
    std::vector<int> r_values{25, 75, 200, 300, 400};
    std::vector<double> sigma_values{0.5, 1.0, 1.5};
    std::vector<double> zero_props{0.9, 0.5, 0.1};
    int replicates = 10;
    std::uint64_t base_seed = 0;
    int dgp_p = 2;
    int dgp_q = 1;
    int penalty_grid_size = 50;
    double cell_budget_seconds = 600.0;

    void validate() const;
    [[nodiscard]] int cell_count() const;
};

struct GridCell {
    int index = 0;
    int T = 0;
    int r = 0;
    double sigma = 0.0;
    double zero_prop = 0.0;
};

std::vector<GridCell> enumerate_cells(const ExperimentGrid& grid);

/// Seed of the simulated dataset for (cell, replicate).
std::uint64_t replicate_seed(const ExperimentGrid& grid, int cell, int replicate);

struct ComparisonRow {
    Method method = Method::AdaptiveLasso;
    int cell = 0;
    int T = 0;
    int r = 0;
    double sigma = 0.0;
    double zero_prop = 0.0;
    int replicate = 0;
    std::uint64_t seed = 0;
    int p = 0;
    int q = 0;
    int n = 0;
    int df = 0;
    double mspe = 0.0;
    double bic = 0.0;
    double beta_mse = 0.0;
    double support_recovery = 0.0;
    double theorem5 = 0.0;
    double remark2 = 0.0;
    std::string status = "ok";  // "ok", "aborted" or "error: ..."

    [[nodiscard]] bool ok() const noexcept { return status == "ok"; }
};

/// All four methods on every (cell, replicate), rows in (cell, replicate, method) order.
std::vector<ComparisonRow> run_comparison(const ExperimentGrid& grid,
                                          int workers = worker_count());

/// Evaluates one method on one simulated replicate (exposed for tests).
ComparisonRow evaluate_method(const SimulatedData& sim, Method method, int dgp_p, int dgp_q,
                              int penalty_grid_size = 50);

struct CellSummary {
    Method method = Method::AdaptiveLasso;
    int cell = 0;
    int T = 0;
    int r = 0;
    double sigma = 0.0;
    double zero_prop = 0.0;
    int replicates = 0;
    double mean_mspe = 0.0;
    double mean_bic = 0.0;
    double mean_beta_mse = 0.0;
    double mean_support_recovery = 0.0;
};

std::vector<CellSummary> summarize_cells(const std::vector<ComparisonRow>& rows);

void write_comparison_csv(const std::vector<ComparisonRow>& rows, const std::filesystem::path& path);
void write_summary_csv(const std::vector<CellSummary>& rows, const std::filesystem::path& path);
/// Per-figure series: MSPE by (T, r), BIC by (T, r), beta MSE by (T, r), MSPE by (sigma, r, T).
void write_plot_data(const std::vector<CellSummary>& rows, const std::filesystem::path& dir);
void write_manifest(const ExperimentGrid& grid, const std::filesystem::path& path);
ExperimentGrid read_manifest(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Oracle-property, bias and normality probes.

struct OracleExperimentConfig {
    std::vector<int> T_values{100, 200, 400};
    int replicates = 100;
    int r = 10;
    double zero_prop = 0.9;
    double sigma = 0.5;
    int p = 2;
    int q = 1;
    std::uint64_t base_seed = 11;
};

struct OracleRow {
    int T = 0;
    double zero_recovery = 0.0;            // adaptive, true-zero coordinates estimated 0
    double nonzero_coverage = 0.0;         // adaptive, true-nonzero coordinates kept
    double zero_recovery_plain = 0.0;      // non-adaptive at the same base penalty
    double nonzero_coverage_plain = 0.0;
};

std::vector<OracleRow> run_oracle_experiment(const OracleExperimentConfig& config,
                                             int workers = worker_count());

struct BiasExperimentConfig {
    int T = 200;
    int replicates = 200;
    Vector beta0 = (Vector(5) << 0.8, 0.65, 0.5, 0.4, 0.3).finished();
    Vector phi0 = Vector::Zero(1);
    Vector theta0 = Vector::Zero(1);
    double sigma = 1.0;
    /// 0 selects both penalties by BIC; a positive value fixes the shared base
    /// penalty at this fraction of max_penalty for both fits.
    double penalty_fraction = 0.0;
    std::uint64_t base_seed = 23;
};

struct BiasResult {
    double mean_bias_lasso = 0.0;
    double se_lasso = 0.0;
    double mean_bias_adaptive = 0.0;
    double se_adaptive = 0.0;
    int replicates = 0;

    [[nodiscard]] double t_lasso() const { return mean_bias_lasso / se_lasso; }
};

/// Mean of (beta_hat - beta0) in original units over replicates and coordinates.
BiasResult run_bias_experiment(const BiasExperimentConfig& config, int workers = worker_count());

struct NormalityConfig {
    int T = 400;
    int replicates = 500;
    Vector beta0 = (Vector(5) << 0.8, -0.6, 0.0, 0.0, 0.0).finished();
    Vector phi0 = (Vector(1) << 0.5).finished();
    Vector theta0 = (Vector(1) << 0.4).finished();
    double sigma = 1.0;
    std::uint64_t base_seed = 31;
};

struct CoordinateSummary {
    std::string label;
    double mean = 0.0;
    double sd = 0.0;
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    double qq_correlation = 0.0;
};

struct NormalityReport {
    bool sufficient = false;
    int replicates = 0;
    std::vector<CoordinateSummary> coordinates;
};

/// sqrt(n)(estimate - truth) on the true support of the adaptive fit.
NormalityReport run_normality_probe(const NormalityConfig& config, int workers = worker_count());

/// Correlation between the sorted sample and Blom normal scores.
double normal_quantile_correlation(std::vector<double> sample);

}  // namespace regarma
