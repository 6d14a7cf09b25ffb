#include <doctest.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <random>

#include "regarma/error.hpp"
#include "regarma/harness.hpp"
#include "regarma/io.hpp"

using namespace regarma;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("regarma_harness_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

ExperimentGrid single_cell(int T, int r, int reps, std::uint64_t seed) {
    ExperimentGrid g;
    g.T_values = {T};
    g.r_values = {r};
    g.sigma_values = {0.5};
    g.zero_props = {0.5};
    g.replicates = reps;
    g.base_seed = seed;
    return g;
}

}  // namespace

TEST_CASE("parallel_for visits every index once") {
    std::vector<std::atomic<int>> hits(100);
    parallel_for(100, [&](int i) { hits[i]++; }, 4);
    for (auto& h : hits) CHECK(h.load() == 1);
    CHECK_THROWS_AS(parallel_for(10, [](int i) { if (i == 3) throw Error(ErrorCode::Config, "x"); }, 3),
                    Error);
}

TEST_CASE("worker count honours the environment") {
    setenv("REGARMA_THREADS", "3", 1);
    CHECK(worker_count() == 3);
    setenv("REGARMA_THREADS", "junk", 1);
    CHECK(worker_count() >= 1);
    unsetenv("REGARMA_THREADS");
}

TEST_CASE("grid enumeration and validation") {
    ExperimentGrid g;
    CHECK(g.cell_count() == 5 * 5 * 3 * 3);
    CHECK(enumerate_cells(g).size() == 225);
    g.replicates = 0;
    CHECK_THROWS_AS(g.validate(), Error);
    g = {};
    g.T_values.clear();
    CHECK_THROWS_AS(g.validate(), Error);
    CHECK(replicate_seed(ExperimentGrid{}, 0, 0) != replicate_seed(ExperimentGrid{}, 0, 1));
}

TEST_CASE("single cell yields four rows per replicate") {
    const auto grid = single_cell(100, 25, 10, 1);
    const auto rows = run_comparison(grid, 2);
    CHECK(rows.size() == 40);
    for (const auto& r : rows) {
        CHECK(r.ok());
        CHECK(std::isfinite(r.mspe));
        CHECK(r.theorem5 <= r.remark2);
    }
    CHECK(rows[0].method == Method::AdaptiveLasso);
    CHECK(rows[1].method == Method::AdaptiveRegarma);
    CHECK(rows[1].p == 2);
    CHECK(rows[1].q == 1);
    CHECK(rows[2].q == 0);
    CHECK(rows[3].p == 0);
}

TEST_CASE("results do not depend on the worker count") {
    const auto grid = single_cell(60, 10, 3, 2);
    const auto a = run_comparison(grid, 1);
    const auto b = run_comparison(grid, 3);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].mspe == b[i].mspe);
        CHECK(a[i].seed == b[i].seed);
    }
}

TEST_CASE("REGARMA beats the lasso on REGARMA data") {
    const auto rows = run_comparison(single_cell(250, 25, 10, 3), 1);
    int wins = 0;
    for (std::size_t i = 0; i < rows.size(); i += 4) wins += rows[i + 1].mspe < rows[i].mspe;
    CHECK(wins >= 8);
}

TEST_CASE("without dynamics REGARMA and the lasso are close") {
    auto grid = single_cell(150, 10, 10, 4);
    grid.dgp_p = 0;
    grid.dgp_q = 0;
    const auto rows = run_comparison(grid, 1);
    std::vector<double> diff;
    for (std::size_t i = 0; i < rows.size(); i += 4) {
        CHECK(rows[i + 1].p == 0);
        diff.push_back(rows[i + 1].mspe - rows[i].mspe);
    }
    double mean = 0, var = 0;
    for (double d : diff) mean += d;
    mean /= diff.size();
    for (double d : diff) var += (d - mean) * (d - mean);
    const double se = std::sqrt(var / (diff.size() - 1) / diff.size());
    CHECK(std::abs(mean) <= 2 * se + 1e-12);
}

TEST_CASE("a tiny budget aborts instead of dropping cells") {
    auto grid = single_cell(80, 10, 3, 5);
    grid.cell_budget_seconds = 0.0;
    const auto rows = run_comparison(grid, 1);
    CHECK(rows.size() == 12);
    int aborted = 0;
    for (const auto& r : rows) aborted += r.status == "aborted";
    CHECK(aborted >= 1);
    CHECK(rows[0].ok());
}

TEST_CASE("failing cells are marked, not dropped") {
    auto grid = single_cell(3, 5, 2, 6);
    const auto rows = run_comparison(grid, 1);
    CHECK(rows.size() == 8);
    for (const auto& r : rows) CHECK(r.status.rfind("error", 0) == 0);
}

TEST_CASE("summaries, plot data and manifest") {
    const auto grid = single_cell(60, 10, 2, 7);
    const auto rows = run_comparison(grid, 1);
    const auto summary = summarize_cells(rows);
    CHECK(summary.size() == 4);
    CHECK(summary[0].replicates == 2);
    const auto dir = scratch("outputs");
    write_comparison_csv(rows, dir / "comparison.csv");
    write_summary_csv(summary, dir / "summary.csv");
    write_plot_data(summary, dir);
    write_manifest(grid, dir / "manifest.json");
    for (const char* f : {"comparison.csv", "summary.csv", "figure_mspe_by_T_r.csv",
                          "figure_bic_by_T_r.csv", "figure_beta_mse_by_T_r.csv",
                          "figure_mspe_by_sigma.csv", "manifest.json"}) {
        CHECK(fs::exists(dir / f));
    }
    const auto table = read_csv(dir / "comparison.csv");
    CHECK(table.rows.size() == 8);

    const std::string manifest = read_text_file(dir / "manifest.json");
    for (const auto& c : enumerate_cells(grid)) {
        for (int rep = 0; rep < grid.replicates; ++rep) {
            CHECK(manifest.find(std::to_string(replicate_seed(grid, c.index, rep))) !=
                  std::string::npos);
        }
    }
    const auto back = read_manifest(dir / "manifest.json");
    CHECK(back.T_values == grid.T_values);
    CHECK(back.base_seed == grid.base_seed);
    CHECK(back.replicates == grid.replicates);

    std::string tampered = manifest;
    const std::string seed = std::to_string(replicate_seed(grid, 0, 1));
    tampered.replace(tampered.find(seed), seed.size(), "12345");
    write_text_file(dir / "bad.json", tampered);
    CHECK_THROWS_AS((void)read_manifest(dir / "bad.json"), Error);
}

TEST_CASE("oracle experiment shape") {
    OracleExperimentConfig cfg;
    cfg.T_values = {100, 200};
    cfg.replicates = 4;
    const auto rows = run_oracle_experiment(cfg, 2);
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) {
        CHECK(r.zero_recovery >= 0.0);
        CHECK(r.zero_recovery <= 1.0);
        CHECK(r.zero_recovery_plain <= r.zero_recovery + 1e-12);
    }
}

TEST_CASE("bias experiment guards") {
    BiasExperimentConfig cfg;
    cfg.replicates = 1;
    CHECK_THROWS_AS((void)run_bias_experiment(cfg), Error);
    cfg.replicates = 10;
    cfg.beta0[0] = -1;
    CHECK_THROWS_AS((void)run_bias_experiment(cfg), Error);
    cfg.beta0[0] = 1;
    cfg.penalty_fraction = -0.1;
    CHECK_THROWS_AS((void)run_bias_experiment(cfg), Error);
}

TEST_CASE("plain lasso at half the maximal penalty shrinks toward zero") {
    BiasExperimentConfig cfg;
    cfg.replicates = 200;
    cfg.penalty_fraction = 0.5;
    const auto res = run_bias_experiment(cfg);
    CHECK(res.mean_bias_lasso < 0.0);
    CHECK(std::abs(res.t_lasso()) > 2.0);
}

TEST_CASE("noiseless bias is small for the adaptive fit") {
    BiasExperimentConfig cfg;
    cfg.replicates = 5;
    cfg.sigma = 1e-12;
    const auto res = run_bias_experiment(cfg, 1);
    CHECK(std::abs(res.mean_bias_adaptive) < 1e-3);
}

TEST_CASE("normality probe needs replicates") {
    NormalityConfig cfg;
    cfg.replicates = 1;
    const auto rep = run_normality_probe(cfg);
    CHECK_FALSE(rep.sufficient);
    CHECK(rep.coordinates.empty());
}

TEST_CASE("normal quantile correlation") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> d;
    std::vector<double> x(500);
    for (double& v : x) v = d(rng);
    CHECK(normal_quantile_correlation(x) > 0.99);
    std::exponential_distribution<double> e;
    for (double& v : x) v = e(rng);
    CHECK(normal_quantile_correlation(x) < 0.97);
    CHECK_THROWS_AS((void)normal_quantile_correlation({1.0, 2.0}), Error);
}

TEST_CASE("method names") {
    CHECK(to_string(Method::AdaptiveLasso) == "adaptive_lasso");
    CHECK(to_string(Method::AdaptiveRegarma) == "adaptive_regarma");
    CHECK(to_string(Method::Regar) == "regar");
    CHECK(to_string(Method::Regma) == "regma");
}
