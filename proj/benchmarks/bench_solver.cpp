#include <algorithm>
#include <random>

#include <benchmark/benchmark.h>

#include "regarma/fit.hpp"
#include "regarma/lasso.hpp"
#include "regarma/select.hpp"
#include "regarma/simulate.hpp"

namespace {

regarma::Standardized make_data(int T, int r) {
    regarma::SimulationConfig cfg;
    cfg.T = T;
    cfg.r = r;
    cfg.p = 2;
    cfg.q = 1;
    cfg.seed = 5;
    return regarma::standardize(regarma::generate_dataset(cfg).data);
}

void BM_WeightedLasso(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const int k = static_cast<int>(state.range(1));
    regarma::Rng rng(3);
    std::normal_distribution<double> dist;
    regarma::Matrix H(n, k);
    for (int j = 0; j < k; ++j) {
        for (int i = 0; i < n; ++i) H(i, j) = dist(rng);
    }
    regarma::Vector beta = regarma::Vector::Zero(k);
    for (int j = 0; j < std::min(k, 5); ++j) beta[j] = 1.0 - 0.15 * j;
    regarma::Vector y = H * beta;
    for (int i = 0; i < n; ++i) y[i] += 0.5 * dist(rng);
    const regarma::Vector w = regarma::Vector::Constant(k, 0.05 * n);
    for (auto _ : state) {
        auto res = regarma::solve_weighted_lasso(H, y, w);
        benchmark::DoNotOptimize(res.coefficients.data());
    }
}
BENCHMARK(BM_WeightedLasso)->Args({100, 25})->Args({250, 200})->Args({250, 400});

void BM_FitAdaptive(benchmark::State& state) {
    const auto st = make_data(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    const auto grid = regarma::default_penalty_grid(st.data, 2, 1, 50);
    const auto base = grid[grid.size() / 2].expand(st.data.r(), 2, 1);
    for (auto _ : state) {
        auto fit = regarma::fit_adaptive_regarma(st.data, 2, 1, base);
        benchmark::DoNotOptimize(fit.objective);
    }
}
BENCHMARK(BM_FitAdaptive)->Args({100, 25})->Args({250, 200});

void BM_SelectBic(benchmark::State& state) {
    const auto st = make_data(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    for (auto _ : state) {
        auto sel = regarma::select_penalties(st.data, 2, 1, regarma::CriterionKind::BIC);
        benchmark::DoNotOptimize(sel.best_criterion);
    }
}
BENCHMARK(BM_SelectBic)->Args({100, 25})->Args({250, 200})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
