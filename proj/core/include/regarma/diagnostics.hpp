#pragma once

#include <string>

#include "regarma/fit.hpp"

namespace regarma {

struct MetricsReport {
    double mse = 0.0;
    double mae = 0.0;
    double bic = 0.0;
    int df = 0;
    std::string model_label;
};

MetricsReport compute_metrics(const RegarmaFit& fit, std::string label = {});

/// Label in the usual table form: ADAPTIVE-LASSO, REGAR(p), REGMA(q), REGARMA(p,q).
std::string model_label(int p, int q, bool adaptive);

/// (1/n) ||predicted - oracle||^2
double mspe_hat(std::span<const double> predicted, std::span<const double> oracle);
double mspe_hat(const Vector& predicted, const Vector& oracle);

struct BoundInputs {
    double sigma = 1.0;
    int n = 1;
    int r = 0;
    int p = 0;
    int q = 0;
    double M1 = 0.0, M2 = 0.0, M3 = 0.0;           // design sup-norms: X, AR lags, MA lags
    double K_lambda = 0.0, K_gamma = 0.0, K_tau = 0.0;  // l1 budgets per block

    [[nodiscard]] double K_max() const noexcept;
    [[nodiscard]] double M_max() const noexcept;
    /// max{K_l^2, K_g^2, K_t^2, 2 K_l K_g, 2 K_l K_t, 2 K_g K_t}
    [[nodiscard]] double K_star() const noexcept;
};

/// (2 K_max M_max sigma / sqrt(n)) * sum of sqrt(2 ln(2a)) over nonzero a in (r, p, q).
double theorem5_bound(const BoundInputs& b);

/// theorem5_bound + 8 K* sum_{i,j} M_i M_j sqrt(2 ln(2 a_i a_j) / n), zero-order terms dropped.
double remark2_bound(const BoundInputs& b);

/// Realized (K, M) from a fit and the standardized data it was fitted on.
BoundInputs realized_bound_inputs(const RegarmaFit& fit, const TimeSeriesDataset& standardized,
                                  double sigma);

/// Sample autocorrelations at lags 1..max_lag (biased 1/n autocovariance; lag 0 is 1 by definition).
Vector residual_acf(std::span<const double> residuals, int max_lag);
Vector residual_acf(const Vector& residuals, int max_lag);

}  // namespace regarma
