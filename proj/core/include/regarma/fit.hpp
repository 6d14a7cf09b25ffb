#pragma once

#include <string>
#include <vector>

#include "regarma/lasso.hpp"

namespace regarma {

inline constexpr double kZeroThreshold = 1e-10;

struct FitSpec {
    int p = 0;
    int q = 0;
    PenaltyConfig penalties;
    bool adaptive = false;
};

/// Estimated REGARMA(p, q) model on the standardized scale.
struct RegarmaFit {
    Vector beta;
    Vector phi;
    Vector theta;
    Vector residuals;  // length n, effective sample
    Vector fitted;     // length n
    double objective = 0.0;
    int df = 0;
    double sigma2_hat = 0.0;
    FitSpec spec;

    int T = 0;   // length of the series the model was fitted on
    int T0 = 0;  // p + q
    int n = 0;   // T - T0

    // Step-1 (regression + AR) coefficients and the length-T residual series
    // they induce; its lags fill the MA block.
    Vector step1_beta;
    Vector step1_phi;
    Vector step1_residuals;

    int iterations = 0;
    bool converged = false;
    double kkt_violation = 0.0;

    [[nodiscard]] int p() const noexcept { return static_cast<int>(phi.size()); }
    [[nodiscard]] int q() const noexcept { return static_cast<int>(theta.size()); }
    [[nodiscard]] int r() const noexcept { return static_cast<int>(beta.size()); }
    [[nodiscard]] double rss() const { return residuals.squaredNorm(); }
    /// Coefficients in design order (phi | theta | beta).
    [[nodiscard]] Vector stacked_coefficients() const;
};

struct FitOptions {
    SolverOptions solver;
    /// Extra passes that refresh the residual series from the latest
    /// coefficients and re-solve step 2. Zero gives the plain two-step fit.
    int refresh_iterations = 0;
    /// Optional previous fit of the same shape used as a warm start.
    const RegarmaFit* warm_start = nullptr;
};

/// Regression + AR(p) model (q = 0). The tau block of penalties is ignored.
RegarmaFit fit_regar(const TimeSeriesDataset& ds, int p, const PenaltyConfig& penalties,
                     const FitOptions& options = {});

/// Two-step REGARMA fit: REGAR residuals, then the full solve with their lags.
RegarmaFit fit_regarma(const TimeSeriesDataset& ds, int p, int q, const PenaltyConfig& penalties,
                       const FitOptions& options = {});

struct AdaptiveOptions {
    double exponent = 1.0;
    double cap = 1e6;
};

/// base_j / |pilot_j|^exponent, capped at `cap` (and equal to cap for zero pilots).
PenaltyConfig compute_adaptive_weights(const RegarmaFit& pilot, const PenaltyConfig& base,
                                       double exponent = 1.0, double cap = 1e6);

struct AdaptiveFit {
    RegarmaFit pilot;
    RegarmaFit fit;
};

/// Pilot REGARMA at the base penalties, then a re-fit with adaptive weights.
AdaptiveFit fit_adaptive_regarma_with_pilot(const TimeSeriesDataset& ds, int p, int q,
                                            const PenaltyConfig& base,
                                            const AdaptiveOptions& adaptive = {},
                                            const FitOptions& options = {},
                                            const RegarmaFit* pilot_warm_start = nullptr);

RegarmaFit fit_adaptive_regarma(const TimeSeriesDataset& ds, int p, int q,
                                const PenaltyConfig& base, double exponent = 1.0,
                                double cap = 1e6, const FitOptions& options = {});

/// Re-fit with weights derived from an existing pilot (no pilot solve).
RegarmaFit fit_weighted_from_pilot(const TimeSeriesDataset& ds, const RegarmaFit& pilot,
                                   const PenaltyConfig& base, const AdaptiveOptions& adaptive = {},
                                   const FitOptions& options = {});

/**
 * One-step prediction on the standardized scale:
 * x' beta + sum_j phi_j y_{t-j} + sum_i theta_i eps_{t-i}.
 *
 * Histories are in time order with the most recent value last.
 */
double predict_one_step(const RegarmaFit& fit, std::span<const double> history_y,
                        std::span<const double> x_row, std::span<const double> history_eps);

/// Versioned JSON document (format "regarma-fit", version 1).
std::string fit_to_json(const RegarmaFit& fit, const std::vector<std::string>& column_names,
                        const StandardizationTransform* transform = nullptr);

struct LoadedFit {
    RegarmaFit fit;
    std::vector<std::string> column_names;
    bool has_transform = false;
    StandardizationTransform transform;
};

LoadedFit fit_from_json(const std::string& text);

/// Rebuilds step1_residuals, fitted and residuals of a loaded fit from its data.
void restore_fit_series(RegarmaFit& fit, const TimeSeriesDataset& ds);

}  // namespace regarma
