#pragma once

#include <vector>

#include "regarma/fit.hpp"

namespace regarma::detail {

struct TwoStep {
    SolveResult step1;        // coefficients: phi | beta
    SolveResult step2;        // coefficients: phi | theta | beta (== step1 when q = 0)
    Vector eps_hat;           // length T, zero before the step-1 sample
    LagDesign design;         // final design over all rows t = p+q+1..T
    std::vector<int> rows;    // rows of `design` used for fitting
};

/**
 * The two-step solve restricted to responses whose 0-based time index is
 * flagged in `mask` (all rows when mask is empty). Lag features always come
 * from the complete series.
 */
TwoStep two_step(const TimeSeriesDataset& ds, int p, int q, const PenaltyConfig& penalties,
                 const FitOptions& options, const std::vector<char>& mask,
                 const Vector* warm_step1, const Vector* warm_step2);

/// Penalties for the step-1 (phi | beta) solve.
Vector step1_weights(const PenaltyConfig& penalties);

}  // namespace regarma::detail
