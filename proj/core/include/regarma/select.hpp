#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "regarma/fit.hpp"

namespace regarma {

enum class CriterionKind { BIC, AIC, CV };

std::string_view to_string(CriterionKind kind) noexcept;
CriterionKind criterion_from_string(std::string_view name);

/**
 * BIC = n ln(RSS/n) + df ln(n), AIC = n ln(RSS/n) + 2 df, on the fit's
 * effective sample. A zero RSS yields -infinity (degenerate, noiseless data).
 */
double information_criterion(const RegarmaFit& fit, CriterionKind kind);

/// One grid point: a scalar multiplier per block, expanded to uniform weights.
struct PenaltyScales {
    double lambda = 0.0;
    double gamma = 0.0;
    double tau = 0.0;

    [[nodiscard]] PenaltyConfig expand(int r, int p, int q) const {
        return PenaltyConfig::uniform(r, p, q, lambda, gamma, tau);
    }
    friend bool operator==(const PenaltyScales&, const PenaltyScales&) = default;
};

/// Smallest shared penalty at which the (p, q) two-step fit is identically zero.
double max_penalty(const TimeSeriesDataset& ds, int p, int q);

/// `count` log-spaced shared scales from max_penalty down to ratio * max_penalty.
std::vector<PenaltyScales> default_penalty_grid(const TimeSeriesDataset& ds, int p, int q,
                                                int count = 50, double ratio = 1e-4);

/// Full 3-D product of per-block log-spaced scales (opt-in; count^3 points).
std::vector<PenaltyScales> independent_penalty_grid(const TimeSeriesDataset& ds, int p, int q,
                                                    int count = 8, double ratio = 1e-4);

enum class PilotMode {
    SameBase,  // pilot fitted at each grid point's own base penalty
    Selected,  // pilot fixed at the non-adaptive criterion-selected penalty
};

struct SelectionOptions {
    bool adaptive = true;
    AdaptiveOptions adaptive_weights;
    PilotMode pilot_mode = PilotMode::SameBase;
    /// Fits with df above this fraction of n are ineligible. On a
    /// nonincreasing grid the sweep stops at the first such fit.
    double max_df_fraction = 0.5;
    int folds = 5;              // CV only
    bool shuffle_folds = false; // CV only; must stay false
    FitOptions fit;
};

struct SelectionRow {
    PenaltyScales scales;
    int p = 0;
    int q = 0;
    int n = 0;
    int df = -1;  // -1 when the point was not fitted (sweep stopped)
    double criterion = 0.0;
    bool eligible = true;
};

struct SelectionResult {
    PenaltyScales best_scales;
    PenaltyConfig best_penalties;
    int best_p = 0;
    int best_q = 0;
    double best_criterion = 0.0;
    int best_df = 0;
    std::vector<SelectionRow> criterion_table;
    CriterionKind criterion_kind = CriterionKind::BIC;
    std::optional<RegarmaFit> best_fit;
};

/**
 * Fits at every grid point (warm-started in order), scores each with `kind`
 * and returns the table plus the best row. Ties go to smaller df, then
 * smaller p + q, then lexicographically smaller (lambda, gamma, tau).
 */
SelectionResult select_penalties(const TimeSeriesDataset& ds, int p, int q,
                                 std::span<const PenaltyScales> grid, CriterionKind kind,
                                 const SelectionOptions& options = {});

/// Overload using default_penalty_grid for the (p, q) shape.
SelectionResult select_penalties(const TimeSeriesDataset& ds, int p, int q, CriterionKind kind,
                                 const SelectionOptions& options = {});

/// Exhaustive (p, q) search; each order uses its own effective sample.
/// An empty grid means default_penalty_grid per order.
SelectionResult select_orders_method_a(const TimeSeriesDataset& ds, int p_max, int q_max,
                                       std::span<const PenaltyScales> grid, CriterionKind kind,
                                       const SelectionOptions& options = {});

/// Single (p_max, q_max) fit; orders are the largest lags with nonzero coefficients.
SelectionResult select_orders_method_b(const TimeSeriesDataset& ds, int p_max, int q_max,
                                       std::span<const PenaltyScales> grid, CriterionKind kind,
                                       const SelectionOptions& options = {});

/// Blocked K-fold CV over the effective sample; criterion = mean held-out MSE.
SelectionResult cross_validate(const TimeSeriesDataset& ds, int p, int q,
                               std::span<const PenaltyScales> grid, int folds,
                               const SelectionOptions& options = {});

/// [begin, end) row ranges of `folds` contiguous blocks over n rows.
std::vector<std::pair<int, int>> contiguous_folds(int n, int folds);

}  // namespace regarma
