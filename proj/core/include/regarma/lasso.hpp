#pragma once

#include <optional>

#include "regarma/dataset.hpp"

namespace regarma {

/// Per-coefficient l1 weights for the regression (lambda), AR (gamma) and MA (tau) blocks.
struct PenaltyConfig {
    Vector lambda;  // length r
    Vector gamma;   // length p
    Vector tau;     // length q

    static PenaltyConfig uniform(int r, int p, int q, double lambda, double gamma, double tau);
    static PenaltyConfig uniform(int r, int p, int q, double value) {
        return uniform(r, p, q, value, value, value);
    }

    [[nodiscard]] int r() const noexcept { return static_cast<int>(lambda.size()); }
    [[nodiscard]] int p() const noexcept { return static_cast<int>(gamma.size()); }
    [[nodiscard]] int q() const noexcept { return static_cast<int>(tau.size()); }

    /// Weights in design column order (AR | MA | X).
    [[nodiscard]] Vector stacked() const;
    /// Throws unless weights are finite, nonnegative and the lengths match (r, p, q).
    void validate(int r, int p, int q) const;
};

struct SolverOptions {
    double tol = 1e-7;        // max absolute coefficient change over a full sweep
    double kkt_tol = 1e-6;    // required optimality certificate for converged = true
    int max_iter = 10000;     // sweeps (full or active-set)
    std::optional<Vector> warm_start;
};

struct SolveResult {
    Vector coefficients;  // AR | MA | X
    double objective = 0.0;
    int iterations = 0;
    bool converged = false;
    double kkt_violation = 0.0;
};

/// RSS + sum_j w_j |b_j| with the raw (unscaled) residual sum of squares.
double penalized_objective(const Matrix& H, const Vector& y, const Vector& weights,
                           const Vector& coefficients);

/**
 * Cyclic coordinate descent for min ||y - H b||^2 + sum_j w_j |b_j|.
 *
 * Each update is the soft-threshold of the partial-residual correlation at
 * w_j / 2. Full sweeps alternate with sweeps over the active set; the solve
 * is declared converged once a full sweep moves no coefficient by more than
 * tol and the KKT violation is at most kkt_tol. Non-convergence is reported,
 * not thrown.
 */
SolveResult solve_weighted_lasso(const Matrix& H, const Vector& y, const Vector& weights,
                                 const SolverOptions& options = {});
SolveResult solve_weighted_lasso(const LagDesign& design, const PenaltyConfig& penalties,
                                 const SolverOptions& options = {});

/// Max subgradient violation of the objective above at the given coefficients.
double kkt_residual(const Matrix& H, const Vector& y, const Vector& weights,
                    const Vector& coefficients);
double kkt_residual(const LagDesign& design, const PenaltyConfig& penalties,
                    const Vector& coefficients);

/// Smallest common weight that makes the all-zero vector optimal: max_j |2 h_j' y|.
double zero_solution_penalty(const Matrix& H, const Vector& y);

}  // namespace regarma
