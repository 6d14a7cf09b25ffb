#include "regarma/lasso.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <vector>

#include "regarma/error.hpp"

namespace regarma {
namespace {

double soft_threshold(double z, double t) noexcept {
    if (z > t) return z - t;
    if (z < -t) return z + t;
    return 0.0;
}

void check_weights(const Vector& w) {
    for (Eigen::Index j = 0; j < w.size(); ++j) {
        if (!std::isfinite(w[j]) || w[j] < 0.0) {
            throw Error(ErrorCode::InvalidArgument, "penalty weights must be finite and >= 0");
        }
    }
}

// Solves the stationarity equations on the support of b with its signs held
// fixed. Returns false when the support is rank deficient or a sign flips.
bool polish_on_support(const Matrix& H, const Vector& y, const Vector& weights, Vector& b) {
    std::vector<Eigen::Index> support;
    for (Eigen::Index j = 0; j < b.size(); ++j) {
        if (b[j] != 0.0) support.push_back(j);
    }
    if (support.empty() || static_cast<Eigen::Index>(support.size()) > H.rows()) return false;
    const Matrix HA = H(Eigen::all, support);
    Vector rhs = HA.transpose() * y;
    for (std::size_t i = 0; i < support.size(); ++i) {
        const Eigen::Index j = support[i];
        rhs[static_cast<Eigen::Index>(i)] -= 0.5 * weights[j] * (b[j] > 0.0 ? 1.0 : -1.0);
    }
    const Eigen::LDLT<Matrix> ldlt(HA.transpose() * HA);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) return false;
    const Vector bA = ldlt.solve(rhs);
    if (!bA.allFinite()) return false;
    for (std::size_t i = 0; i < support.size(); ++i) {
        if (bA[static_cast<Eigen::Index>(i)] * b[support[i]] <= 0.0) return false;
    }
    for (std::size_t i = 0; i < support.size(); ++i) b[support[i]] = bA[static_cast<Eigen::Index>(i)];
    return true;
}

}  // namespace

PenaltyConfig PenaltyConfig::uniform(int r, int p, int q, double lambda, double gamma, double tau) {
    return {Vector::Constant(r, lambda), Vector::Constant(p, gamma), Vector::Constant(q, tau)};
}

Vector PenaltyConfig::stacked() const {
    Vector w(gamma.size() + tau.size() + lambda.size());
    w << gamma, tau, lambda;
    return w;
}

void PenaltyConfig::validate(int r_expected, int p_expected, int q_expected) const {
    if (r() != r_expected || p() != p_expected || q() != q_expected) {
        throw Error(ErrorCode::DimensionMismatch,
                    "penalty lengths (r=" + std::to_string(r()) + ", p=" + std::to_string(p()) +
                        ", q=" + std::to_string(q()) + ") do not match design (r=" +
                        std::to_string(r_expected) + ", p=" + std::to_string(p_expected) +
                        ", q=" + std::to_string(q_expected) + ")");
    }
    check_weights(lambda);
    check_weights(gamma);
    check_weights(tau);
}

double penalized_objective(const Matrix& H, const Vector& y, const Vector& weights,
                           const Vector& coefficients) {
    const double rss = (y - H * coefficients).squaredNorm();
    return rss + weights.dot(coefficients.cwiseAbs());
}

double kkt_residual(const Matrix& H, const Vector& y, const Vector& weights,
                    const Vector& coefficients) {
    if (H.rows() != y.size() || H.cols() != weights.size() || H.cols() != coefficients.size()) {
        throw Error(ErrorCode::DimensionMismatch, "kkt_residual: inconsistent dimensions");
    }
    const Vector grad = -2.0 * (H.transpose() * (y - H * coefficients));
    double worst = 0.0;
    for (Eigen::Index j = 0; j < coefficients.size(); ++j) {
        double v;
        if (coefficients[j] != 0.0) {
            const double s = coefficients[j] > 0.0 ? 1.0 : -1.0;
            v = std::abs(grad[j] + weights[j] * s);
        } else {
            v = std::max(0.0, std::abs(grad[j]) - weights[j]);
        }
        worst = std::max(worst, v);
    }
    return worst;
}

double kkt_residual(const LagDesign& design, const PenaltyConfig& penalties,
                    const Vector& coefficients) {
    penalties.validate(design.r, design.p, design.q);
    return kkt_residual(design.H, design.y_eff, penalties.stacked(), coefficients);
}

double zero_solution_penalty(const Matrix& H, const Vector& y) {
    if (H.cols() == 0) return 0.0;
    return (2.0 * (H.transpose() * y)).cwiseAbs().maxCoeff();
}

SolveResult solve_weighted_lasso(const Matrix& H, const Vector& y, const Vector& weights,
                                 const SolverOptions& options) {
    const Eigen::Index n = H.rows();
    const Eigen::Index k = H.cols();
    if (y.size() != n || weights.size() != k) {
        throw Error(ErrorCode::DimensionMismatch, "solve_weighted_lasso: inconsistent dimensions");
    }
    if (n < 1) {
        throw Error(ErrorCode::TooFewSamples, "solve_weighted_lasso: empty design");
    }
    check_weights(weights);

    SolveResult result;
    Vector b = Vector::Zero(k);
    if (options.warm_start && options.warm_start->size() == k) {
        b = *options.warm_start;
    }
    const Vector col_sq = H.colwise().squaredNorm().transpose();
    for (Eigen::Index j = 0; j < k; ++j) {
        if (col_sq[j] == 0.0) b[j] = 0.0;
    }
    Vector resid = y - H * b;

    // One coordinate update; returns the absolute change.
    auto update = [&](Eigen::Index j) -> double {
        if (col_sq[j] == 0.0) return 0.0;
        const double old = b[j];
        const double rho = H.col(j).dot(resid) + col_sq[j] * old;
        const double fresh = soft_threshold(rho, 0.5 * weights[j]) / col_sq[j];
        if (fresh != old) {
            resid.noalias() -= (fresh - old) * H.col(j);
            b[j] = fresh;
        }
        return std::abs(fresh - old);
    };

#ifndef NDEBUG
    double last_objective = resid.squaredNorm() + weights.dot(b.cwiseAbs());
    auto check_monotone = [&]() {
        const double obj = resid.squaredNorm() + weights.dot(b.cwiseAbs());
        assert(obj <= last_objective + 1e-9 * (1.0 + std::abs(last_objective)));
        last_objective = obj;
    };
#else
    auto check_monotone = []() {};
#endif

    std::vector<Eigen::Index> active;
    int iter = 0;
    bool converged = false;
    double kkt = 0.0;
    while (iter < options.max_iter) {
        // Full sweep.
        double max_change = 0.0;
        for (Eigen::Index j = 0; j < k; ++j) {
            max_change = std::max(max_change, update(j));
        }
        ++iter;
        check_monotone();
        if (max_change < options.tol) {
            // Recompute the residual to drop accumulated rounding before certifying.
            resid = y - H * b;
            kkt = kkt_residual(H, y, weights, b);
            if (kkt <= options.kkt_tol) {
                converged = true;
                break;
            }
            continue;
        }
        // Active-set sweeps until the nonzero coordinates settle.
        active.clear();
        for (Eigen::Index j = 0; j < k; ++j) {
            if (b[j] != 0.0) active.push_back(j);
        }
        while (iter < options.max_iter) {
            double change = 0.0;
            for (Eigen::Index j : active) {
                change = std::max(change, update(j));
            }
            ++iter;
            check_monotone();
            if (change < options.tol) break;
        }
    }
    if (converged) {
        // The sweep stops within tol of the optimum; an exact solve on the
        // support removes the dependence on coordinate order.
        Vector polished = b;
        if (polish_on_support(H, y, weights, polished)) {
            const double polished_kkt = kkt_residual(H, y, weights, polished);
            if (polished_kkt <= kkt) {
                b = std::move(polished);
                kkt = polished_kkt;
                resid = y - H * b;
            }
        }
    } else {
        resid = y - H * b;
        kkt = kkt_residual(H, y, weights, b);
    }
    result.coefficients = std::move(b);
    result.objective = resid.squaredNorm() + weights.dot(result.coefficients.cwiseAbs());
    result.iterations = std::max(iter, 1);
    result.converged = converged;
    result.kkt_violation = kkt;
    return result;
}

SolveResult solve_weighted_lasso(const LagDesign& design, const PenaltyConfig& penalties,
                                 const SolverOptions& options) {
    penalties.validate(design.r, design.p, design.q);
    return solve_weighted_lasso(design.H, design.y_eff, penalties.stacked(), options);
}

}  // namespace regarma
