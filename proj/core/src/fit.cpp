#include "regarma/fit.hpp"

#include <cmath>

#include "fit_internal.hpp"
#include "regarma/error.hpp"

namespace regarma {
namespace detail {
namespace {

std::vector<int> masked_rows(int T0, int n, const std::vector<char>& mask) {
    std::vector<int> rows;
    rows.reserve(n);
    for (int i = 0; i < n; ++i) {
        if (mask.empty() || mask[T0 + i]) rows.push_back(i);
    }
    return rows;
}

SolveResult solve_rows(const LagDesign& d, const std::vector<int>& rows, const Vector& weights,
                       SolverOptions opts, const Vector* warm) {
    if (warm && warm->size() == d.cols()) opts.warm_start = *warm;
    if (static_cast<int>(rows.size()) == d.n) {
        return solve_weighted_lasso(d.H, d.y_eff, weights, opts);
    }
    if (rows.empty()) {
        throw Error(ErrorCode::TooFewSamples, "no training rows");
    }
    const Matrix H = d.H(rows, Eigen::all);
    const Vector y = d.y_eff(rows);
    return solve_weighted_lasso(H, y, weights, opts);
}

// eps_t = y_t - x_t' beta - sum_j phi_j y_{t-j} for t >= p (0-based), zero before.
Vector regar_residuals(const TimeSeriesDataset& ds, const Vector& phi, const Vector& beta) {
    const int T = ds.T();
    const int p = static_cast<int>(phi.size());
    Vector eps = Vector::Zero(T);
    const Vector xb = ds.r() > 0 ? Vector(ds.X() * beta) : Vector::Zero(T);
    for (int t = p; t < T; ++t) {
        double v = ds.y()[t] - xb[t];
        for (int j = 1; j <= p; ++j) v -= phi[j - 1] * ds.y()[t - j];
        eps[t] = v;
    }
    return eps;
}

}  // namespace

Vector step1_weights(const PenaltyConfig& penalties) {
    Vector w(penalties.gamma.size() + penalties.lambda.size());
    w << penalties.gamma, penalties.lambda;
    return w;
}

TwoStep two_step(const TimeSeriesDataset& ds, int p, int q, const PenaltyConfig& penalties,
                 const FitOptions& options, const std::vector<char>& mask,
                 const Vector* warm_step1, const Vector* warm_step2) {
    if (p < 0 || q < 0) {
        throw Error(ErrorCode::InvalidArgument, "orders must be nonnegative");
    }
    if (p + q >= ds.T()) {
        throw Error(ErrorCode::OrderTooLarge, "p + q must be below T");
    }
    if (!mask.empty() && static_cast<int>(mask.size()) != ds.T()) {
        throw Error(ErrorCode::LengthMismatch, "row mask must have length T");
    }
    penalties.validate(ds.r(), p, q);
    const int r = ds.r();

    TwoStep out;
    const Vector no_eps = Vector::Zero(ds.T());
    LagDesign d1 = build_lag_design(ds, p, 0, no_eps);
    const std::vector<int> rows1 = masked_rows(d1.T0, d1.n, mask);
    out.step1 = solve_rows(d1, rows1, step1_weights(penalties), options.solver, warm_step1);

    const Vector phi1 = out.step1.coefficients.head(p);
    const Vector beta1 = out.step1.coefficients.tail(r);
    out.eps_hat = regar_residuals(ds, phi1, beta1);

    if (q == 0) {
        out.step2 = out.step1;
        out.design = std::move(d1);
        out.rows = rows1;
        return out;
    }

    out.design = build_lag_design(ds, p, q, out.eps_hat);
    out.rows = masked_rows(out.design.T0, out.design.n, mask);
    const Vector w2 = penalties.stacked();
    out.step2 = solve_rows(out.design, out.rows, w2, options.solver, warm_step2);

    for (int it = 0; it < options.refresh_iterations; ++it) {
        const Vector& c = out.step2.coefficients;
        out.eps_hat = regar_residuals(ds, c.head(p), c.tail(r));
        out.design = build_lag_design(ds, p, q, out.eps_hat);
        const Vector warm = c;
        out.step2 = solve_rows(out.design, out.rows, w2, options.solver, &warm);
    }
    return out;
}

}  // namespace detail

namespace {

int count_nonzero(const Vector& v) {
    int k = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) > kZeroThreshold) ++k;
    }
    return k;
}

RegarmaFit assemble(const TimeSeriesDataset& ds, int p, int q, const PenaltyConfig& penalties,
                    detail::TwoStep&& ts) {
    const int r = ds.r();
    RegarmaFit fit;
    fit.spec = FitSpec{p, q, penalties, false};
    const Vector& c = ts.step2.coefficients;
    fit.phi = c.head(p);
    fit.theta = c.segment(p, q);
    fit.beta = c.tail(r);
    fit.T = ds.T();
    fit.T0 = p + q;
    fit.n = ds.T() - fit.T0;
    fit.fitted = ts.design.H * c;
    fit.residuals = ts.design.y_eff - fit.fitted;
    fit.objective = ts.step2.objective;
    fit.df = count_nonzero(c);
    fit.sigma2_hat = fit.residuals.squaredNorm() / fit.n;
    fit.step1_phi = ts.step1.coefficients.head(p);
    fit.step1_beta = ts.step1.coefficients.tail(r);
    fit.step1_residuals = std::move(ts.eps_hat);
    fit.iterations = ts.step1.iterations + (q > 0 ? ts.step2.iterations : 0);
    fit.converged = ts.step1.converged && ts.step2.converged;
    fit.kkt_violation = ts.step2.kkt_violation;
    return fit;
}

}  // namespace

Vector RegarmaFit::stacked_coefficients() const {
    Vector c(phi.size() + theta.size() + beta.size());
    c << phi, theta, beta;
    return c;
}

RegarmaFit fit_regar(const TimeSeriesDataset& ds, int p, const PenaltyConfig& penalties,
                     const FitOptions& options) {
    PenaltyConfig pen{penalties.lambda, penalties.gamma, Vector()};
    return fit_regarma(ds, p, 0, pen, options);
}

RegarmaFit fit_regarma(const TimeSeriesDataset& ds, int p, int q, const PenaltyConfig& penalties,
                       const FitOptions& options) {
    const Vector* warm1 = nullptr;
    const Vector* warm2 = nullptr;
    Vector w1, w2;
    if (options.warm_start && options.warm_start->p() == p && options.warm_start->q() == q &&
        options.warm_start->r() == ds.r()) {
        w1.resize(p + ds.r());
        w1 << options.warm_start->step1_phi, options.warm_start->step1_beta;
        w2 = options.warm_start->stacked_coefficients();
        warm1 = &w1;
        warm2 = &w2;
    }
    auto ts = detail::two_step(ds, p, q, penalties, options, {}, warm1, warm2);
    return assemble(ds, p, q, penalties, std::move(ts));
}

PenaltyConfig compute_adaptive_weights(const RegarmaFit& pilot, const PenaltyConfig& base,
                                       double exponent, double cap) {
    if (pilot.beta.size() != base.lambda.size() || pilot.phi.size() != base.gamma.size() ||
        pilot.theta.size() != base.tau.size()) {
        throw Error(ErrorCode::ShapeMismatch, "pilot fit and base penalties differ in shape");
    }
    if (!(exponent >= 0.0) || !(cap > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "exponent must be >= 0 and cap > 0");
    }
    auto weigh = [&](const Vector& est, const Vector& b) {
        Vector w(b.size());
        for (Eigen::Index j = 0; j < b.size(); ++j) {
            const double denom = std::pow(std::abs(est[j]), exponent);
            w[j] = denom == 0.0 ? cap : std::min(b[j] / denom, cap);
        }
        return w;
    };
    return {weigh(pilot.beta, base.lambda), weigh(pilot.phi, base.gamma),
            weigh(pilot.theta, base.tau)};
}

RegarmaFit fit_weighted_from_pilot(const TimeSeriesDataset& ds, const RegarmaFit& pilot,
                                   const PenaltyConfig& base, const AdaptiveOptions& adaptive,
                                   const FitOptions& options) {
    const PenaltyConfig weights =
        compute_adaptive_weights(pilot, base, adaptive.exponent, adaptive.cap);
    RegarmaFit fit = fit_regarma(ds, pilot.p(), pilot.q(), weights, options);
    fit.spec.adaptive = true;
    return fit;
}

AdaptiveFit fit_adaptive_regarma_with_pilot(const TimeSeriesDataset& ds, int p, int q,
                                            const PenaltyConfig& base,
                                            const AdaptiveOptions& adaptive,
                                            const FitOptions& options,
                                            const RegarmaFit* pilot_warm_start) {
    FitOptions pilot_options = options;
    pilot_options.warm_start = pilot_warm_start;
    AdaptiveFit out;
    out.pilot = fit_regarma(ds, p, q, base, pilot_options);
    out.fit = fit_weighted_from_pilot(ds, out.pilot, base, adaptive, options);
    return out;
}

RegarmaFit fit_adaptive_regarma(const TimeSeriesDataset& ds, int p, int q,
                                const PenaltyConfig& base, double exponent, double cap,
                                const FitOptions& options) {
    return fit_adaptive_regarma_with_pilot(ds, p, q, base, AdaptiveOptions{exponent, cap}, options)
        .fit;
}

void restore_fit_series(RegarmaFit& fit, const TimeSeriesDataset& ds) {
    if (ds.r() != fit.r() || ds.T() != fit.T || fit.step1_phi.size() != fit.p() ||
        fit.step1_beta.size() != fit.beta.size()) {
        throw Error(ErrorCode::ShapeMismatch, "dataset does not match the fit");
    }
    fit.step1_residuals = detail::regar_residuals(ds, fit.step1_phi, fit.step1_beta);
    const LagDesign d = build_lag_design(ds, fit.p(), fit.q(), fit.step1_residuals);
    fit.fitted = d.H * fit.stacked_coefficients();
    fit.residuals = d.y_eff - fit.fitted;
}

double predict_one_step(const RegarmaFit& fit, std::span<const double> history_y,
                        std::span<const double> x_row, std::span<const double> history_eps) {
    const int p = fit.p();
    const int q = fit.q();
    if (static_cast<int>(history_y.size()) < p || static_cast<int>(history_eps.size()) < q) {
        throw Error(ErrorCode::InsufficientHistory,
                    "need " + std::to_string(p) + " lags of y and " + std::to_string(q) +
                        " lags of eps");
    }
    if (static_cast<int>(x_row.size()) != fit.r()) {
        throw Error(ErrorCode::DimensionMismatch, "regressor row length differs from r");
    }
    double yhat = 0.0;
    for (int j = 0; j < fit.r(); ++j) yhat += fit.beta[j] * x_row[j];
    const std::size_t ny = history_y.size();
    for (int j = 1; j <= p; ++j) yhat += fit.phi[j - 1] * history_y[ny - j];
    const std::size_t ne = history_eps.size();
    for (int i = 1; i <= q; ++i) yhat += fit.theta[i - 1] * history_eps[ne - i];
    return yhat;
}

}  // namespace regarma
