#include "regarma/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "regarma/error.hpp"
#include "regarma/select.hpp"

namespace regarma {

MetricsReport compute_metrics(const RegarmaFit& fit, std::string label) {
    MetricsReport m;
    const double n = static_cast<double>(fit.residuals.size());
    m.mse = fit.residuals.squaredNorm() / n;
    m.mae = fit.residuals.cwiseAbs().sum() / n;
    m.bic = information_criterion(fit, CriterionKind::BIC);
    m.df = fit.df;
    m.model_label = label.empty() ? model_label(fit.p(), fit.q(), fit.spec.adaptive) : std::move(label);
    return m;
}

std::string model_label(int p, int q, bool adaptive) {
    if (p == 0 && q == 0) return adaptive ? "ADAPTIVE-LASSO" : "LASSO";
    if (q == 0) return "REGAR(" + std::to_string(p) + ")";
    if (p == 0) return "REGMA(" + std::to_string(q) + ")";
    return "REGARMA(" + std::to_string(p) + "," + std::to_string(q) + ")";
}

double mspe_hat(std::span<const double> predicted, std::span<const double> oracle) {
    if (predicted.size() != oracle.size()) {
        throw Error(ErrorCode::LengthMismatch, "mspe_hat: vectors differ in length");
    }
    if (predicted.empty()) throw Error(ErrorCode::TooShort, "mspe_hat: empty input");
    double s = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const double d = predicted[i] - oracle[i];
        s += d * d;
    }
    return s / static_cast<double>(predicted.size());
}

double mspe_hat(const Vector& predicted, const Vector& oracle) {
    return mspe_hat(std::span<const double>(predicted.data(), predicted.size()),
                    std::span<const double>(oracle.data(), oracle.size()));
}

double BoundInputs::K_max() const noexcept { return std::max({K_lambda, K_gamma, K_tau}); }
double BoundInputs::M_max() const noexcept { return std::max({M1, M2, M3}); }

double BoundInputs::K_star() const noexcept {
    return std::max({K_lambda * K_lambda, K_gamma * K_gamma, K_tau * K_tau,
                     2.0 * K_lambda * K_gamma, 2.0 * K_lambda * K_tau, 2.0 * K_gamma * K_tau});
}

double theorem5_bound(const BoundInputs& b) {
    if (b.n < 1) throw Error(ErrorCode::InvalidArgument, "n must be positive");
    double logs = 0.0;
    for (int a : {b.r, b.p, b.q}) {
        if (a > 0) logs += std::sqrt(2.0 * std::log(2.0 * a));
    }
    return 2.0 * b.K_max() * b.M_max() * b.sigma / std::sqrt(static_cast<double>(b.n)) * logs;
}

double remark2_bound(const BoundInputs& b) {
    const std::array<int, 3> a{b.r, b.p, b.q};
    const std::array<double, 3> M{b.M1, b.M2, b.M3};
    double cross = 0.0;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if (a[i] == 0 || a[j] == 0) continue;
            const double aa = static_cast<double>(a[i]) * a[j];
            cross += M[i] * M[j] * std::sqrt(2.0 * std::log(2.0 * aa) / b.n);
        }
    }
    return theorem5_bound(b) + 8.0 * b.K_star() * cross;
}

BoundInputs realized_bound_inputs(const RegarmaFit& fit, const TimeSeriesDataset& standardized,
                                  double sigma) {
    if (standardized.r() != fit.r() || standardized.T() != fit.T) {
        throw Error(ErrorCode::ShapeMismatch, "dataset does not match the fit");
    }
    BoundInputs b;
    b.sigma = sigma;
    b.n = fit.n;
    b.r = fit.r();
    b.p = fit.p();
    b.q = fit.q();
    b.K_lambda = fit.beta.lpNorm<1>();
    b.K_gamma = fit.phi.lpNorm<1>();
    b.K_tau = fit.theta.lpNorm<1>();
    const LagDesign d = build_lag_design(standardized, fit.p(), fit.q(), fit.step1_residuals);
    auto sup = [&](int offset, int width) {
        return width == 0 ? 0.0 : d.H.middleCols(offset, width).cwiseAbs().maxCoeff();
    };
    b.M2 = sup(d.ar_offset(), d.p);
    b.M3 = sup(d.ma_offset(), d.q);
    b.M1 = sup(d.x_offset(), d.r);
    return b;
}

Vector residual_acf(std::span<const double> residuals, int max_lag) {
    const int n = static_cast<int>(residuals.size());
    if (max_lag < 1) throw Error(ErrorCode::InvalidArgument, "max_lag must be positive");
    if (n <= max_lag) throw Error(ErrorCode::TooShort, "series shorter than max_lag + 1");
    double mean = 0.0;
    for (double v : residuals) mean += v;
    mean /= n;
    double c0 = 0.0;
    for (double v : residuals) c0 += (v - mean) * (v - mean);
    Vector acf = Vector::Zero(max_lag);
    if (c0 == 0.0) return acf;
    for (int k = 1; k <= max_lag; ++k) {
        double ck = 0.0;
        for (int t = k; t < n; ++t) ck += (residuals[t] - mean) * (residuals[t - k] - mean);
        acf[k - 1] = ck / c0;
    }
    return acf;
}

Vector residual_acf(const Vector& residuals, int max_lag) {
    return residual_acf(std::span<const double>(residuals.data(), residuals.size()), max_lag);
}

}  // namespace regarma
