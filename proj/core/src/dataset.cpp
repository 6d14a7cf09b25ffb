#include "regarma/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "regarma/error.hpp"

namespace regarma {
namespace {

struct Moments {
    double mean;
    double scale;
};

Moments population_moments(const Eigen::Ref<const Vector>& v) {
    const double n = static_cast<double>(v.size());
    const double mean = v.sum() / n;
    const double var = (v.array() - mean).square().sum() / n;
    return {mean, std::sqrt(var)};
}

// A column is constant when its spread is negligible relative to its level.
bool is_constant(const Moments& m) {
    return !(m.scale > 1e-12 * std::max(1.0, std::abs(m.mean)));
}

}  // namespace

TimeSeriesDataset::TimeSeriesDataset(Vector y, Matrix X, std::vector<std::string> column_names,
                                     std::string response_name, bool standardized)
    : y_(std::move(y)),
      X_(std::move(X)),
      names_(std::move(column_names)),
      response_name_(std::move(response_name)),
      standardized_(standardized) {
    if (y_.size() < 1) {
        throw Error(ErrorCode::TooShort, "dataset needs at least one observation");
    }
    if (X_.cols() > 0 && X_.rows() != y_.size()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "X has " + std::to_string(X_.rows()) + " rows, y has " +
                        std::to_string(y_.size()));
    }
    if (X_.cols() == 0) {
        X_.resize(y_.size(), 0);
    }
    if (names_.empty() && X_.cols() > 0) {
        for (Eigen::Index j = 0; j < X_.cols(); ++j) {
            names_.push_back("x" + std::to_string(j + 1));
        }
    }
    if (static_cast<Eigen::Index>(names_.size()) != X_.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "column_names size does not match X");
    }
    if (!y_.allFinite()) {
        throw Error(ErrorCode::NonFinite, "response '" + response_name_ + "' has non-finite values");
    }
    for (Eigen::Index j = 0; j < X_.cols(); ++j) {
        if (!X_.col(j).allFinite()) {
            throw Error(ErrorCode::NonFinite, "column '" + names_[j] + "' has non-finite values");
        }
    }
}

TimeSeriesDataset TimeSeriesDataset::slice(int begin, int end) const {
    if (begin < 0 || end > T() || begin >= end) {
        throw Error(ErrorCode::InvalidArgument, "invalid slice");
    }
    return TimeSeriesDataset(y_.segment(begin, end - begin), X_.middleRows(begin, end - begin),
                             names_, response_name_, false);
}

Vector StandardizationTransform::beta_to_original(const Vector& beta_std) const {
    return (beta_std.array() * y_scale / x_scales.array()).matrix();
}

Vector StandardizationTransform::beta_to_standardized(const Vector& beta_orig) const {
    return (beta_orig.array() * x_scales.array() / y_scale).matrix();
}

Standardized standardize(const TimeSeriesDataset& ds) {
    if (ds.T() < 2) {
        throw Error(ErrorCode::TooShort, "standardization needs T >= 2");
    }
    StandardizationTransform tr;
    const Moments my = population_moments(ds.y());
    if (is_constant(my)) {
        throw Error(ErrorCode::ConstantColumn, ds.response_name());
    }
    tr.y_mean = my.mean;
    tr.y_scale = my.scale;
    tr.x_means.resize(ds.r());
    tr.x_scales.resize(ds.r());
    for (int j = 0; j < ds.r(); ++j) {
        const Moments m = population_moments(ds.X().col(j));
        if (is_constant(m)) {
            throw Error(ErrorCode::ConstantColumn, ds.column_names()[j]);
        }
        tr.x_means[j] = m.mean;
        tr.x_scales[j] = m.scale;
    }
    return {apply_standardization(ds, tr), tr};
}

TimeSeriesDataset apply_standardization(const TimeSeriesDataset& ds,
                                        const StandardizationTransform& tr) {
    if (tr.x_means.size() != ds.r() || tr.x_scales.size() != ds.r()) {
        throw Error(ErrorCode::ShapeMismatch, "transform does not match dataset columns");
    }
    Vector y = (ds.y().array() - tr.y_mean) / tr.y_scale;
    Matrix X = ds.X();
    for (int j = 0; j < ds.r(); ++j) {
        X.col(j) = (X.col(j).array() - tr.x_means[j]) / tr.x_scales[j];
    }
    return TimeSeriesDataset(std::move(y), std::move(X), ds.column_names(), ds.response_name(),
                             true);
}

TimeSeriesDataset unstandardize(const TimeSeriesDataset& ds, const StandardizationTransform& tr) {
    if (tr.x_means.size() != ds.r()) {
        throw Error(ErrorCode::ShapeMismatch, "transform does not match dataset columns");
    }
    Vector y = (ds.y().array() * tr.y_scale + tr.y_mean).matrix();
    Matrix X = ds.X();
    for (int j = 0; j < ds.r(); ++j) {
        X.col(j) = (X.col(j).array() * tr.x_scales[j] + tr.x_means[j]).matrix();
    }
    return TimeSeriesDataset(std::move(y), std::move(X), ds.column_names(), ds.response_name(),
                             false);
}

LagDesign build_lag_design(const TimeSeriesDataset& ds, int p, int q, std::span<const double> eps) {
    const int T = ds.T();
    if (p < 0 || q < 0) {
        throw Error(ErrorCode::InvalidArgument, "orders must be nonnegative");
    }
    if (p + q >= T) {
        throw Error(ErrorCode::OrderTooLarge, "p + q = " + std::to_string(p + q) +
                                                  " must be below T = " + std::to_string(T));
    }
    if (q > 0 && static_cast<int>(eps.size()) != T) {
        throw Error(ErrorCode::LengthMismatch, "eps must have length T");
    }
    LagDesign d;
    d.p = p;
    d.q = q;
    d.r = ds.r();
    d.T0 = p + q;
    d.n = T - d.T0;
    d.H.resize(d.n, d.cols());
    d.y_eff = ds.y().tail(d.n);
    const Vector& y = ds.y();
    // Row i is time index t = T0 + i (0-based); lag j reads t - j.
    for (int i = 0; i < d.n; ++i) {
        const int t = d.T0 + i;
        for (int j = 1; j <= p; ++j) {
            d.H(i, j - 1) = y[t - j];
        }
        for (int k = 1; k <= q; ++k) {
            d.H(i, p + k - 1) = eps[t - k];
        }
    }
    if (d.r > 0) {
        d.H.rightCols(d.r) = ds.X().bottomRows(d.n);
    }
    return d;
}

LagDesign build_lag_design(const TimeSeriesDataset& ds, int p, int q, const Vector& eps) {
    return build_lag_design(ds, p, q, std::span<const double>(eps.data(), eps.size()));
}

StationarityReport check_stationarity(std::span<const double> coeffs, double margin) {
    StationarityReport report;
    std::size_t k = coeffs.size();
    while (k > 0 && coeffs[k - 1] == 0.0) {
        --k;
    }
    if (k == 0) {
        report.min_modulus = std::numeric_limits<double>::infinity();
        report.is_stationary = true;
        return report;
    }
    // Roots of 1 - c_1 L - ... - c_k L^k are reciprocals of the eigenvalues of
    // the companion matrix of z^k - c_1 z^{k-1} - ... - c_k.
    Matrix companion = Matrix::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    for (std::size_t j = 0; j < k; ++j) {
        companion(0, static_cast<Eigen::Index>(j)) = coeffs[j];
    }
    for (std::size_t i = 1; i < k; ++i) {
        companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
    }
    Eigen::EigenSolver<Matrix> solver(companion, false);
    const auto& eig = solver.eigenvalues();
    report.min_modulus = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < eig.size(); ++i) {
        const std::complex<double> root = 1.0 / eig[i];
        report.roots.push_back(root);
        report.min_modulus = std::min(report.min_modulus, std::abs(root));
    }
    report.is_stationary = report.min_modulus > 1.0 + margin;
    return report;
}

}  // namespace regarma
