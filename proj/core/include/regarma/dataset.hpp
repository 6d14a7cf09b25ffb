#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace regarma {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/**
 * Response series y (length T) and regressors X (T x r), both in time order.
 *
 * Construction validates shapes and finiteness; the object is immutable
 * afterwards.
 */
class TimeSeriesDataset {
public:
    TimeSeriesDataset(Vector y, Matrix X, std::vector<std::string> column_names,
                      std::string response_name = "y", bool standardized = false);

    [[nodiscard]] const Vector& y() const noexcept { return y_; }
    [[nodiscard]] const Matrix& X() const noexcept { return X_; }
    [[nodiscard]] const std::vector<std::string>& column_names() const noexcept { return names_; }
    [[nodiscard]] const std::string& response_name() const noexcept { return response_name_; }
    [[nodiscard]] bool standardized() const noexcept { return standardized_; }

    [[nodiscard]] int T() const noexcept { return static_cast<int>(y_.size()); }
    [[nodiscard]] int r() const noexcept { return static_cast<int>(X_.cols()); }

    /// Rows [begin, end) as a new dataset; the standardized flag is dropped.
    [[nodiscard]] TimeSeriesDataset slice(int begin, int end) const;

private:
    Vector y_;
    Matrix X_;
    std::vector<std::string> names_;
    std::string response_name_;
    bool standardized_;
};

/// Per-column centring and scaling; scale uses the population (divide by n) form.
struct StandardizationTransform {
    double y_mean = 0.0;
    double y_scale = 1.0;
    Vector x_means;
    Vector x_scales;

    /// Coefficients of the standardized regression block expressed in original units.
    [[nodiscard]] Vector beta_to_original(const Vector& beta_std) const;
    [[nodiscard]] Vector beta_to_standardized(const Vector& beta_orig) const;
    /// Maps a standardized response value back to original units.
    [[nodiscard]] double response_to_original(double value) const noexcept {
        return y_mean + y_scale * value;
    }
    [[nodiscard]] double response_to_standardized(double value) const noexcept {
        return (value - y_mean) / y_scale;
    }
};

struct Standardized {
    TimeSeriesDataset data;
    StandardizationTransform transform;
};

Standardized standardize(const TimeSeriesDataset& ds);
/// Applies an existing transform (e.g. one stored alongside a fit).
TimeSeriesDataset apply_standardization(const TimeSeriesDataset& ds,
                                        const StandardizationTransform& transform);
TimeSeriesDataset unstandardize(const TimeSeriesDataset& ds,
                                const StandardizationTransform& transform);

/**
 * Stacked regression design over the effective sample t = T0+1..T
 * (1-based time), columns ordered AR lags | MA lags | regressors.
 */
struct LagDesign {
    Matrix H;
    Vector y_eff;
    int p = 0;
    int q = 0;
    int r = 0;
    int T0 = 0;
    int n = 0;

    [[nodiscard]] int cols() const noexcept { return p + q + r; }
    [[nodiscard]] int ar_offset() const noexcept { return 0; }
    [[nodiscard]] int ma_offset() const noexcept { return p; }
    [[nodiscard]] int x_offset() const noexcept { return p + q; }
};

/// eps must have length T; entry t-1 holds the residual at time t.
LagDesign build_lag_design(const TimeSeriesDataset& ds, int p, int q, std::span<const double> eps);
LagDesign build_lag_design(const TimeSeriesDataset& ds, int p, int q, const Vector& eps);

inline constexpr double kStationarityMargin = 1e-8;

struct StationarityReport {
    std::vector<std::complex<double>> roots;
    double min_modulus = 0.0;
    bool is_stationary = true;
};

/// Roots of 1 - c_1 L - ... - c_k L^k via companion-matrix eigenvalues.
StationarityReport check_stationarity(std::span<const double> coeffs,
                                      double margin = kStationarityMargin);

}  // namespace regarma
