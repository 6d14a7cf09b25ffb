#include "regarma/simulate.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

#include "regarma/error.hpp"

namespace regarma {
namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Independent streams per purpose so a caller-supplied truth leaves X and noise unchanged.
enum Stream : std::uint64_t { kTruthStream = 1, kDesignStream = 2, kNoiseStream = 3 };

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) noexcept {
    return splitmix64(splitmix64(splitmix64(base) ^ a) ^ (b * 0xD1B54A32D192ED03ULL));
}

void SimulationConfig::validate() const {
    if (T < 1) throw Error(ErrorCode::Config, "T must be positive");
    if (r < 1) throw Error(ErrorCode::Config, "r must be positive");
    if (!(zero_proportion >= 0.0 && zero_proportion < 1.0)) {
        throw Error(ErrorCode::Config, "zero_proportion must lie in [0, 1)");
    }
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw Error(ErrorCode::Config, "sigma must be positive");
    }
    if (p < 0 || q < 0) throw Error(ErrorCode::Config, "orders must be nonnegative");
    if (p + q >= T) throw Error(ErrorCode::Config, "p + q must be below T");
    if (burn_in < 1) throw Error(ErrorCode::Config, "burn_in must be positive");
}

Vector sample_sparse_beta(int r, double zero_proportion, Rng& rng) {
    if (r < 1) throw Error(ErrorCode::InvalidArgument, "r must be >= 1");
    if (!(zero_proportion >= 0.0 && zero_proportion < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "zero_proportion must lie in [0, 1)");
    }
    const int zeros = static_cast<int>(std::floor(r * zero_proportion + 1e-9));
    std::vector<int> idx(r);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);

    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Vector beta = Vector::Zero(r);
    std::vector<double> used;
    for (int k = zeros; k < r; ++k) {
        double v;
        do {
            v = unif(rng);
        } while (std::abs(v) < kBetaDeadZone || std::abs(v) >= 1.0 ||
                 std::find(used.begin(), used.end(), v) != used.end());
        used.push_back(v);
        beta[idx[k]] = v;
    }
    return beta;
}

Vector pacf_to_ar(const Vector& pacf) {
    const Eigen::Index k = pacf.size();
    Vector a = Vector::Zero(k);
    for (Eigen::Index m = 0; m < k; ++m) {
        const Vector prev = a.head(m);
        a[m] = pacf[m];
        for (Eigen::Index j = 0; j < m; ++j) {
            a[j] = prev[j] - pacf[m] * prev[m - 1 - j];
        }
    }
    return a;
}

Vector sample_stationary_coeffs(int order, Rng& rng) {
    if (order < 0) throw Error(ErrorCode::InvalidArgument, "order must be >= 0");
    std::uniform_real_distribution<double> unif(-0.9, 0.9);
    Vector pacf(order);
    for (int i = 0; i < order; ++i) pacf[i] = unif(rng);
    Vector a = pacf_to_ar(pacf);
    [[maybe_unused]] const auto report =
        check_stationarity(std::span<const double>(a.data(), a.size()));
    assert(report.is_stationary);
    return a;
}

SimulatedData generate_dataset(const SimulationConfig& config) {
    config.validate();
    Rng rng(derive_seed(config.seed, kTruthStream));
    SimulationTruth truth;
    truth.beta0 = sample_sparse_beta(config.r, config.zero_proportion, rng);
    truth.phi0 = sample_stationary_coeffs(config.p, rng);
    truth.theta0 = sample_stationary_coeffs(config.q, rng);
    truth.sigma = config.sigma;
    return generate_dataset(config, truth);
}

SimulatedData generate_dataset(const SimulationConfig& config, const SimulationTruth& truth) {
    config.validate();
    if (truth.beta0.size() != config.r || truth.phi0.size() != config.p ||
        truth.theta0.size() != config.q) {
        throw Error(ErrorCode::ShapeMismatch, "truth does not match config orders");
    }
    const int total = config.burn_in + config.T;
    const int r = config.r;
    const int p = config.p;
    const int q = config.q;

    Rng xrng(derive_seed(config.seed, kDesignStream));
    std::uniform_real_distribution<double> coef(-0.7, 0.7);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix X(total, r);
    for (int j = 0; j < r; ++j) {
        const double a = coef(xrng);
        double prev = 0.0;
        for (int t = 0; t < total; ++t) {
            prev = a * prev + gauss(xrng);
            X(t, j) = prev;
        }
    }

    Rng erng(derive_seed(config.seed, kNoiseStream));
    Vector noise(total);
    for (int t = 0; t < total; ++t) noise[t] = config.sigma * gauss(erng);

    const Vector xb = X * truth.beta0;
    Vector eps = Vector::Zero(total);
    Vector y = Vector::Zero(total);
    for (int t = 0; t < total; ++t) {
        double e = noise[t];
        for (int i = 1; i <= q && t - i >= 0; ++i) e += truth.theta0[i - 1] * eps[t - i];
        eps[t] = e;
        double v = xb[t] + e;
        for (int j = 1; j <= p && t - j >= 0; ++j) v += truth.phi0[j - 1] * y[t - j];
        y[t] = v;
    }

    const int b = config.burn_in;
    std::vector<std::string> names;
    for (int j = 0; j < r; ++j) names.push_back("x" + std::to_string(j + 1));
    SimulatedData out{
        TimeSeriesDataset(y.tail(config.T), X.bottomRows(config.T), names, "y", false),
        truth,
        eps.segment(b, config.T),
        noise.segment(b, config.T),
    };
    out.truth.sigma = config.sigma;
    return out;
}

Vector oracle_predictions(const TimeSeriesDataset& original, const SimulationTruth& truth) {
    const int p = static_cast<int>(truth.phi0.size());
    const int q = static_cast<int>(truth.theta0.size());
    const int T = original.T();
    if (truth.beta0.size() != original.r()) {
        throw Error(ErrorCode::ShapeMismatch, "truth beta length differs from dataset columns");
    }
    if (p + q >= T) throw Error(ErrorCode::OrderTooLarge, "truth orders exceed the series");
    const Vector& y = original.y();
    const Vector xb = original.X() * truth.beta0;
    Vector eps = Vector::Zero(T);
    for (int t = p; t < T; ++t) {
        double v = y[t] - xb[t];
        for (int j = 1; j <= p; ++j) v -= truth.phi0[j - 1] * y[t - j];
        eps[t] = v;
    }
    Vector pred(T - p - q);
    for (int t = p + q; t < T; ++t) {
        double v = xb[t];
        for (int j = 1; j <= p; ++j) v += truth.phi0[j - 1] * y[t - j];
        for (int i = 1; i <= q; ++i) v += truth.theta0[i - 1] * eps[t - i];
        pred[t - p - q] = v;
    }
    return pred;
}

}  // namespace regarma
