#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "regarma/dataset.hpp"

namespace regarma {

using Rng = std::mt19937_64;

/// Mixes (base, a, b) into an independent 64-bit stream seed (splitmix64 finaliser).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) noexcept;

struct SimulationConfig {
    int T = 100;
    int r = 25;
    double zero_proportion = 0.5;
    double sigma = 0.5;
    int p = 1;
    int q = 1;
    std::uint64_t seed = 1;
    int burn_in = 500;

    void validate() const;
};

struct SimulationTruth {
    Vector beta0;
    Vector phi0;
    Vector theta0;
    double sigma = 0.0;
};

/**
 * Simulated series plus the latent processes: eps is the autoregressive
 * error eps_t = sum theta_i eps_{t-i} + e_t and noise the innovations e_t.
 */
struct SimulatedData {
    TimeSeriesDataset data;
    SimulationTruth truth;
    Vector eps;
    Vector noise;
};

inline constexpr double kBetaDeadZone = 0.05;

/// floor(r * zero_proportion) exact zeros; others distinct uniforms on (-1, 1) outside +/-0.05.
Vector sample_sparse_beta(int r, double zero_proportion, Rng& rng);

/// Coefficients of a stationary AR polynomial from uniform(-0.9, 0.9) partial autocorrelations.
Vector sample_stationary_coeffs(int order, Rng& rng);

/// Durbin-Levinson map from partial autocorrelations to AR coefficients.
Vector pacf_to_ar(const Vector& pacf);

SimulatedData generate_dataset(const SimulationConfig& config);

/// Same recursion with a caller-supplied truth (sizes must match config.r/p/q).
SimulatedData generate_dataset(const SimulationConfig& config, const SimulationTruth& truth);

/**
 * True-parameter one-step predictions Y°_t on the original scale for
 * t = p+q+1..T (1-based), with eps reconstructed from the data and truth.
 */
Vector oracle_predictions(const TimeSeriesDataset& original, const SimulationTruth& truth);

}  // namespace regarma
