#ifndef WINDCAST_SYNTHETIC_HPP
#define WINDCAST_SYNTHETIC_HPP

#include "windcast/series.hpp"

#include <cstdint>

namespace windcast {

/**
 * Seeded synthetic wind-speed generator: a positive base level, two
 * sinusoids, an AR(2) component, and additive Gaussian measurement noise.
 * Stands in for real site data in tests and examples.
 */
struct SyntheticConfig {
    std::size_t n = 1000;
    std::uint64_t seed = 7;
    double base = 9.0;       // m/s
    double amp1 = 2.0;
    double period1 = 288.0;  // samples
    double amp2 = 0.7;
    double period2 = 36.0;
    double ar1 = 0.55;       // AR(2) coefficients
    double ar2 = -0.15;
    double ar_sigma = 0.10;  // innovation std
    double noise_sigma = 0.12; // measurement noise std
};

TimeSeries generate_synthetic(const SyntheticConfig& config);

/// The same series without measurement noise (for denoising oracles).
TimeSeries generate_synthetic_clean(const SyntheticConfig& config);

} // namespace windcast

#endif
