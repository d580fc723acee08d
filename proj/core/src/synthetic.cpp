#include "windcast/synthetic.hpp"

#include "windcast/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace windcast {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

TimeSeries generate(const SyntheticConfig& config, bool with_noise) {
    if (config.n < 1) throw std::invalid_argument("synthetic: n must be >= 1");
    if (config.period1 <= 0 || config.period2 <= 0)
        throw std::invalid_argument("synthetic: periods must be positive");

    Rng rng(config.seed);
    TimeSeries ts;
    ts.label = "synthetic";
    ts.values.reserve(config.n);

    double ar_prev = 0.0, ar_prev2 = 0.0;
    for (std::size_t t = 0; t < config.n; ++t) {
        const double ar = config.ar1 * ar_prev + config.ar2 * ar_prev2 +
                          rng.gaussian(0.0, config.ar_sigma);
        ar_prev2 = ar_prev;
        ar_prev = ar;
        // The noise draw happens unconditionally so the clean and noisy
        // variants of one seed share the identical underlying path.
        const double noise = rng.gaussian(0.0, config.noise_sigma);
        double v = config.base +
                   config.amp1 * std::sin(kTwoPi * static_cast<double>(t) / config.period1) +
                   config.amp2 * std::sin(kTwoPi * static_cast<double>(t) / config.period2) + ar;
        if (with_noise) v += noise;
        ts.values.push_back(v);
    }
    return ts;
}

} // namespace

TimeSeries generate_synthetic(const SyntheticConfig& config) { return generate(config, true); }

TimeSeries generate_synthetic_clean(const SyntheticConfig& config) {
    return generate(config, false);
}

} // namespace windcast
