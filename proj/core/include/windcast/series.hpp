#ifndef WINDCAST_SERIES_HPP
#define WINDCAST_SERIES_HPP

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace windcast {

/**
 * Uniformly sampled scalar series (wind speed, m/s).
 * Invariants: length >= 1 and every value finite once constructed via the
 * loaders; ops that require these check them.
 */
struct TimeSeries {
    std::vector<double> values;
    double sample_interval_minutes = 10.0;
    std::string label;

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
};

struct SeriesStats {
    double mean = 0.0;
    double std = 0.0; // population (1/N) convention
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 0;
};

/**
 * Supervised windowed dataset: each sample pairs a delay-strided input
 * window with one target per forecast horizon.
 *
 * inputs  : num_samples x window_dim, row i = values[start_i + k*delay]
 * targets : num_samples x horizons.size(), column j = value exactly
 *           horizons[j] steps after the last input element of the row.
 */
struct WindowedDataset {
    std::vector<double> inputs;  // row-major num_samples x window_dim
    std::vector<double> targets; // row-major num_samples x horizons.size()
    std::size_t num_samples = 0;
    std::size_t window_dim = 20;
    std::size_t delay = 1;
    std::vector<std::size_t> horizons{1, 2, 3};

    const double* input_row(std::size_t i) const { return inputs.data() + i * window_dim; }
    double target(std::size_t i, std::size_t horizon_idx) const {
        return targets[i * horizons.size() + horizon_idx];
    }
};

/// z-score scaler fitted on the training segment only.
struct Scaler {
    double mean = 0.0;
    double std = 1.0;
};

/**
 * Load one numeric column from a CSV file.
 *
 * `column` is a 0-based index or a header name. A header row is
 * auto-detected: if the first row's selected cell does not parse as a
 * number it is treated as a header. Errors cite the offending 1-based
 * file row. Throws std::runtime_error.
 */
TimeSeries load_csv(const std::string& path, const std::string& column = "0");

/// Write a series as a single-column CSV with header `value`.
void write_series_csv(const std::string& path, const TimeSeries& ts);

/// Mean, population std, min, max, count. Requires length >= 1.
SeriesStats summarize(const TimeSeries& ts);

/**
 * Split off the last `n_test` values as the test segment.
 * Requires 0 <= n_test < length; concat(train, test) == input.
 */
std::pair<TimeSeries, TimeSeries> split_train_test(const TimeSeries& ts, std::size_t n_test);

/**
 * Build the supervised dataset by sliding a delay-strided window.
 * num_samples = N - (window_dim-1)*delay - max(horizons); throws with the
 * minimum required length when the series is too short.
 */
WindowedDataset make_windows(const TimeSeries& ts, std::size_t window_dim,
                             std::size_t delay, const std::vector<std::size_t>& horizons);

/// Fit on the training segment. Throws on zero variance.
Scaler fit_scaler(const TimeSeries& train);

TimeSeries transform(const Scaler& scaler, const TimeSeries& ts);
TimeSeries inverse(const Scaler& scaler, const TimeSeries& ts);

double transform_value(const Scaler& scaler, double v);
double inverse_value(const Scaler& scaler, double v);

} // namespace windcast

#endif
