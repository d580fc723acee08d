#ifndef WINDCAST_METRICS_HPP
#define WINDCAST_METRICS_HPP

#include <cstddef>
#include <vector>

namespace windcast {

/// Forecast accuracy metrics. MAPE is in percent.
struct Metrics {
    double mae = 0.0;
    double mape_pct = 0.0;
    double rmse = 0.0;
};

/**
 * MAE, MAPE (percent) and RMSE of predictions against actuals.
 * Requires equal lengths >= 1. Any actual value of exactly zero is a hard
 * error (MAPE undefined); wind speeds of 0 indicate broken data.
 */
Metrics evaluate(const std::vector<double>& pred, const std::vector<double>& actual);

} // namespace windcast

#endif
