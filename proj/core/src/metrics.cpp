#include "windcast/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace windcast {

Metrics evaluate(const std::vector<double>& pred, const std::vector<double>& actual) {
    if (pred.size() != actual.size())
        throw std::invalid_argument("evaluate: length mismatch (" + std::to_string(pred.size()) +
                                    " vs " + std::to_string(actual.size()) + ")");
    if (pred.empty()) throw std::invalid_argument("evaluate: empty input");

    const double n = static_cast<double>(pred.size());
    double abs_sum = 0.0, pct_sum = 0.0, sq_sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (actual[i] == 0.0)
            throw std::runtime_error("evaluate: actual value at index " + std::to_string(i) +
                                     " is zero; MAPE is undefined");
        const double e = actual[i] - pred[i];
        abs_sum += std::abs(e);
        pct_sum += std::abs(e / actual[i]);
        sq_sum += e * e;
    }
    Metrics m;
    m.mae = abs_sum / n;
    m.mape_pct = 100.0 * pct_sum / n;
    m.rmse = std::sqrt(sq_sum / n);
    return m;
}

} // namespace windcast
