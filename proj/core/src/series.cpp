#include "windcast/series.hpp"

#include "windcast/csv.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

namespace windcast {

namespace {

bool parse_double(const std::string& text, double& out) {
    if (text.empty()) return false;
    try {
        std::size_t pos = 0;
        out = std::stod(text, &pos);
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        return pos == text.size();
    } catch (const std::exception&) {
        return false;
    }
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

} // namespace

TimeSeries load_csv(const std::string& path, const std::string& column) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);

    std::vector<std::vector<std::string>> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        lines.push_back(split_csv_line(line));
    }
    if (lines.empty()) throw std::runtime_error(path + ": empty data");

    // Resolve the column: numeric index, or header name.
    std::size_t col = 0;
    bool col_is_index = false;
    {
        double idx;
        if (parse_double(trim(column), idx) && idx >= 0 && idx == std::floor(idx)) {
            col = static_cast<std::size_t>(idx);
            col_is_index = true;
        }
    }

    // Header auto-detection looks only at the selected column's first cell;
    // text in other columns (timestamps, labels) must not shadow data rows.
    bool has_header = false;
    if (col_is_index) {
        if (col >= lines[0].size())
            throw std::runtime_error(path + ": row 1 has no column " + std::to_string(col));
        double v;
        has_header = !parse_double(trim(lines[0][col]), v);
    } else {
        const auto& header = lines[0];
        auto it = std::find_if(header.begin(), header.end(),
                               [&](const std::string& h) { return trim(h) == column; });
        if (it == header.end())
            throw std::runtime_error(path + ": missing column \"" + column + "\"");
        col = static_cast<std::size_t>(it - header.begin());
        has_header = true;
    }

    TimeSeries ts;
    ts.label = path;
    const std::size_t first_data = has_header ? 1 : 0;
    if (first_data >= lines.size()) throw std::runtime_error(path + ": empty data");

    for (std::size_t i = first_data; i < lines.size(); ++i) {
        const std::size_t file_row = i + 1; // 1-based, as seen in an editor
        if (col >= lines[i].size())
            throw std::runtime_error(path + ": row " + std::to_string(file_row) +
                                     " has no column " + std::to_string(col));
        const std::string cell = trim(lines[i][col]);
        double v;
        if (!parse_double(cell, v))
            throw std::runtime_error(path + ": row " + std::to_string(file_row) +
                                     ": non-numeric value \"" + cell + "\"");
        if (!std::isfinite(v))
            throw std::runtime_error(path + ": row " + std::to_string(file_row) +
                                     ": non-finite value");
        ts.values.push_back(v);
    }
    if (ts.values.empty()) throw std::runtime_error(path + ": empty data");
    return ts;
}

void write_series_csv(const std::string& path, const TimeSeries& ts) {
    CsvTable table;
    table.header = {"value"};
    table.rows.reserve(ts.size());
    for (double v : ts.values) table.rows.push_back({format_double(v)});
    write_csv(path, table);
}

SeriesStats summarize(const TimeSeries& ts) {
    if (ts.values.empty()) throw std::invalid_argument("summarize: series is empty");
    SeriesStats stats;
    stats.count = ts.size();
    stats.min = ts.values[0];
    stats.max = ts.values[0];
    double sum = 0.0;
    for (double v : ts.values) {
        sum += v;
        stats.min = std::min(stats.min, v);
        stats.max = std::max(stats.max, v);
    }
    stats.mean = sum / static_cast<double>(stats.count);
    double ss = 0.0;
    for (double v : ts.values) {
        const double d = v - stats.mean;
        ss += d * d;
    }
    stats.std = std::sqrt(ss / static_cast<double>(stats.count));
    return stats;
}

std::pair<TimeSeries, TimeSeries> split_train_test(const TimeSeries& ts, std::size_t n_test) {
    if (n_test >= ts.size())
        throw std::invalid_argument("split_train_test: n_test (" + std::to_string(n_test) +
                                    ") must be < series length (" + std::to_string(ts.size()) + ")");
    TimeSeries train = ts, test = ts;
    const std::size_t n_train = ts.size() - n_test;
    train.values.assign(ts.values.begin(), ts.values.begin() + static_cast<std::ptrdiff_t>(n_train));
    test.values.assign(ts.values.begin() + static_cast<std::ptrdiff_t>(n_train), ts.values.end());
    return {std::move(train), std::move(test)};
}

WindowedDataset make_windows(const TimeSeries& ts, std::size_t window_dim,
                             std::size_t delay, const std::vector<std::size_t>& horizons) {
    if (window_dim < 1) throw std::invalid_argument("make_windows: window_dim must be >= 1");
    if (delay < 1) throw std::invalid_argument("make_windows: delay must be >= 1");
    if (horizons.empty()) throw std::invalid_argument("make_windows: need at least one horizon");
    for (std::size_t h : horizons)
        if (h < 1) throw std::invalid_argument("make_windows: horizons must be >= 1");

    const std::size_t max_h = *std::max_element(horizons.begin(), horizons.end());
    const std::size_t span = (window_dim - 1) * delay + max_h;
    if (ts.size() < span + 1)
        throw std::runtime_error("make_windows: series too short, need length >= " +
                                 std::to_string(span + 1) + " (got " + std::to_string(ts.size()) + ")");

    WindowedDataset ds;
    ds.window_dim = window_dim;
    ds.delay = delay;
    ds.horizons = horizons;
    ds.num_samples = ts.size() - span;
    ds.inputs.resize(ds.num_samples * window_dim);
    ds.targets.resize(ds.num_samples * horizons.size());

    for (std::size_t i = 0; i < ds.num_samples; ++i) {
        const std::size_t last = i + (window_dim - 1) * delay;
        for (std::size_t k = 0; k < window_dim; ++k)
            ds.inputs[i * window_dim + k] = ts.values[i + k * delay];
        for (std::size_t j = 0; j < horizons.size(); ++j)
            ds.targets[i * horizons.size() + j] = ts.values[last + horizons[j]];
    }
    return ds;
}

Scaler fit_scaler(const TimeSeries& train) {
    const SeriesStats stats = summarize(train);
    if (stats.std <= 0.0)
        throw std::runtime_error("fit_scaler: zero variance training series");
    return Scaler{stats.mean, stats.std};
}

double transform_value(const Scaler& scaler, double v) { return (v - scaler.mean) / scaler.std; }
double inverse_value(const Scaler& scaler, double v) { return v * scaler.std + scaler.mean; }

TimeSeries transform(const Scaler& scaler, const TimeSeries& ts) {
    TimeSeries out = ts;
    for (double& v : out.values) v = transform_value(scaler, v);
    return out;
}

TimeSeries inverse(const Scaler& scaler, const TimeSeries& ts) {
    TimeSeries out = ts;
    for (double& v : out.values) v = inverse_value(scaler, v);
    return out;
}

} // namespace windcast
