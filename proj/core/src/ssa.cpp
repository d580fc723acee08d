#include "windcast/ssa.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace windcast {

TrajectoryMatrix embed(const TimeSeries& ts, std::size_t embed_dim) {
    const std::size_t n = ts.size();
    if (embed_dim < 2 || embed_dim > n)
        throw std::runtime_error("embed: embedding dimension must be in [2, " +
                                 std::to_string(n) + "], got " + std::to_string(embed_dim));
    TrajectoryMatrix t;
    t.rows = embed_dim;
    t.cols = n - embed_dim + 1;
    t.entries.resize(t.rows * t.cols);
    for (std::size_t i = 0; i < t.rows; ++i)
        for (std::size_t j = 0; j < t.cols; ++j)
            t.entries[i * t.cols + j] = ts.values[i + j];
    return t;
}

std::vector<double> diagonal_average(const TrajectoryMatrix& matrix) {
    const std::size_t s = matrix.rows, k = matrix.cols;
    if (s == 0 || k == 0) throw std::invalid_argument("diagonal_average: empty matrix");
    std::vector<double> series(s + k - 1);
    for (std::size_t d = 0; d < s + k - 1; ++d) {
        const std::size_t i_lo = d >= k ? d - k + 1 : 0;
        const std::size_t i_hi = std::min(d, s - 1);
        // Mean anchored at the first entry so that constant anti-diagonals
        // (Hankel input) average bit-exactly to that entry.
        const double anchor = matrix.at(i_lo, d - i_lo);
        double shifted_sum = 0.0;
        for (std::size_t i = i_lo; i <= i_hi; ++i)
            shifted_sum += matrix.at(i, d - i) - anchor;
        series[d] = anchor + shifted_sum / static_cast<double>(i_hi - i_lo + 1);
    }
    return series;
}

SsaDecomposition decompose(const TimeSeries& ts, std::size_t embed_dim) {
    for (double v : ts.values)
        if (!std::isfinite(v)) throw std::runtime_error("decompose: non-finite input value");

    const TrajectoryMatrix traj = embed(ts, embed_dim);
    const std::size_t s = traj.rows, k = traj.cols;

    Eigen::MatrixXd mat(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < k; ++j)
            mat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = traj.at(i, j);

    Eigen::BDCSVD<Eigen::MatrixXd> svd(mat, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sigma = svd.singularValues();
    const Eigen::MatrixXd& u = svd.matrixU();
    const Eigen::MatrixXd& v = svd.matrixV();

    SsaDecomposition dec;
    const std::size_t full = static_cast<std::size_t>(sigma.size());
    const double cutoff = full > 0 ? 1e-12 * sigma(0) : 0.0;
    std::size_t rank = 0;
    while (rank < full && sigma(static_cast<Eigen::Index>(rank)) > cutoff) ++rank;
    dec.rank = rank;

    dec.singular_values.resize(rank);
    dec.components.reserve(rank);
    TrajectoryMatrix elementary;
    elementary.rows = s;
    elementary.cols = k;
    elementary.entries.resize(s * k);
    for (std::size_t c = 0; c < rank; ++c) {
        const auto ci = static_cast<Eigen::Index>(c);
        dec.singular_values[c] = sigma(ci);
        // elementary matrix sigma_c * u_c * v_c^T, diagonally averaged
        for (std::size_t i = 0; i < s; ++i) {
            const double ui = sigma(ci) * u(static_cast<Eigen::Index>(i), ci);
            for (std::size_t j = 0; j < k; ++j)
                elementary.entries[i * k + j] = ui * v(static_cast<Eigen::Index>(j), ci);
        }
        dec.components.push_back(diagonal_average(elementary));
    }
    return dec;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("pearson: length mismatch (" + std::to_string(a.size()) +
                                    " vs " + std::to_string(b.size()) + ")");
    const std::size_t n = a.size();
    if (n < 2) throw std::invalid_argument("pearson: need length >= 2");

    double mean_a = 0.0, mean_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_a += a[i];
        mean_b += b[i];
    }
    mean_a /= static_cast<double>(n);
    mean_b /= static_cast<double>(n);

    double cov = 0.0, var_a = 0.0, var_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double da = a[i] - mean_a, db = b[i] - mean_b;
        cov += da * db;
        var_a += da * da;
        var_b += db * db;
    }
    if (var_a == 0.0 || var_b == 0.0)
        throw std::runtime_error("pearson: zero-variance input");
    const double r = cov / std::sqrt(var_a * var_b);
    return std::clamp(r, -1.0, 1.0);
}

DenoiseResult select_components(const SsaDecomposition& dec, const TimeSeries& ts,
                                double pearson_threshold) {
    if (pearson_threshold <= 0.0 || pearson_threshold > 1.0)
        throw std::invalid_argument("select_components: pearson_threshold must be in (0, 1]");
    if (dec.rank == 0) throw std::runtime_error("select_components: zero input series");

    // Prefix scan: add one component per step, O(rank * N) total.
    const std::size_t n = ts.size();
    std::vector<double> prefix(n, 0.0);
    DenoiseResult result;
    for (std::size_t m = 1; m <= dec.rank; ++m) {
        const std::vector<double>& comp = dec.components[m - 1];
        for (std::size_t i = 0; i < n; ++i) prefix[i] += comp[i];
        const double r = pearson(prefix, ts.values);
        result.components_used = m;
        result.achieved_correlation = r;
        if (r >= pearson_threshold) break;
    }
    result.denoised = ts;
    result.denoised.values = prefix;
    return result;
}

DenoiseResult ssa_denoise(const TimeSeries& ts, const SsaConfig& config) {
    if (config.pearson_threshold <= 0.0 || config.pearson_threshold > 1.0)
        throw std::invalid_argument("ssa_denoise: pearson_threshold must be in (0, 1]");
    return select_components(decompose(ts, config.embed_dim), ts, config.pearson_threshold);
}

} // namespace windcast
