#ifndef WINDCAST_SSA_HPP
#define WINDCAST_SSA_HPP

#include "windcast/series.hpp"

#include <cstddef>
#include <vector>

namespace windcast {

/**
 * Hankel trajectory matrix of a series: S rows (embedding dimension),
 * K = N - S + 1 columns, entry(i, j) = c[i + j].
 */
struct TrajectoryMatrix {
    std::size_t rows = 0; // S
    std::size_t cols = 0; // K
    std::vector<double> entries; // row-major S x K

    double at(std::size_t i, std::size_t j) const { return entries[i * cols + j]; }
};

/**
 * Singular spectrum decomposition of a series: elementary component series
 * ordered by descending singular value. The elementwise sum of all
 * components reproduces the input (up to SVD round-off, <= 1e-8 relative).
 */
struct SsaDecomposition {
    std::vector<double> singular_values;        // descending, >= 0
    std::vector<std::vector<double>> components; // rank series, each length N
    std::size_t rank = 0;
};

/// Denoiser settings: embedding dimension and the correlation cut-off that
/// decides how many leading components to keep.
struct SsaConfig {
    std::size_t embed_dim = 15;
    double pearson_threshold = 0.99;
};

struct DenoiseResult {
    TimeSeries denoised;
    std::size_t components_used = 0; // m: retained leading components
    double achieved_correlation = 0.0;
};

/// Build the trajectory matrix. Requires 2 <= S <= N.
TrajectoryMatrix embed(const TimeSeries& ts, std::size_t embed_dim);

/**
 * Full SSA decomposition: embed, SVD of the trajectory matrix, one
 * diagonal-averaged component per singular triplet. Components with
 * sigma_i <= 1e-12 * sigma_1 are treated as the rank cutoff.
 */
SsaDecomposition decompose(const TimeSeries& ts, std::size_t embed_dim);

/**
 * Anti-diagonal (Hankel) averaging of an arbitrary S x K matrix into a
 * series of length S + K - 1. Exact fixed point of `embed`: for a Hankel
 * matrix the result is bit-identical to the source series.
 */
std::vector<double> diagonal_average(const TrajectoryMatrix& matrix);

/**
 * Pearson correlation coefficient. Requires equal lengths >= 2 and nonzero
 * variance on both sides; result is in [-1, 1].
 */
double pearson(const std::vector<double>& a, const std::vector<double>& b);

/**
 * Correlation-gated component selection: accumulate leading components of
 * an existing decomposition until the Pearson correlation between the
 * partial reconstruction and the original series reaches the threshold.
 * If no proper prefix reaches it, all components are kept (the
 * reconstruction then equals the input up to round-off).
 */
DenoiseResult select_components(const SsaDecomposition& decomposition, const TimeSeries& ts,
                                double pearson_threshold);

/// Adaptive SSA denoising: decompose + select_components.
DenoiseResult ssa_denoise(const TimeSeries& ts, const SsaConfig& config);

} // namespace windcast

#endif
