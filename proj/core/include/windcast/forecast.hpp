#ifndef WINDCAST_FORECAST_HPP
#define WINDCAST_FORECAST_HPP

#include "windcast/metrics.hpp"
#include "windcast/model.hpp"
#include "windcast/series.hpp"
#include "windcast/ssa.hpp"
#include "windcast/train.hpp"

#include <memory>
#include <string>
#include <vector>

namespace windcast {

/**
 * When the denoiser runs relative to the train/test split.
 *
 * Full:   the whole series is denoised once up front, then split. This is
 *         the default offline-evaluation convention ("paper" on the CLI);
 *         it lets the denoiser see test-period values.
 * Causal: the training segment is denoised alone; each test window is cut
 *         from a fresh denoising of only the data observed up to that
 *         forecast origin. Leak-free, slower.
 */
enum class DenoiseMode { Full, Causal };

const char* denoise_mode_name(DenoiseMode mode); // "paper" / "causal"
DenoiseMode denoise_mode_from_name(const std::string& name);

struct PipelineConfig {
    SsaConfig ssa;
    NetConfig net;
    TrainConfig train;
    std::size_t n_test = 200;
    std::size_t window_dim = 20;
    std::size_t delay = 1;
    std::vector<std::size_t> horizons{1, 2, 3};
    DenoiseMode mode = DenoiseMode::Full;
    bool denoise = true;
    bool normalize = true;
};

/**
 * Direct multi-step forecaster: one independently seeded network per
 * horizon, a shared scaler, and shared denoiser settings. Sub-model h is
 * seeded with train.seed + horizon index, so retraining one horizon never
 * perturbs the others.
 */
class HorizonForecaster {
public:
    HorizonForecaster(ModelKind kind, const PipelineConfig& config);

    ModelKind kind;
    PipelineConfig config;
    std::vector<std::unique_ptr<ForecastNet>> nets; // aligned with config.horizons
    Scaler scaler;
    bool trained = false;

    /// Rebuild (re-seed) the sub-model for one horizon index.
    void reset_net(std::size_t horizon_idx);
};

/// Validated forecaster construction; throws on inconsistent settings.
HorizonForecaster build_pipeline(ModelKind kind, const PipelineConfig& config);

struct HorizonPrediction {
    std::size_t horizon = 0;
    std::vector<std::size_t> indices;  // absolute index of each scored point
    std::vector<double> actual;        // raw (un-denoised) values
    std::vector<double> predicted;
};

struct HorizonResult {
    std::size_t horizon = 0;
    Metrics metrics;
    HorizonPrediction prediction;
    TrainTrace trace;
};

struct PipelineResult {
    std::string site;
    ModelKind kind = ModelKind::TcnGru;
    DenoiseMode mode = DenoiseMode::Full;
    bool denoised = true;
    std::size_t denoise_components = 0;
    double denoise_correlation = 1.0;
    std::vector<HorizonResult> horizons;
};

/**
 * Train every per-horizon sub-model: denoise (per mode) -> split -> fit
 * scaler on the training segment -> window -> fit. Returns one trace per
 * horizon and records the denoiser summary into `result_info`.
 */
std::vector<TrainTrace> train_forecaster(const TimeSeries& ts, HorizonForecaster& forecaster,
                                         PipelineResult* result_info = nullptr);

/**
 * Score the test segment with a trained forecaster. The forecast origin
 * starts at the last training index, so horizon h scores
 * n_test - (h - 1) points; actuals are always the raw series values.
 */
std::vector<HorizonPrediction> predict_test(const TimeSeries& ts, HorizonForecaster& forecaster);

/// Full pass: train, predict the test segment, evaluate every horizon.
PipelineResult run_pipeline(const TimeSeries& ts, HorizonForecaster& forecaster);

// ------------------------------------------------------------ experiments

struct ExperimentSpec {
    std::vector<TimeSeries> sites;
    std::vector<ModelKind> kinds;
    PipelineConfig config;
};

struct ExperimentCell {
    std::string site;
    ModelKind kind = ModelKind::TcnGru;
    bool failed = false;
    std::string failure; // message when failed
    PipelineResult result;
};

struct ExperimentResult {
    std::vector<ExperimentCell> cells; // site-major, kind order as given
};

/// Run the whole grid; cell failures are captured, not propagated.
ExperimentResult run_experiment(const ExperimentSpec& spec);

/**
 * Write the experiment report set into `out_dir`:
 *   metrics.csv      site,model,horizon,mae,mape_pct,rmse (failure markers
 *                    fill the metric columns of failed cells)
 *   metrics.txt      aligned wide table, one row per (site, model)
 *   predictions_<site>_<model>_h<horizon>.csv   index,actual,predicted
 */
void write_experiment_report(const ExperimentResult& result, const std::string& out_dir);

// ------------------------------------------------------- model file round trip

/// Persist a trained forecaster (architecture, scaler, per-horizon tensors).
void save_forecaster(const std::string& path, const HorizonForecaster& forecaster);

/// Restore; throws on unknown format versions or missing tensors.
HorizonForecaster load_forecaster(const std::string& path);

} // namespace windcast

#endif
