#include "windcast/forecast.hpp"

#include "windcast/csv.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace windcast {

const char* denoise_mode_name(DenoiseMode mode) {
    return mode == DenoiseMode::Full ? "paper" : "causal";
}

DenoiseMode denoise_mode_from_name(const std::string& name) {
    if (name == "paper") return DenoiseMode::Full;
    if (name == "causal") return DenoiseMode::Causal;
    throw std::invalid_argument("unknown mode: " + name + " (expected paper or causal)");
}

namespace {

void validate_config(const PipelineConfig& config) {
    if (config.horizons.empty())
        throw std::invalid_argument("pipeline: need at least one horizon");
    for (std::size_t h : config.horizons)
        if (h < 1) throw std::invalid_argument("pipeline: horizons must be >= 1");
    if (config.window_dim < 1) throw std::invalid_argument("pipeline: window_dim must be >= 1");
    if (config.delay < 1) throw std::invalid_argument("pipeline: delay must be >= 1");
    if (config.n_test < 1) throw std::invalid_argument("pipeline: n_test must be >= 1");
    if (config.net.window_dim != config.window_dim)
        throw std::invalid_argument("pipeline: net.window_dim must equal window_dim");
    if (config.denoise && config.ssa.embed_dim < 2)
        throw std::invalid_argument("pipeline: ssa embed_dim must be >= 2");
}

std::size_t max_horizon(const PipelineConfig& config) {
    return *std::max_element(config.horizons.begin(), config.horizons.end());
}

/// Window of `window_dim` values ending at absolute index `end`, strided
/// backwards by `delay`.
std::vector<double> window_ending_at(const std::vector<double>& values, std::size_t end,
                                     std::size_t window_dim, std::size_t delay) {
    std::vector<double> window(window_dim);
    const std::size_t start = end - (window_dim - 1) * delay;
    for (std::size_t k = 0; k < window_dim; ++k) window[k] = values[start + k * delay];
    return window;
}

} // namespace

HorizonForecaster::HorizonForecaster(ModelKind kind_, const PipelineConfig& config_)
    : kind(kind_), config(config_) {
    validate_config(config);
    nets.reserve(config.horizons.size());
    for (std::size_t j = 0; j < config.horizons.size(); ++j)
        nets.push_back(make_net(kind, config.net, config.train.seed + j));
}

void HorizonForecaster::reset_net(std::size_t horizon_idx) {
    nets.at(horizon_idx) = make_net(kind, config.net, config.train.seed + horizon_idx);
}

HorizonForecaster build_pipeline(ModelKind kind, const PipelineConfig& config) {
    return HorizonForecaster(kind, config);
}

std::vector<TrainTrace> train_forecaster(const TimeSeries& ts, HorizonForecaster& forecaster,
                                         PipelineResult* result_info) {
    const PipelineConfig& config = forecaster.config;
    const std::size_t n = ts.size();
    if (n <= config.n_test)
        throw std::runtime_error("pipeline: series length " + std::to_string(n) +
                                 " does not cover n_test = " + std::to_string(config.n_test));
    const std::size_t n_train = n - config.n_test;
    const std::size_t span = (config.window_dim - 1) * config.delay + max_horizon(config);
    if (n_train < span + 1)
        throw std::runtime_error("pipeline: training segment too short, need >= " +
                                 std::to_string(span + 1) + " values (got " +
                                 std::to_string(n_train) + ")");

    // Denoise. Full mode smooths the entire series before splitting; causal
    // mode sees only the training segment here.
    TimeSeries train_input;
    train_input.sample_interval_minutes = ts.sample_interval_minutes;
    train_input.label = ts.label;
    std::size_t used = 0;
    double achieved = 1.0;
    if (config.denoise) {
        TimeSeries to_denoise = ts;
        if (config.mode == DenoiseMode::Causal)
            to_denoise.values.assign(ts.values.begin(),
                                     ts.values.begin() + static_cast<std::ptrdiff_t>(n_train));
        const DenoiseResult den = ssa_denoise(to_denoise, config.ssa);
        used = den.components_used;
        achieved = den.achieved_correlation;
        train_input.values.assign(den.denoised.values.begin(),
                                  den.denoised.values.begin() + static_cast<std::ptrdiff_t>(n_train));
    } else {
        train_input.values.assign(ts.values.begin(),
                                  ts.values.begin() + static_cast<std::ptrdiff_t>(n_train));
    }

    forecaster.scaler = config.normalize ? fit_scaler(train_input) : Scaler{0.0, 1.0};
    const TimeSeries scaled_train = transform(forecaster.scaler, train_input);
    const WindowedDataset dataset =
        make_windows(scaled_train, config.window_dim, config.delay, config.horizons);

    std::vector<TrainTrace> traces;
    traces.reserve(config.horizons.size());
    for (std::size_t j = 0; j < config.horizons.size(); ++j) {
        TrainConfig horizon_cfg = config.train;
        horizon_cfg.seed = config.train.seed + j; // independence across horizons
        traces.push_back(fit(*forecaster.nets[j], dataset, j, horizon_cfg));
    }
    forecaster.trained = true;

    if (result_info) {
        result_info->site = ts.label;
        result_info->kind = forecaster.kind;
        result_info->mode = config.mode;
        result_info->denoised = config.denoise;
        result_info->denoise_components = used;
        result_info->denoise_correlation = achieved;
    }
    return traces;
}

std::vector<HorizonPrediction> predict_test(const TimeSeries& ts, HorizonForecaster& forecaster) {
    if (!forecaster.trained)
        throw std::runtime_error("predict_test: forecaster has not been trained or loaded");
    const PipelineConfig& config = forecaster.config;
    const std::size_t n = ts.size();
    if (n <= config.n_test)
        throw std::runtime_error("predict_test: series shorter than n_test");
    const std::size_t n_train = n - config.n_test;
    const std::size_t reach = (config.window_dim - 1) * config.delay;
    if (n_train < reach + 1)
        throw std::runtime_error("predict_test: training segment shorter than one window");

    // Forecast origins: every index from the last training point to the end
    // of the series, minus horizon reach. Horizon h therefore scores
    // n_test - (h - 1) points.
    const std::size_t first_origin = n_train - 1;

    // Inputs available at each origin, per mode.
    std::vector<std::vector<double>> origin_values; // indexed by origin - first_origin
    const std::size_t last_origin = n - 1 - *std::min_element(config.horizons.begin(),
                                                              config.horizons.end());
    if (!config.denoise) {
        origin_values.assign(last_origin - first_origin + 1, {});
        for (std::size_t e = first_origin; e <= last_origin; ++e)
            origin_values[e - first_origin] = ts.values;
    } else if (config.mode == DenoiseMode::Full) {
        const DenoiseResult den = ssa_denoise(ts, config.ssa);
        origin_values.assign(last_origin - first_origin + 1, {});
        for (std::size_t e = first_origin; e <= last_origin; ++e)
            origin_values[e - first_origin] = den.denoised.values;
    } else {
        // Causal: denoise only the prefix observed at each origin.
        origin_values.assign(last_origin - first_origin + 1, {});
        for (std::size_t e = first_origin; e <= last_origin; ++e) {
            TimeSeries prefix;
            prefix.sample_interval_minutes = ts.sample_interval_minutes;
            prefix.values.assign(ts.values.begin(),
                                 ts.values.begin() + static_cast<std::ptrdiff_t>(e + 1));
            origin_values[e - first_origin] = ssa_denoise(prefix, config.ssa).denoised.values;
        }
    }

    std::vector<HorizonPrediction> predictions;
    predictions.reserve(config.horizons.size());
    for (std::size_t j = 0; j < config.horizons.size(); ++j) {
        const std::size_t h = config.horizons[j];
        HorizonPrediction hp;
        hp.horizon = h;
        for (std::size_t e = first_origin; e + h <= n - 1; ++e) {
            const std::vector<double>& values = origin_values[e - first_origin];
            std::vector<double> window = window_ending_at(values, e, config.window_dim, config.delay);
            for (double& v : window) v = transform_value(forecaster.scaler, v);
            const double scaled_pred = forecaster.nets[j]->forward(window);
            hp.indices.push_back(e + h);
            hp.predicted.push_back(inverse_value(forecaster.scaler, scaled_pred));
            hp.actual.push_back(ts.values[e + h]);
        }
        predictions.push_back(std::move(hp));
    }
    return predictions;
}

PipelineResult run_pipeline(const TimeSeries& ts, HorizonForecaster& forecaster) {
    PipelineResult result;
    std::vector<TrainTrace> traces = train_forecaster(ts, forecaster, &result);
    std::vector<HorizonPrediction> predictions = predict_test(ts, forecaster);
    result.horizons.reserve(predictions.size());
    for (std::size_t j = 0; j < predictions.size(); ++j) {
        HorizonResult hr;
        hr.horizon = predictions[j].horizon;
        hr.metrics = evaluate(predictions[j].predicted, predictions[j].actual);
        hr.prediction = std::move(predictions[j]);
        hr.trace = std::move(traces[j]);
        result.horizons.push_back(std::move(hr));
    }
    return result;
}

// -------------------------------------------------------------- experiment

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    if (spec.sites.empty()) throw std::invalid_argument("experiment: need at least one site");
    if (spec.kinds.empty()) throw std::invalid_argument("experiment: need at least one model");
    ExperimentResult result;
    for (const TimeSeries& site : spec.sites) {
        for (ModelKind kind : spec.kinds) {
            ExperimentCell cell;
            cell.site = site.label;
            cell.kind = kind;
            try {
                HorizonForecaster forecaster = build_pipeline(kind, spec.config);
                cell.result = run_pipeline(site, forecaster);
            } catch (const std::exception& e) {
                cell.failed = true;
                cell.failure = e.what();
            }
            result.cells.push_back(std::move(cell));
        }
    }
    return result;
}

namespace {

std::string sanitize_token(const std::string& s) {
    std::string out;
    for (char c : s)
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
    return out.empty() ? std::string("site") : out;
}

} // namespace

void write_experiment_report(const ExperimentResult& result, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    CsvTable metrics_csv;
    metrics_csv.header = {"site", "model", "horizon", "mae", "mape_pct", "rmse"};
    for (const ExperimentCell& cell : result.cells) {
        if (cell.failed) {
            metrics_csv.rows.push_back({cell.site, model_kind_name(cell.kind), "-",
                                        "failed", "failed", "failed"});
            continue;
        }
        for (const HorizonResult& hr : cell.result.horizons)
            metrics_csv.rows.push_back({cell.site, model_kind_name(cell.kind),
                                        std::to_string(hr.horizon),
                                        format_fixed(hr.metrics.mae, 4),
                                        format_fixed(hr.metrics.mape_pct, 4),
                                        format_fixed(hr.metrics.rmse, 4)});
    }
    write_csv(out_dir + "/metrics.csv", metrics_csv);

    // Wide aligned-text table: one row per (site, model), MAE/MAPE/RMSE per horizon.
    std::ostringstream txt;
    std::vector<std::size_t> horizons;
    const ExperimentCell* first_ok = nullptr;
    for (const ExperimentCell& cell : result.cells)
        if (!cell.failed) {
            first_ok = &cell;
            for (const HorizonResult& hr : cell.result.horizons) horizons.push_back(hr.horizon);
            break;
        }
    if (first_ok)
        txt << "# denoise mode: " << denoise_mode_name(first_ok->result.mode)
            << " | denoising: " << (first_ok->result.denoised ? "on" : "off") << '\n';
    char buf[64];
    txt << std::string(24, ' ');
    for (std::size_t h : horizons) {
        std::snprintf(buf, sizeof(buf), "%-33s", (std::to_string(h) + "-step").c_str());
        txt << buf;
    }
    txt << '\n';
    std::snprintf(buf, sizeof(buf), "%-12s %-10s ", "site", "model");
    txt << buf;
    for (std::size_t i = 0; i < horizons.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%-11s%-11s%-11s", "MAE", "MAPE(%)", "RMSE");
        txt << buf;
    }
    txt << '\n';
    for (const ExperimentCell& cell : result.cells) {
        std::snprintf(buf, sizeof(buf), "%-12s %-10s ", cell.site.c_str(),
                      model_kind_name(cell.kind));
        txt << buf;
        if (cell.failed) {
            txt << "failed: " << cell.failure;
        } else {
            for (const HorizonResult& hr : cell.result.horizons) {
                std::snprintf(buf, sizeof(buf), "%-11.4f%-11.4f%-11.4f", hr.metrics.mae,
                              hr.metrics.mape_pct, hr.metrics.rmse);
                txt << buf;
            }
        }
        txt << '\n';
    }
    std::ofstream txt_out(out_dir + "/metrics.txt", std::ios::binary);
    if (!txt_out) throw std::runtime_error("cannot open for writing: " + out_dir + "/metrics.txt");
    txt_out << txt.str();

    for (const ExperimentCell& cell : result.cells) {
        if (cell.failed) continue;
        for (const HorizonResult& hr : cell.result.horizons) {
            CsvTable pred_csv;
            pred_csv.header = {"index", "actual", "predicted"};
            const HorizonPrediction& hp = hr.prediction;
            for (std::size_t i = 0; i < hp.indices.size(); ++i)
                pred_csv.rows.push_back({std::to_string(hp.indices[i]),
                                         format_double(hp.actual[i]),
                                         format_double(hp.predicted[i])});
            write_csv(out_dir + "/predictions_" + sanitize_token(cell.site) + "_" +
                          model_kind_name(cell.kind) + "_h" + std::to_string(hr.horizon) + ".csv",
                      pred_csv);
        }
    }
}

// ------------------------------------------------------- forecaster files

namespace {

std::string join_sizes(const std::vector<std::size_t>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(values[i]);
    }
    return out;
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            out.push_back(static_cast<std::size_t>(std::stoull(item)));
        } catch (const std::logic_error&) {
            throw std::runtime_error("malformed size list in model file: \"" + text + "\"");
        }
    }
    return out;
}

} // namespace

void save_forecaster(const std::string& path, const HorizonForecaster& forecaster) {
    if (!forecaster.trained)
        throw std::runtime_error("save_forecaster: refusing to save an untrained forecaster");
    const PipelineConfig& config = forecaster.config;
    ParamFile file;
    file.metadata["kind"] = model_kind_name(forecaster.kind);
    file.metadata["window_dim"] = std::to_string(config.window_dim);
    file.metadata["delay"] = std::to_string(config.delay);
    file.metadata["horizons"] = join_sizes(config.horizons);
    file.metadata["n_test"] = std::to_string(config.n_test);
    file.metadata["mode"] = denoise_mode_name(config.mode);
    file.metadata["denoise"] = config.denoise ? "true" : "false";
    file.metadata["normalize"] = config.normalize ? "true" : "false";
    file.metadata["ssa_embed_dim"] = std::to_string(config.ssa.embed_dim);
    file.metadata["ssa_threshold"] = format_double(config.ssa.pearson_threshold);
    file.metadata["scaler_mean"] = format_double(forecaster.scaler.mean);
    file.metadata["scaler_std"] = format_double(forecaster.scaler.std);
    file.metadata["tcn_channels"] = std::to_string(config.net.tcn.channels);
    file.metadata["tcn_dilations"] = join_sizes(config.net.tcn.dilations);
    file.metadata["tcn_blocks"] = std::to_string(config.net.tcn.blocks);
    file.metadata["tcn_hidden"] = std::to_string(config.net.tcn.hidden_dim);
    file.metadata["gru_hidden"] = std::to_string(config.net.gru_hidden);
    file.metadata["rnn_hidden"] = std::to_string(config.net.rnn_hidden);
    file.metadata["mlp_widths"] = join_sizes(config.net.mlp_widths);
    file.metadata["train_seed"] = std::to_string(config.train.seed);

    for (std::size_t j = 0; j < forecaster.nets.size(); ++j)
        export_params(*forecaster.nets[j], "h" + std::to_string(config.horizons[j]) + ".", file);
    save_param_file(path, file);
}

HorizonForecaster load_forecaster(const std::string& path) {
    const ParamFile file = load_param_file(path);
    auto get = [&](const std::string& key) -> const std::string& {
        auto it = file.metadata.find(key);
        if (it == file.metadata.end())
            throw std::runtime_error(path + ": model file is missing metadata key \"" + key + "\"");
        return it->second;
    };
    auto get_size = [&](const std::string& key) -> std::size_t {
        try {
            return static_cast<std::size_t>(std::stoull(get(key)));
        } catch (const std::logic_error&) {
            throw std::runtime_error(path + ": malformed metadata value for \"" + key + "\"");
        }
    };
    auto get_double = [&](const std::string& key) -> double {
        try {
            return std::stod(get(key));
        } catch (const std::logic_error&) {
            throw std::runtime_error(path + ": malformed metadata value for \"" + key + "\"");
        }
    };

    PipelineConfig config;
    config.window_dim = get_size("window_dim");
    config.delay = get_size("delay");
    config.horizons = parse_sizes(get("horizons"));
    config.n_test = get_size("n_test");
    config.mode = denoise_mode_from_name(get("mode"));
    config.denoise = get("denoise") == "true";
    config.normalize = get("normalize") == "true";
    config.ssa.embed_dim = get_size("ssa_embed_dim");
    config.ssa.pearson_threshold = get_double("ssa_threshold");
    config.net.window_dim = config.window_dim;
    config.net.tcn.channels = get_size("tcn_channels");
    config.net.tcn.dilations = parse_sizes(get("tcn_dilations"));
    config.net.tcn.blocks = get_size("tcn_blocks");
    config.net.tcn.hidden_dim = get_size("tcn_hidden");
    config.net.gru_hidden = get_size("gru_hidden");
    config.net.rnn_hidden = get_size("rnn_hidden");
    config.net.mlp_widths = parse_sizes(get("mlp_widths"));
    config.train.seed = get_size("train_seed");

    HorizonForecaster forecaster(model_kind_from_name(get("kind")), config);
    for (std::size_t j = 0; j < forecaster.nets.size(); ++j)
        import_params(*forecaster.nets[j], "h" + std::to_string(config.horizons[j]) + ".", file);
    forecaster.scaler.mean = get_double("scaler_mean");
    forecaster.scaler.std = get_double("scaler_std");
    forecaster.trained = true;
    return forecaster;
}

} // namespace windcast
