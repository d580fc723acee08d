// windcast CLI: denoise, train, predict, evaluate, experiment and gen-data
// subcommands over a shared sectioned config file. Flags override file
// values; every run writes a manifest that reproduces it bit-for-bit.

#include <CLI11.hpp>

#include "windcast/config.hpp"
#include "windcast/csv.hpp"
#include "windcast/forecast.hpp"
#include "windcast/version.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using namespace windcast;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDataError = 1;
constexpr int kExitUsageError = 2;

struct FlagOverrides {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> mode;
    std::optional<std::string> out;
    std::optional<std::string> horizons;
    std::optional<std::string> data;
    std::optional<std::string> column;
    std::optional<std::string> model;
};

/// Resolve defaults <- config file <- command-line flags, then validate.
CliConfig resolve_config(const FlagOverrides& flags) {
    KeyValueFile file;
    if (!flags.config_path.empty()) file = KeyValueFile::parse_file(flags.config_path);
    if (flags.seed) {
        file.set("train", "seed", std::to_string(*flags.seed));
        file.set("synthetic", "seed", std::to_string(*flags.seed));
    }
    if (flags.mode) file.set("run", "mode", *flags.mode);
    if (flags.out) file.set("run", "out", *flags.out);
    if (flags.horizons) file.set("window", "horizons", *flags.horizons);
    if (flags.data) file.set("data", "path", *flags.data);
    if (flags.column) file.set("data", "column", *flags.column);
    if (flags.model) file.set("model", "kind", *flags.model);
    return apply_key_values(default_cli_config(), file);
}

/// Load the configured site, falling back to the bundled generator so runs
/// are self-contained without any input file.
TimeSeries load_site(const CliConfig& config) {
    if (config.data_path.empty()) return generate_synthetic(config.synthetic);
    TimeSeries ts = load_csv(config.data_path, config.data_column);
    ts.label = fs::path(config.data_path).stem().string();
    return ts;
}

void prepare_out_dir(const CliConfig& config, const std::string& command) {
    fs::create_directories(config.out_dir);
    write_manifest(config, command, config.out_dir + "/manifest-" + command + ".ini");
}

std::string out_file(const CliConfig& config, const std::string& name) {
    return config.out_dir + "/" + name;
}

int cmd_gen_data(const CliConfig& config) {
    prepare_out_dir(config, "gen-data");
    const TimeSeries ts = generate_synthetic(config.synthetic);
    write_series_csv(out_file(config, "synthetic.csv"), ts);
    const SeriesStats stats = summarize(ts);
    std::printf("gen-data: wrote %zu samples to %s (mean %.4f, std %.4f)\n", ts.size(),
                out_file(config, "synthetic.csv").c_str(), stats.mean, stats.std);
    return kExitOk;
}

int cmd_denoise(const CliConfig& config) {
    prepare_out_dir(config, "denoise");
    const TimeSeries ts = load_site(config);
    const SsaDecomposition dec = decompose(ts, config.pipeline.ssa.embed_dim);
    const DenoiseResult res =
        select_components(dec, ts, config.pipeline.ssa.pearson_threshold);

    write_series_csv(out_file(config, "denoised.csv"), res.denoised);

    CsvTable components;
    components.header = {"component", "singular_value", "index", "value"};
    for (std::size_t c = 0; c < dec.rank; ++c)
        for (std::size_t i = 0; i < dec.components[c].size(); ++i)
            components.rows.push_back({std::to_string(c), format_double(dec.singular_values[c]),
                                       std::to_string(i), format_double(dec.components[c][i])});
    write_csv(out_file(config, "components.csv"), components);

    std::printf("denoise: n=%zu components_used=%zu achieved_r=%.6f rank=%zu\n", ts.size(),
                res.components_used, res.achieved_correlation, dec.rank);
    return kExitOk;
}

void write_trace_csv(const std::string& path, const TrainTrace& trace) {
    CsvTable table;
    table.header = {"epoch", "loss"};
    for (std::size_t e = 0; e < trace.epoch_loss.size(); ++e)
        table.rows.push_back({std::to_string(e), format_double(trace.epoch_loss[e])});
    write_csv(path, table);
}

int cmd_train(const CliConfig& config) {
    prepare_out_dir(config, "train");
    const TimeSeries ts = load_site(config);
    HorizonForecaster forecaster = build_pipeline(config.model_kind, config.pipeline);
    PipelineResult info;
    const std::vector<TrainTrace> traces = train_forecaster(ts, forecaster, &info);
    save_forecaster(out_file(config, "model.bin"), forecaster);
    for (std::size_t j = 0; j < traces.size(); ++j)
        write_trace_csv(out_file(config, "train_trace_h" +
                                             std::to_string(config.pipeline.horizons[j]) + ".csv"),
                        traces[j]);
    std::printf("train: %s on %s (%zu samples), %zu horizon models saved to %s\n",
                model_kind_name(config.model_kind), ts.label.c_str(), ts.size(), traces.size(),
                out_file(config, "model.bin").c_str());
    if (config.pipeline.denoise)
        std::printf("train: denoiser kept %zu components (r=%.6f, mode=%s)\n",
                    info.denoise_components, info.denoise_correlation,
                    denoise_mode_name(info.mode));
    return kExitOk;
}

void write_predictions_csv(const std::string& path, const HorizonPrediction& hp) {
    CsvTable table;
    table.header = {"index", "actual", "predicted"};
    for (std::size_t i = 0; i < hp.indices.size(); ++i)
        table.rows.push_back({std::to_string(hp.indices[i]), format_double(hp.actual[i]),
                              format_double(hp.predicted[i])});
    write_csv(path, table);
}

int cmd_predict(const CliConfig& config) {
    prepare_out_dir(config, "predict");
    const TimeSeries ts = load_site(config);
    HorizonForecaster forecaster = load_forecaster(out_file(config, "model.bin"));
    const std::vector<HorizonPrediction> predictions = predict_test(ts, forecaster);
    for (const HorizonPrediction& hp : predictions)
        write_predictions_csv(out_file(config, "predictions_h" + std::to_string(hp.horizon) + ".csv"),
                              hp);
    std::printf("predict: wrote %zu horizon prediction files to %s\n", predictions.size(),
                config.out_dir.c_str());
    return kExitOk;
}

int cmd_evaluate(const CliConfig& config) {
    prepare_out_dir(config, "evaluate");
    const std::string site = config.data_path.empty()
                                 ? std::string("synthetic")
                                 : fs::path(config.data_path).stem().string();
    CsvTable table;
    table.header = {"site", "model", "horizon", "mae", "mape_pct", "rmse"};
    for (std::size_t h : config.pipeline.horizons) {
        const std::string pred_path = out_file(config, "predictions_h" + std::to_string(h) + ".csv");
        const CsvTable pred = read_csv(pred_path);
        if (pred.header != std::vector<std::string>{"index", "actual", "predicted"})
            throw std::runtime_error(pred_path + ": unexpected prediction CSV header");
        std::vector<double> actual, predicted;
        for (std::size_t r = 0; r < pred.rows.size(); ++r) {
            const auto& row = pred.rows[r];
            try {
                if (row.size() < 3) throw std::invalid_argument("short row");
                actual.push_back(std::stod(row[1]));
                predicted.push_back(std::stod(row[2]));
            } catch (const std::exception&) {
                throw std::runtime_error(pred_path + ": row " + std::to_string(r + 2) +
                                         ": malformed prediction row");
            }
        }
        const Metrics m = evaluate(predicted, actual);
        table.rows.push_back({site, model_kind_name(config.model_kind), std::to_string(h),
                              format_fixed(m.mae, 4), format_fixed(m.mape_pct, 4),
                              format_fixed(m.rmse, 4)});
        std::printf("evaluate: h=%zu n=%zu MAE=%.4f MAPE=%.4f%% RMSE=%.4f\n", h, actual.size(),
                    m.mae, m.mape_pct, m.rmse);
    }
    write_csv(out_file(config, "evaluation.csv"), table);
    return kExitOk;
}

int cmd_experiment(const CliConfig& config) {
    prepare_out_dir(config, "experiment");
    ExperimentSpec spec;
    spec.sites = {load_site(config)};
    spec.kinds = config.experiment_models;
    spec.config = config.pipeline;
    const ExperimentResult result = run_experiment(spec);
    write_experiment_report(result, config.out_dir);

    bool any_failed = false;
    for (const ExperimentCell& cell : result.cells) {
        if (cell.failed) {
            any_failed = true;
            std::fprintf(stderr, "experiment: %s/%s failed: %s\n", cell.site.c_str(),
                         model_kind_name(cell.kind), cell.failure.c_str());
        }
    }
    std::printf("experiment: %zu cells written to %s/metrics.csv\n", result.cells.size(),
                config.out_dir.c_str());
    return any_failed ? kExitDataError : kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"windcast: adaptive SSA denoising + TCN/GRU multi-step wind speed forecasting"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    FlagOverrides flags;
    // shared flags, registered on every subcommand
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", flags.config_path, "sectioned key-value config file");
        cmd->add_option("--seed", flags.seed, "override [train] seed and [synthetic] seed");
        cmd->add_option("--mode", flags.mode, "denoise placement: paper | causal")
            ->check(CLI::IsMember({"paper", "causal"}));
        cmd->add_option("--out", flags.out, "output directory");
        cmd->add_option("--horizons", flags.horizons, "comma-separated forecast horizons");
        cmd->add_option("--data", flags.data, "input CSV path (empty: bundled synthetic)");
        cmd->add_option("--column", flags.column, "CSV column name or 0-based index");
        cmd->add_option("--model", flags.model, "model kind: tcn_gru | gru | rnn | mlp");
    };

    CLI::App* gen = app.add_subcommand("gen-data", "write a seeded synthetic series CSV");
    CLI::App* den = app.add_subcommand("denoise", "SSA-denoise a series; emit components");
    CLI::App* trn = app.add_subcommand("train", "train per-horizon models; save model.bin");
    CLI::App* prd = app.add_subcommand("predict", "predict the test segment with model.bin");
    CLI::App* evl = app.add_subcommand("evaluate", "score prediction CSVs (MAE/MAPE/RMSE)");
    CLI::App* exp = app.add_subcommand("experiment", "model-comparison grid with report files");
    for (CLI::App* cmd : {gen, den, trn, prd, evl, exp}) add_common(cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help() << std::flush;
        return kExitUsageError;
    }

    try {
        const CliConfig config = resolve_config(flags);
        if (gen->parsed()) return cmd_gen_data(config);
        if (den->parsed()) return cmd_denoise(config);
        if (trn->parsed()) return cmd_train(config);
        if (prd->parsed()) return cmd_predict(config);
        if (evl->parsed()) return cmd_evaluate(config);
        if (exp->parsed()) return cmd_experiment(config);
        std::cerr << app.help();
        return kExitUsageError;
    } catch (const std::invalid_argument& e) {
        // config/usage problems: caller can fix the invocation
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsageError;
    } catch (const std::exception& e) {
        // data/model/runtime problems
        std::cerr << "error: " << e.what() << "\n";
        return kExitDataError;
    }
}
