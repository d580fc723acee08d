#include <doctest.h>

#include "windcast/csv.hpp"
#include "windcast/forecast.hpp"
#include "windcast/rng.hpp"
#include "windcast/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <unistd.h>

using namespace windcast;

namespace {

/// Small, fast pipeline settings for integration-style tests.
PipelineConfig small_config() {
    PipelineConfig config;
    config.window_dim = 8;
    config.net.window_dim = 8;
    config.net.tcn.channels = 3;
    config.net.tcn.dilations = {1, 2};
    config.net.tcn.hidden_dim = 3;
    config.net.gru_hidden = 6;
    config.net.rnn_hidden = 6;
    config.net.mlp_widths = {8, 8, 8, 1};
    config.ssa.embed_dim = 8;
    config.train.epochs = 4;
    config.train.batch_size = 16;
    config.train.seed = 5;
    config.n_test = 20;
    return config;
}

TimeSeries small_series() {
    SyntheticConfig gen;
    gen.n = 160;
    gen.seed = 31;
    return generate_synthetic(gen);
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("windcast_forecast_test_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

} // namespace

TEST_CASE("evaluate") {
    SUBCASE("perfect prediction") {
        const Metrics m = evaluate({1, 2, 3}, {1, 2, 3});
        CHECK(m.mae == 0.0);
        CHECK(m.mape_pct == 0.0);
        CHECK(m.rmse == 0.0);
    }
    SUBCASE("hand-computed example") {
        const Metrics m = evaluate({2, 4}, {1, 2});
        CHECK(m.mae == doctest::Approx(1.5));
        CHECK(m.mape_pct == doctest::Approx(100.0));
        CHECK(m.rmse == doctest::Approx(1.58114).epsilon(1e-5));
    }
    SUBCASE("zero actual raises") {
        CHECK_THROWS_WITH_AS(evaluate({1, 2}, {1, 0}), doctest::Contains("zero"),
                             std::runtime_error);
    }
    SUBCASE("MAE <= RMSE on random pairs") {
        Rng rng(77);
        for (int rep = 0; rep < 200; ++rep) {
            std::vector<double> pred(20), actual(20);
            for (std::size_t i = 0; i < 20; ++i) {
                pred[i] = rng.uniform(-10, 10);
                actual[i] = rng.uniform(0.5, 10); // nonzero actuals
            }
            const Metrics m = evaluate(pred, actual);
            CHECK(m.mae <= m.rmse + 1e-12);
            CHECK(m.mape_pct >= 0.0);
        }
    }
    SUBCASE("evaluation commutes with an exact scaler round trip") {
        Rng rng(78);
        Scaler s{4.2, 1.7};
        std::vector<double> pred(30), actual(30);
        for (std::size_t i = 0; i < 30; ++i) {
            pred[i] = rng.uniform(1, 9);
            actual[i] = rng.uniform(1, 9);
        }
        std::vector<double> round = pred;
        for (double& v : round) v = inverse_value(s, transform_value(s, v));
        const Metrics a = evaluate(pred, actual);
        const Metrics b = evaluate(round, actual);
        CHECK(std::abs(a.mae - b.mae) < 1e-10);
        CHECK(std::abs(a.mape_pct - b.mape_pct) < 1e-10);
        CHECK(std::abs(a.rmse - b.rmse) < 1e-10);
    }
}

TEST_CASE("build_pipeline") {
    const PipelineConfig config = small_config();
    SUBCASE("one sub-model per horizon") {
        const HorizonForecaster forecaster = build_pipeline(ModelKind::TcnGru, config);
        CHECK(forecaster.nets.size() == 3);
        CHECK(forecaster.nets[0]->kind() == ModelKind::TcnGru);
        CHECK_FALSE(forecaster.trained);
    }
    SUBCASE("MLP widths must frame the window") {
        PipelineConfig bad = config;
        bad.net.mlp_widths = {5, 5, 1};
        CHECK_THROWS_AS(build_pipeline(ModelKind::Mlp, bad), std::invalid_argument);
    }
    SUBCASE("invalid hyperparameters are rejected up front") {
        PipelineConfig bad = config;
        bad.horizons = {};
        CHECK_THROWS_AS(build_pipeline(ModelKind::TcnGru, bad), std::invalid_argument);
        PipelineConfig bad2 = config;
        bad2.n_test = 0;
        CHECK_THROWS_AS(build_pipeline(ModelKind::TcnGru, bad2), std::invalid_argument);
    }
}

TEST_CASE("run_pipeline") {
    const TimeSeries ts = small_series();

    SUBCASE("scores n_test - (h - 1) points per horizon") {
        HorizonForecaster forecaster = build_pipeline(ModelKind::Mlp, small_config());
        const PipelineResult result = run_pipeline(ts, forecaster);
        REQUIRE(result.horizons.size() == 3);
        CHECK(result.horizons[0].prediction.actual.size() == 20);
        CHECK(result.horizons[1].prediction.actual.size() == 19);
        CHECK(result.horizons[2].prediction.actual.size() == 18);
        // actuals are the raw series values at the recorded indices
        for (const HorizonResult& hr : result.horizons)
            for (std::size_t i = 0; i < hr.prediction.indices.size(); ++i)
                CHECK(hr.prediction.actual[i] == ts.values[hr.prediction.indices[i]]);
        // first scored index for horizon h is (train length - 1) + h
        const std::size_t t0 = ts.size() - 20;
        for (const HorizonResult& hr : result.horizons)
            CHECK(hr.prediction.indices.front() == t0 - 1 + hr.horizon);
    }
    SUBCASE("bit-identical reruns with the same seed") {
        HorizonForecaster a = build_pipeline(ModelKind::GruOnly, small_config());
        HorizonForecaster b = build_pipeline(ModelKind::GruOnly, small_config());
        const PipelineResult ra = run_pipeline(ts, a);
        const PipelineResult rb = run_pipeline(ts, b);
        for (std::size_t j = 0; j < ra.horizons.size(); ++j) {
            CHECK(ra.horizons[j].prediction.predicted == rb.horizons[j].prediction.predicted);
            CHECK(ra.horizons[j].trace.epoch_loss == rb.horizons[j].trace.epoch_loss);
        }
    }
    SUBCASE("causal mode runs and labels itself") {
        PipelineConfig config = small_config();
        config.mode = DenoiseMode::Causal;
        HorizonForecaster forecaster = build_pipeline(ModelKind::Mlp, config);
        const PipelineResult result = run_pipeline(ts, forecaster);
        CHECK(result.mode == DenoiseMode::Causal);
        CHECK(result.horizons.size() == 3);
        for (const HorizonResult& hr : result.horizons) CHECK(hr.metrics.rmse > 0.0);
    }
    SUBCASE("denoising can be disabled") {
        PipelineConfig config = small_config();
        config.denoise = false;
        HorizonForecaster forecaster = build_pipeline(ModelKind::Mlp, config);
        const PipelineResult result = run_pipeline(ts, forecaster);
        CHECK_FALSE(result.denoised);
        CHECK(result.denoise_components == 0);
    }
    SUBCASE("series shorter than the training span is rejected") {
        TimeSeries tiny;
        for (int i = 0; i < 30; ++i) tiny.values.push_back(5.0 + 0.1 * i);
        HorizonForecaster forecaster = build_pipeline(ModelKind::Mlp, small_config());
        CHECK_THROWS_AS(run_pipeline(tiny, forecaster), std::runtime_error);
    }
}

TEST_CASE("direct strategy: horizons are independent") {
    const TimeSeries ts = small_series();
    const PipelineConfig config = small_config();

    HorizonForecaster base = build_pipeline(ModelKind::Mlp, config);
    const PipelineResult before = run_pipeline(ts, base);

    // Retrain only the h=3 sub-model, with different settings.
    base.reset_net(2);
    TimeSeries train_input;
    if (config.denoise) {
        TimeSeries full = ts;
        const DenoiseResult den = ssa_denoise(full, config.ssa);
        train_input.values.assign(den.denoised.values.begin(),
                                  den.denoised.values.end() - 20);
    }
    const TimeSeries scaled = transform(base.scaler, train_input);
    const WindowedDataset ds = make_windows(scaled, config.window_dim, config.delay, config.horizons);
    TrainConfig retrain = config.train;
    retrain.seed = 999; // different seed so h=3 genuinely changes
    retrain.epochs = 2;
    fit(*base.nets[2], ds, 2, retrain);

    const std::vector<HorizonPrediction> after = predict_test(ts, base);
    CHECK(after[0].predicted == before.horizons[0].prediction.predicted);
    CHECK(after[1].predicted == before.horizons[1].prediction.predicted);
    CHECK(after[2].predicted != before.horizons[2].prediction.predicted);
}

TEST_CASE("experiment grid") {
    TempDir dir;
    ExperimentSpec spec;
    spec.sites = {small_series()};
    spec.sites[0].label = "s1";
    spec.kinds = {ModelKind::TcnGru, ModelKind::GruOnly, ModelKind::RnnOnly, ModelKind::Mlp};
    spec.config = small_config();
    spec.config.train.epochs = 2;

    const ExperimentResult result = run_experiment(spec);
    REQUIRE(result.cells.size() == 4);
    for (std::size_t i = 0; i < result.cells.size(); ++i) {
        CHECK(result.cells[i].kind == spec.kinds[i]); // row order follows the grid
        REQUIRE_FALSE(result.cells[i].failed);
        for (const HorizonResult& hr : result.cells[i].result.horizons)
            CHECK(hr.metrics.mae <= hr.metrics.rmse + 1e-12);
    }

    write_experiment_report(result, dir.path.string());
    const CsvTable metrics = read_csv((dir.path / "metrics.csv").string());
    CHECK(metrics.header ==
          std::vector<std::string>{"site", "model", "horizon", "mae", "mape_pct", "rmse"});
    CHECK(metrics.rows.size() == 12); // 4 models x 3 horizons
    CHECK(std::filesystem::exists(dir.path / "metrics.txt"));
    CHECK(std::filesystem::exists(dir.path / "predictions_s1_tcn_gru_h1.csv"));
    CHECK(std::filesystem::exists(dir.path / "predictions_s1_mlp_h3.csv"));

    SUBCASE("a failing cell is marked, not fatal") {
        ExperimentSpec bad = spec;
        bad.config.net.mlp_widths = {5, 5, 1}; // breaks only the MLP cell
        const ExperimentResult partial = run_experiment(bad);
        REQUIRE(partial.cells.size() == 4);
        CHECK_FALSE(partial.cells[0].failed);
        CHECK(partial.cells[3].failed);
        write_experiment_report(partial, (dir.path / "partial").string());
        const CsvTable table = read_csv((dir.path / "partial" / "metrics.csv").string());
        bool found_marker = false;
        for (const auto& row : table.rows)
            if (row[1] == "mlp" && row[3] == "failed") found_marker = true;
        CHECK(found_marker);
    }
}

TEST_CASE("forecaster save/load round trip") {
    TempDir dir;
    const TimeSeries ts = small_series();
    PipelineConfig config = small_config();
    config.train.epochs = 2;

    HorizonForecaster forecaster = build_pipeline(ModelKind::TcnGru, config);
    const PipelineResult result = run_pipeline(ts, forecaster);

    const std::string path = (dir.path / "model.bin").string();
    save_forecaster(path, forecaster);

    HorizonForecaster loaded = load_forecaster(path);
    CHECK(loaded.kind == ModelKind::TcnGru);
    CHECK(loaded.trained);
    CHECK(loaded.scaler.mean == forecaster.scaler.mean);

    const std::vector<HorizonPrediction> again = predict_test(ts, loaded);
    for (std::size_t j = 0; j < again.size(); ++j)
        CHECK(again[j].predicted == result.horizons[j].prediction.predicted);

    SUBCASE("untrained forecasters cannot be saved") {
        HorizonForecaster fresh = build_pipeline(ModelKind::Mlp, config);
        CHECK_THROWS_AS(save_forecaster(path, fresh), std::runtime_error);
    }
}
