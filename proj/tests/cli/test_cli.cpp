#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output; // stdout + stderr
};

std::string cli_path() {
    const char* env = std::getenv("WINDCAST_CLI");
    REQUIRE_MESSAGE(env != nullptr, "WINDCAST_CLI must point at the windcast binary");
    return env;
}

RunResult run(const std::string& args) {
    const std::string cmd = cli_path() + " " + args + " 2>&1";
    std::array<char, 512> buf{};
    RunResult result;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (fgets(buf.data(), buf.size(), pipe)) result.output += buf.data();
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::size_t count_lines(const std::string& text) {
    std::size_t n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("windcast_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

/// Small/fast settings reused by the workflow test.
std::string write_small_config(const TempDir& dir, const std::string& out_subdir,
                               const std::string& data_path = "") {
    const fs::path cfg = dir.path / ("config_" + out_subdir + ".ini");
    std::ofstream out(cfg, std::ios::binary);
    out << "[data]\npath = " << data_path << "\n"
        << "[synthetic]\nn = 160\nseed = 9\n"
        << "[pssa]\nembed_dim = 8\n"
        << "[window]\ndim = 8\n"
        << "[model]\nkind = mlp\nmlp_widths = 8,6,1\n"
        << "[train]\nepochs = 2\nseed = 4\n"
        << "[split]\nn_test = 20\n"
        << "[run]\nout = " << (dir.path / out_subdir).string() << "\n";
    return cfg.string();
}

} // namespace

TEST_CASE("usage errors exit with code 2") {
    const RunResult unknown = run("frobnicate");
    CHECK(unknown.exit_code == 2);
    CHECK(unknown.output.find("Usage") != std::string::npos);

    const RunResult no_sub = run("");
    CHECK(no_sub.exit_code == 2);

    const RunResult bad_mode = run("denoise --mode sideways");
    CHECK(bad_mode.exit_code == 2);
}

TEST_CASE("data errors exit with code 1 and name the path") {
    TempDir dir;
    const RunResult r =
        run("denoise --data " + (dir.path / "missing.csv").string() + " --out " +
            (dir.path / "out").string());
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("missing.csv") != std::string::npos);
}

TEST_CASE("config validation failures exit with code 2 and name the field") {
    TempDir dir;
    const fs::path cfg = dir.path / "bad.ini";
    std::ofstream(cfg) << "[train]\nepochs = 0\n";
    const RunResult r = run("train --config " + cfg.string());
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("[train] epochs") != std::string::npos);
}

TEST_CASE("gen-data, denoise row preservation") {
    TempDir dir;
    const std::string cfg = write_small_config(dir, "gen");
    const RunResult gen = run("gen-data --config " + cfg);
    REQUIRE(gen.exit_code == 0);
    const fs::path data_csv = dir.path / "gen" / "synthetic.csv";
    REQUIRE(fs::exists(data_csv));
    const std::size_t data_rows = count_lines(read_file(data_csv)) - 1; // minus header
    CHECK(data_rows == 160);
    CHECK(fs::exists(dir.path / "gen" / "manifest-gen-data.ini"));

    const std::string cfg2 = write_small_config(dir, "den", data_csv.string());
    const RunResult den = run("denoise --config " + cfg2);
    REQUIRE(den.exit_code == 0);
    CHECK(den.output.find("components_used=") != std::string::npos);
    const std::size_t denoised_rows =
        count_lines(read_file(dir.path / "den" / "denoised.csv")) - 1;
    CHECK(denoised_rows == data_rows);
    CHECK(fs::exists(dir.path / "den" / "components.csv"));
}

TEST_CASE("train, predict, evaluate workflow with deterministic reruns") {
    TempDir dir;
    const std::string cfg = write_small_config(dir, "run");
    const fs::path out = dir.path / "run";

    REQUIRE(run("train --config " + cfg).exit_code == 0);
    REQUIRE(fs::exists(out / "model.bin"));
    REQUIRE(fs::exists(out / "train_trace_h1.csv"));
    REQUIRE(fs::exists(out / "train_trace_h3.csv"));

    REQUIRE(run("predict --config " + cfg).exit_code == 0);
    REQUIRE(fs::exists(out / "predictions_h1.csv"));
    const std::string first = read_file(out / "predictions_h1.csv");
    CHECK(count_lines(first) == 20 + 1); // n_test points + header

    // rerun from the manifest written beside the outputs
    REQUIRE(run("predict --config " + (out / "manifest-predict.ini").string()).exit_code == 0);
    CHECK(read_file(out / "predictions_h1.csv") == first);

    const RunResult eval = run("evaluate --config " + cfg);
    REQUIRE(eval.exit_code == 0);
    CHECK(fs::exists(out / "evaluation.csv"));
    CHECK(eval.output.find("MAE=") != std::string::npos);

    SUBCASE("predict without a trained model is a data error") {
        const std::string cfg_empty = write_small_config(dir, "empty");
        const RunResult r = run("predict --config " + cfg_empty);
        CHECK(r.exit_code == 1);
        CHECK(r.output.find("model.bin") != std::string::npos);
    }
}

TEST_CASE("experiment produces the grid report") {
    TempDir dir;
    const fs::path cfg = dir.path / "exp.ini";
    std::ofstream(cfg) << "[synthetic]\nn = 160\nseed = 9\n"
                       << "[pssa]\nembed_dim = 8\n"
                       << "[window]\ndim = 8\n"
                       << "[model]\nmlp_widths = 8,6,1\n"
                       << "[train]\nepochs = 2\nseed = 4\n"
                       << "[split]\nn_test = 20\n"
                       << "[experiment]\nmodels = gru,mlp\n"
                       << "[run]\nout = " << (dir.path / "exp").string() << "\n";
    const RunResult r = run("experiment --config " + cfg.string());
    REQUIRE(r.exit_code == 0);
    const std::string metrics = read_file(dir.path / "exp" / "metrics.csv");
    CHECK(count_lines(metrics) == 2 * 3 + 1); // 2 models x 3 horizons + header
    CHECK(fs::exists(dir.path / "exp" / "metrics.txt"));
    CHECK(fs::exists(dir.path / "exp" / "predictions_synthetic_gru_h2.csv"));
}

TEST_CASE("seed flag changes outputs, same seed reproduces them") {
    TempDir dir;
    const std::string cfg = write_small_config(dir, "seeds");
    const fs::path out = dir.path / "seeds";

    REQUIRE(run("train --config " + cfg + " --seed 100").exit_code == 0);
    const std::string model_a = read_file(out / "model.bin");
    REQUIRE(run("train --config " + cfg + " --seed 100").exit_code == 0);
    CHECK(read_file(out / "model.bin") == model_a); // byte-identical
    REQUIRE(run("train --config " + cfg + " --seed 101").exit_code == 0);
    CHECK(read_file(out / "model.bin") != model_a);
}
