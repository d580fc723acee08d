#ifndef WINDCAST_MODEL_HPP
#define WINDCAST_MODEL_HPP

#include "windcast/nn.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace windcast {

enum class ModelKind { TcnGru, GruOnly, RnnOnly, Mlp };

const char* model_kind_name(ModelKind kind);
ModelKind model_kind_from_name(const std::string& name);

/// Architecture knobs for every model family (defaults match the
/// experiment configuration shipped in the default config file).
struct NetConfig {
    std::size_t window_dim = 20;
    TcnConfig tcn;
    std::size_t gru_hidden = 64;
    std::size_t rnn_hidden = 64;
    std::vector<std::size_t> mlp_widths{20, 20, 20, 1};
};

/**
 * Single-horizon forecasting network: maps an input window (window_dim
 * values) to one scalar prediction. forward() records everything backward()
 * needs; backward() accumulates parameter gradients.
 */
class ForecastNet {
public:
    virtual ~ForecastNet() = default;

    virtual double forward(std::span<const double> window) = 0;
    virtual void backward(double d_prediction) = 0;
    virtual void collect_params(std::vector<Param*>& out) = 0;
    virtual ModelKind kind() const = 0;
    virtual std::size_t window_dim() const = 0;

    std::vector<Param*> parameters() {
        std::vector<Param*> out;
        collect_params(out);
        return out;
    }
    void zero_grads() {
        for (Param* p : parameters()) p->zero_grad();
    }
};

/// Deterministic factory: identical (kind, config, seed) build identical nets.
std::unique_ptr<ForecastNet> make_net(ModelKind kind, const NetConfig& config, std::uint64_t seed);

/// TCN feature extractor -> GRU over the full feature sequence -> linear head.
class TcnGruNet final : public ForecastNet {
public:
    TcnGruNet(const NetConfig& config, std::uint64_t seed);
    double forward(std::span<const double> window) override;
    void backward(double d_prediction) override;
    void collect_params(std::vector<Param*>& out) override;
    ModelKind kind() const override { return ModelKind::TcnGru; }
    std::size_t window_dim() const override { return window_dim_; }

    TcnStack tcn;
    GruLayer gru;
    Dense head;

private:
    std::size_t window_dim_;
};

/// GRU over the raw window -> linear head.
class GruNet final : public ForecastNet {
public:
    GruNet(const NetConfig& config, std::uint64_t seed);
    double forward(std::span<const double> window) override;
    void backward(double d_prediction) override;
    void collect_params(std::vector<Param*>& out) override;
    ModelKind kind() const override { return ModelKind::GruOnly; }
    std::size_t window_dim() const override { return window_dim_; }

    GruLayer gru;
    Dense head;

private:
    std::size_t window_dim_;
};

/// Vanilla RNN over the raw window -> linear head.
class RnnNet final : public ForecastNet {
public:
    RnnNet(const NetConfig& config, std::uint64_t seed);
    double forward(std::span<const double> window) override;
    void backward(double d_prediction) override;
    void collect_params(std::vector<Param*>& out) override;
    ModelKind kind() const override { return ModelKind::RnnOnly; }
    std::size_t window_dim() const override { return window_dim_; }

    RnnLayer rnn;
    Dense head;

private:
    std::size_t window_dim_;
};

/// Feed-forward baseline on the flattened window.
class MlpNet final : public ForecastNet {
public:
    MlpNet(const NetConfig& config, std::uint64_t seed);
    double forward(std::span<const double> window) override;
    void backward(double d_prediction) override;
    void collect_params(std::vector<Param*>& out) override;
    ModelKind kind() const override { return ModelKind::Mlp; }
    std::size_t window_dim() const override { return window_dim_; }

    Mlp mlp;

private:
    std::size_t window_dim_;
};

// ------------------------------------------------------- gradient check

struct GradCheckEntry {
    std::string param;
    double max_rel_error = 0.0;
};

struct GradCheckReport {
    std::vector<GradCheckEntry> entries;
    double max_rel_error = 0.0;

    bool passed(double tolerance) const { return max_rel_error < tolerance; }
};

/**
 * Compare analytic gradients of the squared-error loss
 * (net(window) - target)^2 against central finite differences over every
 * parameter scalar. Relative error uses max(|analytic|, |numeric|, 1e-3)
 * as the scale (the floor absorbs finite-difference noise on near-zero
 * gradients); parameters the loss ignores report zero.
 */
GradCheckReport grad_check(ForecastNet& net, std::span<const double> window, double target,
                           double step = 1e-5);

// ------------------------------------------------- parameter file format

/**
 * Flat named-tensor container written as little-endian binary with a
 * format-version header. Layout:
 *
 *   "WCPF" | u32 version | u32 n_meta | n_meta x (str key, str value)
 *          | u32 n_tensors | n_tensors x (str name, u32 ndim, u64 dims..., f64 data...)
 *
 * Strings are u32 length + raw bytes. Loaders reject unknown versions.
 */
struct ParamFile {
    std::map<std::string, std::string> metadata;
    std::vector<std::pair<std::string, Tensor>> tensors;
};

void save_param_file(const std::string& path, const ParamFile& file);
ParamFile load_param_file(const std::string& path);

/// Snapshot a net's parameters into (name, tensor) pairs, prefix prepended.
void export_params(ForecastNet& net, const std::string& prefix, ParamFile& out);

/// Restore parameters by name; throws on missing names or shape mismatch.
void import_params(ForecastNet& net, const std::string& prefix, const ParamFile& in);

} // namespace windcast

#endif
