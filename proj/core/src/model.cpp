#include "windcast/model.hpp"

#include "windcast/version.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace windcast {

const char* model_kind_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::TcnGru: return "tcn_gru";
        case ModelKind::GruOnly: return "gru";
        case ModelKind::RnnOnly: return "rnn";
        case ModelKind::Mlp: return "mlp";
    }
    return "?";
}

ModelKind model_kind_from_name(const std::string& name) {
    if (name == "tcn_gru") return ModelKind::TcnGru;
    if (name == "gru") return ModelKind::GruOnly;
    if (name == "rnn") return ModelKind::RnnOnly;
    if (name == "mlp") return ModelKind::Mlp;
    throw std::invalid_argument("unknown model kind: " + name +
                                " (expected tcn_gru, gru, rnn, or mlp)");
}

std::unique_ptr<ForecastNet> make_net(ModelKind kind, const NetConfig& config, std::uint64_t seed) {
    switch (kind) {
        case ModelKind::TcnGru: return std::make_unique<TcnGruNet>(config, seed);
        case ModelKind::GruOnly: return std::make_unique<GruNet>(config, seed);
        case ModelKind::RnnOnly: return std::make_unique<RnnNet>(config, seed);
        case ModelKind::Mlp: return std::make_unique<MlpNet>(config, seed);
    }
    throw std::invalid_argument("make_net: bad kind");
}

namespace {

Tensor window_as_sequence(std::span<const double> window) {
    Tensor seq = Tensor::zeros({window.size(), 1});
    std::copy(window.begin(), window.end(), seq.data.begin());
    return seq;
}

void check_window(std::span<const double> window, std::size_t expected) {
    if (window.size() != expected)
        throw std::invalid_argument("forward: expected window of length " +
                                    std::to_string(expected) + ", got " +
                                    std::to_string(window.size()));
}

} // namespace

// -------------------------------------------------------------- TcnGruNet

TcnGruNet::TcnGruNet(const NetConfig& config, std::uint64_t seed)
    : tcn([&] {
          Rng rng(seed);
          return TcnStack("tcn", 1, config.tcn, rng);
      }()),
      gru([&] {
          Rng rng(seed + 0x10001);
          return GruLayer("gru", config.tcn.hidden_dim, config.gru_hidden, rng);
      }()),
      head([&] {
          Rng rng(seed + 0x20002);
          return Dense("head", config.gru_hidden, 1, Activation::Identity, rng);
      }()),
      window_dim_(config.window_dim) {}

double TcnGruNet::forward(std::span<const double> window) {
    check_window(window, window_dim_);
    const Tensor features = tcn.forward(window_as_sequence(window));
    const std::vector<double> h = gru.forward(features);
    Tensor h_row = Tensor::zeros({1, h.size()});
    std::copy(h.begin(), h.end(), h_row.data.begin());
    return head.forward(h_row).data[0];
}

void TcnGruNet::backward(double d_prediction) {
    Tensor dpred = Tensor::zeros({1, 1});
    dpred.data[0] = d_prediction;
    const Tensor dh_row = head.backward(dpred);
    const Tensor dfeat = gru.backward(dh_row.data);
    tcn.backward(dfeat);
}

void TcnGruNet::collect_params(std::vector<Param*>& out) {
    tcn.collect_params(out);
    gru.collect_params(out);
    head.collect_params(out);
}

// ----------------------------------------------------------------- GruNet

GruNet::GruNet(const NetConfig& config, std::uint64_t seed)
    : gru([&] {
          Rng rng(seed);
          return GruLayer("gru", 1, config.gru_hidden, rng);
      }()),
      head([&] {
          Rng rng(seed + 0x20002);
          return Dense("head", config.gru_hidden, 1, Activation::Identity, rng);
      }()),
      window_dim_(config.window_dim) {}

double GruNet::forward(std::span<const double> window) {
    check_window(window, window_dim_);
    const std::vector<double> h = gru.forward(window_as_sequence(window));
    Tensor h_row = Tensor::zeros({1, h.size()});
    std::copy(h.begin(), h.end(), h_row.data.begin());
    return head.forward(h_row).data[0];
}

void GruNet::backward(double d_prediction) {
    Tensor dpred = Tensor::zeros({1, 1});
    dpred.data[0] = d_prediction;
    const Tensor dh_row = head.backward(dpred);
    gru.backward(dh_row.data);
}

void GruNet::collect_params(std::vector<Param*>& out) {
    gru.collect_params(out);
    head.collect_params(out);
}

// ----------------------------------------------------------------- RnnNet

RnnNet::RnnNet(const NetConfig& config, std::uint64_t seed)
    : rnn([&] {
          Rng rng(seed);
          return RnnLayer("rnn", 1, config.rnn_hidden, rng);
      }()),
      head([&] {
          Rng rng(seed + 0x20002);
          return Dense("head", config.rnn_hidden, 1, Activation::Identity, rng);
      }()),
      window_dim_(config.window_dim) {}

double RnnNet::forward(std::span<const double> window) {
    check_window(window, window_dim_);
    const std::vector<double> h = rnn.forward(window_as_sequence(window));
    Tensor h_row = Tensor::zeros({1, h.size()});
    std::copy(h.begin(), h.end(), h_row.data.begin());
    return head.forward(h_row).data[0];
}

void RnnNet::backward(double d_prediction) {
    Tensor dpred = Tensor::zeros({1, 1});
    dpred.data[0] = d_prediction;
    const Tensor dh_row = head.backward(dpred);
    rnn.backward(dh_row.data);
}

void RnnNet::collect_params(std::vector<Param*>& out) {
    rnn.collect_params(out);
    head.collect_params(out);
}

// ----------------------------------------------------------------- MlpNet

MlpNet::MlpNet(const NetConfig& config, std::uint64_t seed)
    : mlp([&] {
          if (config.mlp_widths.size() < 2)
              throw std::invalid_argument("MlpNet: need at least [in, out] widths");
          if (config.mlp_widths.front() != config.window_dim)
              throw std::invalid_argument("MlpNet: first width must equal window_dim");
          if (config.mlp_widths.back() != 1)
              throw std::invalid_argument("MlpNet: last width must be 1");
          Rng rng(seed);
          return Mlp("mlp", config.mlp_widths, rng);
      }()),
      window_dim_(config.window_dim) {}

double MlpNet::forward(std::span<const double> window) {
    check_window(window, window_dim_);
    Tensor in = Tensor::zeros({1, window.size()});
    std::copy(window.begin(), window.end(), in.data.begin());
    return mlp.forward(in).data[0];
}

void MlpNet::backward(double d_prediction) {
    Tensor dpred = Tensor::zeros({1, 1});
    dpred.data[0] = d_prediction;
    mlp.backward(dpred);
}

void MlpNet::collect_params(std::vector<Param*>& out) { mlp.collect_params(out); }

// ------------------------------------------------------------ grad check

GradCheckReport grad_check(ForecastNet& net, std::span<const double> window, double target,
                           double step) {
    const auto params = net.parameters();
    net.zero_grads();

    const double pred = net.forward(window);
    net.backward(2.0 * (pred - target));

    // Snapshot analytic gradients before perturbing anything.
    std::vector<std::vector<double>> analytic;
    analytic.reserve(params.size());
    for (const Param* p : params) analytic.push_back(p->grad.data);

    auto loss_at = [&]() {
        const double e = net.forward(window) - target;
        return e * e;
    };

    GradCheckReport report;
    for (std::size_t pi = 0; pi < params.size(); ++pi) {
        Param* p = params[pi];
        GradCheckEntry entry{p->name, 0.0};
        for (std::size_t i = 0; i < p->value.numel(); ++i) {
            const double saved = p->value.data[i];
            p->value.data[i] = saved + step;
            const double loss_plus = loss_at();
            p->value.data[i] = saved - step;
            const double loss_minus = loss_at();
            p->value.data[i] = saved;

            const double numeric = (loss_plus - loss_minus) / (2.0 * step);
            const double a = analytic[pi][i];
            // Denominator floored at 1e-3: central differences at this step
            // carry ~1e-8 of absolute noise, so tinier gradients hold no
            // usable relative information and compare absolutely.
            const double scale = std::max({std::abs(a), std::abs(numeric), 1e-3});
            entry.max_rel_error = std::max(entry.max_rel_error, std::abs(a - numeric) / scale);
        }
        report.max_rel_error = std::max(report.max_rel_error, entry.max_rel_error);
        report.entries.push_back(std::move(entry));
    }
    net.zero_grads();
    return report;
}

// --------------------------------------------------------- param file IO

namespace {

constexpr char kMagic[4] = {'W', 'C', 'P', 'F'};

void write_u32(std::ofstream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
void write_u64(std::ofstream& out, std::uint64_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
void write_str(std::ofstream& out, const std::string& s) {
    write_u32(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::uint32_t read_u32(std::ifstream& in) {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
}
std::uint64_t read_u64(std::ifstream& in) {
    std::uint64_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
}
std::string read_str(std::ifstream& in) {
    const std::uint32_t len = read_u32(in);
    std::string s(len, '\0');
    in.read(s.data(), len);
    return s;
}

} // namespace

void save_param_file(const std::string& path, const ParamFile& file) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.write(kMagic, 4);
    write_u32(out, kParamsFormatVersion);
    write_u32(out, static_cast<std::uint32_t>(file.metadata.size()));
    for (const auto& [key, value] : file.metadata) {
        write_str(out, key);
        write_str(out, value);
    }
    write_u32(out, static_cast<std::uint32_t>(file.tensors.size()));
    for (const auto& [name, tensor] : file.tensors) {
        write_str(out, name);
        write_u32(out, static_cast<std::uint32_t>(tensor.shape.size()));
        for (std::size_t d : tensor.shape) write_u64(out, d);
        out.write(reinterpret_cast<const char*>(tensor.data.data()),
                  static_cast<std::streamsize>(tensor.data.size() * sizeof(double)));
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

ParamFile load_param_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error(path + ": not a windcast parameter file");
    const std::uint32_t version = read_u32(in);
    if (version != kParamsFormatVersion)
        throw std::runtime_error(path + ": unknown format version " + std::to_string(version) +
                                 " (expected " + std::to_string(kParamsFormatVersion) + ")");
    ParamFile file;
    const std::uint32_t n_meta = read_u32(in);
    for (std::uint32_t i = 0; i < n_meta; ++i) {
        std::string key = read_str(in);
        file.metadata[key] = read_str(in);
    }
    const std::uint32_t n_tensors = read_u32(in);
    for (std::uint32_t i = 0; i < n_tensors; ++i) {
        std::string name = read_str(in);
        const std::uint32_t ndim = read_u32(in);
        std::vector<std::size_t> shape(ndim);
        for (auto& d : shape) d = static_cast<std::size_t>(read_u64(in));
        Tensor tensor(shape);
        in.read(reinterpret_cast<char*>(tensor.data.data()),
                static_cast<std::streamsize>(tensor.data.size() * sizeof(double)));
        file.tensors.emplace_back(std::move(name), std::move(tensor));
    }
    if (!in) throw std::runtime_error(path + ": truncated parameter file");
    return file;
}

void export_params(ForecastNet& net, const std::string& prefix, ParamFile& out) {
    for (const Param* p : net.parameters())
        out.tensors.emplace_back(prefix + p->name, p->value);
}

void import_params(ForecastNet& net, const std::string& prefix, const ParamFile& in) {
    for (Param* p : net.parameters()) {
        const std::string full = prefix + p->name;
        auto it = std::find_if(in.tensors.begin(), in.tensors.end(),
                               [&](const auto& entry) { return entry.first == full; });
        if (it == in.tensors.end())
            throw std::runtime_error("parameter file is missing tensor: " + full);
        if (it->second.shape != p->value.shape)
            throw std::runtime_error("parameter shape mismatch for tensor: " + full);
        p->value = it->second;
        p->zero_grad();
    }
}

} // namespace windcast
