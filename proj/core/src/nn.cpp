#include "windcast/nn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace windcast {

const char* activation_name(Activation act) {
    switch (act) {
        case Activation::Identity: return "identity";
        case Activation::Relu: return "relu";
        case Activation::Sigmoid: return "sigmoid";
        case Activation::Tanh: return "tanh";
        case Activation::Softmax: return "softmax";
    }
    return "?";
}

Activation activation_from_name(const std::string& name) {
    if (name == "identity") return Activation::Identity;
    if (name == "relu") return Activation::Relu;
    if (name == "sigmoid") return Activation::Sigmoid;
    if (name == "tanh") return Activation::Tanh;
    if (name == "softmax") return Activation::Softmax;
    throw std::invalid_argument("unknown activation: " + name);
}

void activate(Activation act, const double* pre, double* post, std::size_t n) {
    switch (act) {
        case Activation::Identity:
            std::copy(pre, pre + n, post);
            break;
        case Activation::Relu:
            for (std::size_t i = 0; i < n; ++i) post[i] = pre[i] > 0.0 ? pre[i] : 0.0;
            break;
        case Activation::Sigmoid:
            for (std::size_t i = 0; i < n; ++i) post[i] = 1.0 / (1.0 + std::exp(-pre[i]));
            break;
        case Activation::Tanh:
            for (std::size_t i = 0; i < n; ++i) post[i] = std::tanh(pre[i]);
            break;
        case Activation::Softmax: {
            double mx = pre[0];
            for (std::size_t i = 1; i < n; ++i) mx = std::max(mx, pre[i]);
            double sum = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                post[i] = std::exp(pre[i] - mx);
                sum += post[i];
            }
            for (std::size_t i = 0; i < n; ++i) post[i] /= sum;
            break;
        }
    }
}

void activate_backward(Activation act, const double* pre, const double* post,
                       const double* dpost, double* dpre, std::size_t n) {
    switch (act) {
        case Activation::Identity:
            std::copy(dpost, dpost + n, dpre);
            break;
        case Activation::Relu:
            for (std::size_t i = 0; i < n; ++i) dpre[i] = pre[i] > 0.0 ? dpost[i] : 0.0;
            break;
        case Activation::Sigmoid:
            for (std::size_t i = 0; i < n; ++i) dpre[i] = dpost[i] * post[i] * (1.0 - post[i]);
            break;
        case Activation::Tanh:
            for (std::size_t i = 0; i < n; ++i) dpre[i] = dpost[i] * (1.0 - post[i] * post[i]);
            break;
        case Activation::Softmax: {
            double dot = 0.0;
            for (std::size_t i = 0; i < n; ++i) dot += dpost[i] * post[i];
            for (std::size_t i = 0; i < n; ++i) dpre[i] = post[i] * (dpost[i] - dot);
            break;
        }
    }
}

void init_weights(Param& param, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (double& v : param.value.data) v = rng.uniform(-bound, bound);
}

// ---------------------------------------------------------------- Dense

Dense::Dense(std::string name, std::size_t in_dim, std::size_t out_dim, Activation act, Rng& rng)
    : weight(name + ".w", {out_dim, in_dim}),
      bias(name + ".b", {out_dim}),
      in_dim_(in_dim),
      out_dim_(out_dim),
      act_(act) {
    init_weights(weight, in_dim, out_dim, rng);
}

Tensor Dense::forward(const Tensor& in) {
    if (in.cols() != in_dim_) throw std::invalid_argument("Dense: input dim mismatch");
    const std::size_t t_len = in.rows();
    input_ = in;
    preact_ = Tensor::zeros({t_len, out_dim_});
    output_ = Tensor::zeros({t_len, out_dim_});
    for (std::size_t t = 0; t < t_len; ++t) {
        double* pre = preact_.row(t);
        std::copy(bias.value.data.begin(), bias.value.data.end(), pre);
        matvec_acc(weight.value.data.data(), out_dim_, in_dim_, in.row(t), pre);
        activate(act_, pre, output_.row(t), out_dim_);
    }
    return output_;
}

Tensor Dense::backward(const Tensor& dout) {
    if (!dout.same_shape(output_)) throw std::invalid_argument("Dense: backward shape mismatch");
    const std::size_t t_len = input_.rows();
    Tensor din = Tensor::zeros({t_len, in_dim_});
    std::vector<double> dpre(out_dim_);
    for (std::size_t t = 0; t < t_len; ++t) {
        activate_backward(act_, preact_.row(t), output_.row(t), dout.row(t), dpre.data(), out_dim_);
        outer_acc(weight.grad.data.data(), out_dim_, in_dim_, dpre.data(), input_.row(t));
        vec_add(bias.grad.data.data(), dpre.data(), out_dim_);
        matvec_transpose_acc(weight.value.data.data(), out_dim_, in_dim_, dpre.data(), din.row(t));
    }
    return din;
}

void Dense::collect_params(std::vector<Param*>& out) {
    out.push_back(&weight);
    out.push_back(&bias);
}

// ------------------------------------------------------ DilatedConvLayer

DilatedConvLayer::DilatedConvLayer(std::string name, std::size_t in_channels,
                                   std::size_t out_channels, std::size_t dilation,
                                   Activation act, Rng& rng)
    : w_lag(name + ".w_lag", {out_channels, in_channels}),
      w_cur(name + ".w_cur", {out_channels, in_channels}),
      bias(name + ".b", {out_channels}),
      in_channels_(in_channels),
      out_channels_(out_channels),
      dilation_(dilation),
      act_(act) {
    if (dilation < 1) throw std::invalid_argument("DilatedConvLayer: dilation must be >= 1");
    init_weights(w_lag, in_channels, out_channels, rng);
    init_weights(w_cur, in_channels, out_channels, rng);
}

Tensor DilatedConvLayer::forward(const Tensor& in) {
    if (in.cols() != in_channels_)
        throw std::invalid_argument("DilatedConvLayer: channel mismatch");
    const std::size_t t_len = in.rows();
    input_ = in;
    preact_ = Tensor::zeros({t_len, out_channels_});
    output_ = Tensor::zeros({t_len, out_channels_});
    for (std::size_t t = 0; t < t_len; ++t) {
        double* pre = preact_.row(t);
        std::copy(bias.value.data.begin(), bias.value.data.end(), pre);
        matvec_acc(w_cur.value.data.data(), out_channels_, in_channels_, in.row(t), pre);
        if (t >= dilation_) // lagged tap; earlier times see zero padding
            matvec_acc(w_lag.value.data.data(), out_channels_, in_channels_, in.row(t - dilation_), pre);
        activate(act_, pre, output_.row(t), out_channels_);
    }
    return output_;
}

Tensor DilatedConvLayer::backward(const Tensor& dout) {
    if (!dout.same_shape(output_))
        throw std::invalid_argument("DilatedConvLayer: backward shape mismatch");
    const std::size_t t_len = input_.rows();
    Tensor din = Tensor::zeros({t_len, in_channels_});
    std::vector<double> dpre(out_channels_);
    for (std::size_t t = 0; t < t_len; ++t) {
        activate_backward(act_, preact_.row(t), output_.row(t), dout.row(t), dpre.data(), out_channels_);
        outer_acc(w_cur.grad.data.data(), out_channels_, in_channels_, dpre.data(), input_.row(t));
        vec_add(bias.grad.data.data(), dpre.data(), out_channels_);
        matvec_transpose_acc(w_cur.value.data.data(), out_channels_, in_channels_, dpre.data(), din.row(t));
        if (t >= dilation_) {
            outer_acc(w_lag.grad.data.data(), out_channels_, in_channels_, dpre.data(),
                      input_.row(t - dilation_));
            matvec_transpose_acc(w_lag.value.data.data(), out_channels_, in_channels_, dpre.data(),
                                 din.row(t - dilation_));
        }
    }
    return din;
}

void DilatedConvLayer::collect_params(std::vector<Param*>& out) {
    out.push_back(&w_lag);
    out.push_back(&w_cur);
    out.push_back(&bias);
}

// ---------------------------------------------------------- ResidualUnit

ResidualUnit::ResidualUnit(std::string name, std::size_t in_channels, std::size_t out_channels,
                           std::size_t dilation, Activation act, Rng& rng)
    : conv(name + ".conv", in_channels, out_channels, dilation, act, rng),
      proj(name + ".v", {out_channels, out_channels}),
      proj_bias(name + ".e", {out_channels}) {
    init_weights(proj, out_channels, out_channels, rng);
    if (in_channels != out_channels) {
        input_proj.emplace(name + ".skip", std::vector<std::size_t>{out_channels, in_channels});
        init_weights(*input_proj, in_channels, out_channels, rng);
    }
}

Tensor ResidualUnit::forward(const Tensor& in) {
    input_ = in;
    conv_out_ = conv.forward(in);
    const std::size_t t_len = in.rows();
    const std::size_t out_ch = conv.out_channels();
    Tensor out = Tensor::zeros({t_len, out_ch});
    for (std::size_t t = 0; t < t_len; ++t) {
        double* o = out.row(t);
        std::copy(proj_bias.value.data.begin(), proj_bias.value.data.end(), o);
        matvec_acc(proj.value.data.data(), out_ch, out_ch, conv_out_.row(t), o);
        if (input_proj)
            matvec_acc(input_proj->value.data.data(), out_ch, conv.in_channels(), in.row(t), o);
        else
            vec_add(o, in.row(t), out_ch);
    }
    return out;
}

Tensor ResidualUnit::backward(const Tensor& dout) {
    const std::size_t t_len = input_.rows();
    const std::size_t out_ch = conv.out_channels();
    const std::size_t in_ch = conv.in_channels();

    Tensor dconv = Tensor::zeros({t_len, out_ch});
    Tensor din_skip = Tensor::zeros({t_len, in_ch});
    for (std::size_t t = 0; t < t_len; ++t) {
        const double* d = dout.row(t);
        outer_acc(proj.grad.data.data(), out_ch, out_ch, d, conv_out_.row(t));
        vec_add(proj_bias.grad.data.data(), d, out_ch);
        matvec_transpose_acc(proj.value.data.data(), out_ch, out_ch, d, dconv.row(t));
        if (input_proj) {
            outer_acc(input_proj->grad.data.data(), out_ch, in_ch, d, input_.row(t));
            matvec_transpose_acc(input_proj->value.data.data(), out_ch, in_ch, d, din_skip.row(t));
        } else {
            vec_add(din_skip.row(t), d, in_ch);
        }
    }
    Tensor din = conv.backward(dconv);
    for (std::size_t i = 0; i < din.data.size(); ++i) din.data[i] += din_skip.data[i];
    return din;
}

void ResidualUnit::collect_params(std::vector<Param*>& out) {
    conv.collect_params(out);
    out.push_back(&proj);
    out.push_back(&proj_bias);
    if (input_proj) out.push_back(&*input_proj);
}

// --------------------------------------------------------- ResidualBlock

ResidualBlock::ResidualBlock(std::string name, std::size_t in_channels, std::size_t channels,
                             const std::vector<std::size_t>& dilations, Activation act, Rng& rng) {
    if (dilations.empty()) throw std::invalid_argument("ResidualBlock: need at least one dilation");
    units.reserve(dilations.size());
    std::size_t ch_in = in_channels;
    for (std::size_t l = 0; l < dilations.size(); ++l) {
        units.emplace_back(name + ".l" + std::to_string(l), ch_in, channels, dilations[l], act, rng);
        ch_in = channels;
    }
}

Tensor ResidualBlock::forward(const Tensor& in) {
    Tensor cur = in;
    for (auto& unit : units) cur = unit.forward(cur);
    return cur;
}

Tensor ResidualBlock::backward(const Tensor& dout) {
    Tensor d = dout;
    for (auto it = units.rbegin(); it != units.rend(); ++it) d = it->backward(d);
    return d;
}

void ResidualBlock::collect_params(std::vector<Param*>& out) {
    for (auto& unit : units) unit.collect_params(out);
}

// -------------------------------------------------------------- TcnStack

namespace {

std::vector<ResidualBlock> make_tcn_blocks(const std::string& name, std::size_t in_channels,
                                           const TcnConfig& config, Rng& rng) {
    if (config.blocks < 1) throw std::invalid_argument("TcnStack: need at least one block");
    if (config.channels < 1) throw std::invalid_argument("TcnStack: channels must be >= 1");
    std::vector<ResidualBlock> blocks;
    blocks.reserve(config.blocks);
    std::size_t ch_in = in_channels;
    for (std::size_t j = 0; j < config.blocks; ++j) {
        blocks.emplace_back(name + ".b" + std::to_string(j), ch_in, config.channels,
                            config.dilations, Activation::Relu, rng);
        ch_in = config.channels;
    }
    return blocks;
}

} // namespace

TcnStack::TcnStack(std::string name, std::size_t in_channels, const TcnConfig& config, Rng& rng)
    : blocks(make_tcn_blocks(name, in_channels, config, rng)),
      hidden(name + ".hidden", config.channels, config.hidden_dim, Activation::Relu, rng) {}

std::size_t TcnStack::receptive_field() const {
    std::size_t field = 1;
    for (const auto& block : blocks)
        for (const auto& unit : block.units) field += unit.conv.dilation();
    return field;
}

Tensor TcnStack::forward(const Tensor& in) {
    const std::size_t t_len = in.rows();
    const std::size_t ch = blocks.front().units.back().conv.out_channels();
    Tensor cur = in;
    skip_sum_ = Tensor::zeros({t_len, ch});
    for (auto& block : blocks) {
        cur = block.forward(cur);
        for (std::size_t i = 0; i < skip_sum_.data.size(); ++i) skip_sum_.data[i] += cur.data[i];
    }
    skip_relu_ = Tensor::zeros({t_len, ch});
    for (std::size_t i = 0; i < skip_sum_.data.size(); ++i)
        skip_relu_.data[i] = skip_sum_.data[i] > 0.0 ? skip_sum_.data[i] : 0.0;
    return hidden.forward(skip_relu_);
}

Tensor TcnStack::backward(const Tensor& dout) {
    Tensor dskip_relu = hidden.backward(dout);
    Tensor dskip = Tensor::zeros(skip_sum_.shape);
    for (std::size_t i = 0; i < dskip.data.size(); ++i)
        dskip.data[i] = skip_sum_.data[i] > 0.0 ? dskip_relu.data[i] : 0.0;

    // Each block's output feeds both the skip sum and the next block.
    Tensor dnext; // gradient flowing from block j+1's input back to block j's output
    for (std::size_t j = blocks.size(); j-- > 0;) {
        Tensor d = dskip;
        if (dnext.numel() != 0)
            for (std::size_t i = 0; i < d.data.size(); ++i) d.data[i] += dnext.data[i];
        dnext = blocks[j].backward(d);
    }
    return dnext;
}

void TcnStack::collect_params(std::vector<Param*>& out) {
    for (auto& block : blocks) block.collect_params(out);
    hidden.collect_params(out);
}

// -------------------------------------------------------------- GruLayer

GruLayer::GruLayer(std::string name, std::size_t input_dim, std::size_t hidden_dim, Rng& rng)
    : w_reset(name + ".w_reset", {hidden_dim, hidden_dim + input_dim}),
      w_update(name + ".w_update", {hidden_dim, hidden_dim + input_dim}),
      w_cand(name + ".w_cand", {hidden_dim, hidden_dim + input_dim}),
      w_out(name + ".w_out", {hidden_dim, hidden_dim}),
      input_dim_(input_dim),
      hidden_dim_(hidden_dim) {
    init_weights(w_reset, hidden_dim + input_dim, hidden_dim, rng);
    init_weights(w_update, hidden_dim + input_dim, hidden_dim, rng);
    init_weights(w_cand, hidden_dim + input_dim, hidden_dim, rng);
    init_weights(w_out, hidden_dim, hidden_dim, rng);
}

std::vector<double> GruLayer::step(const double* x, const double* h_prev, StepCache* cache) const {
    const std::size_t h_dim = hidden_dim_, f_dim = input_dim_;
    std::vector<double> concat(h_dim + f_dim);
    std::copy(h_prev, h_prev + h_dim, concat.begin());
    std::copy(x, x + f_dim, concat.begin() + static_cast<std::ptrdiff_t>(h_dim));

    std::vector<double> reset(h_dim), update(h_dim);
    matvec(w_reset.value.data.data(), h_dim, h_dim + f_dim, concat.data(), reset.data());
    matvec(w_update.value.data.data(), h_dim, h_dim + f_dim, concat.data(), update.data());
    for (std::size_t i = 0; i < h_dim; ++i) {
        reset[i] = 1.0 / (1.0 + std::exp(-reset[i]));
        update[i] = 1.0 / (1.0 + std::exp(-update[i]));
    }

    std::vector<double> cand_in(h_dim + f_dim);
    for (std::size_t i = 0; i < h_dim; ++i) cand_in[i] = reset[i] * h_prev[i];
    std::copy(x, x + f_dim, cand_in.begin() + static_cast<std::ptrdiff_t>(h_dim));

    std::vector<double> cand(h_dim);
    matvec(w_cand.value.data.data(), h_dim, h_dim + f_dim, cand_in.data(), cand.data());
    for (std::size_t i = 0; i < h_dim; ++i) cand[i] = std::tanh(cand[i]);

    std::vector<double> h(h_dim);
    for (std::size_t i = 0; i < h_dim; ++i)
        h[i] = (1.0 - update[i]) * h_prev[i] + update[i] * cand[i];

    if (cache) {
        cache->concat = concat;
        cache->reset = reset;
        cache->update = update;
        cache->cand_in = cand_in;
        cache->cand = cand;
        cache->h_prev.assign(h_prev, h_prev + h_dim);
        cache->h = h;
    }
    return h;
}

std::vector<double> GruLayer::output(const double* h) const {
    std::vector<double> y(hidden_dim_);
    matvec(w_out.value.data.data(), hidden_dim_, hidden_dim_, h, y.data());
    for (double& v : y) v = 1.0 / (1.0 + std::exp(-v));
    return y;
}

std::vector<double> GruLayer::forward(const Tensor& features) {
    if (features.cols() != input_dim_) throw std::invalid_argument("GruLayer: feature dim mismatch");
    seq_len_ = features.rows();
    if (seq_len_ == 0) throw std::invalid_argument("GruLayer: empty sequence");
    caches_.assign(seq_len_, StepCache{});
    std::vector<double> h(hidden_dim_, 0.0);
    for (std::size_t t = 0; t < seq_len_; ++t)
        h = step(features.row(t), h.data(), &caches_[t]);
    return h;
}

Tensor GruLayer::backward(const std::vector<double>& dh_final) {
    if (seq_len_ == 0) throw std::logic_error("GruLayer: backward without a matching forward");
    const std::size_t h_dim = hidden_dim_, f_dim = input_dim_;
    Tensor dfeat = Tensor::zeros({seq_len_, f_dim});
    std::vector<double> dh = dh_final;
    std::vector<double> dz(h_dim), dhc(h_dim), dh_prev(h_dim);
    std::vector<double> du(h_dim), dvec(h_dim + f_dim), da(h_dim + f_dim);

    for (std::size_t t = seq_len_; t-- > 0;) {
        const StepCache& c = caches_[t];
        for (std::size_t i = 0; i < h_dim; ++i) {
            dz[i] = dh[i] * (c.cand[i] - c.h_prev[i]);
            dhc[i] = dh[i] * c.update[i];
            dh_prev[i] = dh[i] * (1.0 - c.update[i]);
        }

        // candidate path: hc = tanh(Wc cand_in)
        for (std::size_t i = 0; i < h_dim; ++i) du[i] = dhc[i] * (1.0 - c.cand[i] * c.cand[i]);
        outer_acc(w_cand.grad.data.data(), h_dim, h_dim + f_dim, du.data(), c.cand_in.data());
        std::fill(dvec.begin(), dvec.end(), 0.0);
        matvec_transpose_acc(w_cand.value.data.data(), h_dim, h_dim + f_dim, du.data(), dvec.data());
        for (std::size_t i = 0; i < h_dim; ++i) dh_prev[i] += dvec[i] * c.reset[i];
        for (std::size_t i = 0; i < f_dim; ++i) dfeat.row(t)[i] += dvec[h_dim + i];

        std::fill(da.begin(), da.end(), 0.0);
        // reset gate: dr = dvec[:H] . h_prev
        for (std::size_t i = 0; i < h_dim; ++i)
            du[i] = dvec[i] * c.h_prev[i] * c.reset[i] * (1.0 - c.reset[i]);
        outer_acc(w_reset.grad.data.data(), h_dim, h_dim + f_dim, du.data(), c.concat.data());
        matvec_transpose_acc(w_reset.value.data.data(), h_dim, h_dim + f_dim, du.data(), da.data());

        // update gate
        for (std::size_t i = 0; i < h_dim; ++i)
            du[i] = dz[i] * c.update[i] * (1.0 - c.update[i]);
        outer_acc(w_update.grad.data.data(), h_dim, h_dim + f_dim, du.data(), c.concat.data());
        matvec_transpose_acc(w_update.value.data.data(), h_dim, h_dim + f_dim, du.data(), da.data());

        for (std::size_t i = 0; i < h_dim; ++i) dh_prev[i] += da[i];
        for (std::size_t i = 0; i < f_dim; ++i) dfeat.row(t)[i] += da[h_dim + i];

        dh = dh_prev;
    }
    return dfeat;
}

void GruLayer::collect_params(std::vector<Param*>& out) {
    out.push_back(&w_reset);
    out.push_back(&w_update);
    out.push_back(&w_cand);
    out.push_back(&w_out);
}

// -------------------------------------------------------------- RnnLayer

RnnLayer::RnnLayer(std::string name, std::size_t input_dim, std::size_t hidden_dim, Rng& rng)
    : w(name + ".w", {hidden_dim, hidden_dim + input_dim}),
      b(name + ".b", {hidden_dim}),
      input_dim_(input_dim),
      hidden_dim_(hidden_dim) {
    init_weights(w, hidden_dim + input_dim, hidden_dim, rng);
}

std::vector<double> RnnLayer::step(const double* x, const double* h_prev, StepCache* cache) const {
    const std::size_t h_dim = hidden_dim_, f_dim = input_dim_;
    std::vector<double> concat(h_dim + f_dim);
    std::copy(h_prev, h_prev + h_dim, concat.begin());
    std::copy(x, x + f_dim, concat.begin() + static_cast<std::ptrdiff_t>(h_dim));
    std::vector<double> h = b.value.data;
    matvec_acc(w.value.data.data(), h_dim, h_dim + f_dim, concat.data(), h.data());
    for (double& v : h) v = std::tanh(v);
    if (cache) {
        cache->concat = std::move(concat);
        cache->h = h;
    }
    return h;
}

std::vector<double> RnnLayer::forward(const Tensor& features) {
    if (features.cols() != input_dim_) throw std::invalid_argument("RnnLayer: feature dim mismatch");
    seq_len_ = features.rows();
    if (seq_len_ == 0) throw std::invalid_argument("RnnLayer: empty sequence");
    caches_.assign(seq_len_, StepCache{});
    std::vector<double> h(hidden_dim_, 0.0);
    for (std::size_t t = 0; t < seq_len_; ++t)
        h = step(features.row(t), h.data(), &caches_[t]);
    return h;
}

Tensor RnnLayer::backward(const std::vector<double>& dh_final) {
    if (seq_len_ == 0) throw std::logic_error("RnnLayer: backward without a matching forward");
    const std::size_t h_dim = hidden_dim_, f_dim = input_dim_;
    Tensor dfeat = Tensor::zeros({seq_len_, f_dim});
    std::vector<double> dh = dh_final;
    std::vector<double> du(h_dim), da(h_dim + f_dim);
    for (std::size_t t = seq_len_; t-- > 0;) {
        const StepCache& c = caches_[t];
        for (std::size_t i = 0; i < h_dim; ++i) du[i] = dh[i] * (1.0 - c.h[i] * c.h[i]);
        outer_acc(w.grad.data.data(), h_dim, h_dim + f_dim, du.data(), c.concat.data());
        vec_add(b.grad.data.data(), du.data(), h_dim);
        std::fill(da.begin(), da.end(), 0.0);
        matvec_transpose_acc(w.value.data.data(), h_dim, h_dim + f_dim, du.data(), da.data());
        for (std::size_t i = 0; i < h_dim; ++i) dh[i] = da[i];
        for (std::size_t i = 0; i < f_dim; ++i) dfeat.row(t)[i] = da[h_dim + i];
    }
    return dfeat;
}

void RnnLayer::collect_params(std::vector<Param*>& out) {
    out.push_back(&w);
    out.push_back(&b);
}

// ------------------------------------------------------------------ Mlp

Mlp::Mlp(std::string name, const std::vector<std::size_t>& widths, Rng& rng) {
    if (widths.size() < 2) throw std::invalid_argument("Mlp: need at least [in, out] widths");
    layers.reserve(widths.size() - 1);
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
        const Activation act = (l + 2 == widths.size()) ? Activation::Identity : Activation::Tanh;
        layers.emplace_back(name + ".l" + std::to_string(l), widths[l], widths[l + 1], act, rng);
    }
}

Tensor Mlp::forward(const Tensor& in) {
    Tensor cur = in;
    for (auto& layer : layers) cur = layer.forward(cur);
    return cur;
}

Tensor Mlp::backward(const Tensor& dout) {
    Tensor d = dout;
    for (auto it = layers.rbegin(); it != layers.rend(); ++it) d = it->backward(d);
    return d;
}

void Mlp::collect_params(std::vector<Param*>& out) {
    for (auto& layer : layers) layer.collect_params(out);
}

} // namespace windcast
