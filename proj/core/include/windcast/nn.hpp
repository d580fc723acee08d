#ifndef WINDCAST_NN_HPP
#define WINDCAST_NN_HPP

#include "windcast/rng.hpp"
#include "windcast/tensor.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace windcast {

enum class Activation { Identity, Relu, Sigmoid, Tanh, Softmax };

const char* activation_name(Activation act);
Activation activation_from_name(const std::string& name);

/// Apply an activation to one row (Softmax normalizes over the whole row).
void activate(Activation act, const double* pre, double* post, std::size_t n);

/**
 * dpre = J_f^T dpost for the activation, given pre- and post-activation
 * values. Softmax uses the full Jacobian; the rest are elementwise.
 */
void activate_backward(Activation act, const double* pre, const double* post,
                       const double* dpost, double* dpre, std::size_t n);

/// Glorot-uniform weight init: uniform in +-sqrt(6 / (fan_in + fan_out)).
void init_weights(Param& param, std::size_t fan_in, std::size_t fan_out, Rng& rng);

/**
 * Fully connected layer applied independently to each row of a
 * (T x in_dim) tensor: out[t] = act(W in[t] + b).
 */
class Dense {
public:
    Dense(std::string name, std::size_t in_dim, std::size_t out_dim, Activation act, Rng& rng);

    Tensor forward(const Tensor& in);
    /// Propagate (T x out_dim) gradient; accumulates into W, b grads.
    Tensor backward(const Tensor& dout);
    void collect_params(std::vector<Param*>& out);

    std::size_t in_dim() const { return in_dim_; }
    std::size_t out_dim() const { return out_dim_; }
    Activation activation() const { return act_; }

    Param weight;
    Param bias;

private:
    std::size_t in_dim_, out_dim_;
    Activation act_;
    Tensor input_, preact_, output_;
};

/**
 * Two-tap dilated causal convolution over a (T x in_channels) sequence:
 *
 *   out[t] = act(w_lag * in[t - d] + w_cur * in[t] + b)
 *
 * with in[t - d] treated as zero when t < d (causal left padding), so the
 * output length equals the input length.
 */
class DilatedConvLayer {
public:
    DilatedConvLayer(std::string name, std::size_t in_channels, std::size_t out_channels,
                     std::size_t dilation, Activation act, Rng& rng);

    Tensor forward(const Tensor& in);
    Tensor backward(const Tensor& dout);
    void collect_params(std::vector<Param*>& out);

    std::size_t in_channels() const { return in_channels_; }
    std::size_t out_channels() const { return out_channels_; }
    std::size_t dilation() const { return dilation_; }

    Param w_lag; // tap at t - dilation
    Param w_cur; // tap at t
    Param bias;

private:
    std::size_t in_channels_, out_channels_, dilation_;
    Activation act_;
    Tensor input_, preact_, output_;
};

/**
 * Dilated convolution with a residual connection:
 *
 *   out[t] = skip(in[t]) + V * conv(in)[t] + e
 *
 * skip is the identity when channel counts match; otherwise a learned 1x1
 * projection lifts the input to the convolution's channel count.
 */
class ResidualUnit {
public:
    ResidualUnit(std::string name, std::size_t in_channels, std::size_t out_channels,
                 std::size_t dilation, Activation act, Rng& rng);

    Tensor forward(const Tensor& in);
    Tensor backward(const Tensor& dout);
    void collect_params(std::vector<Param*>& out);

    DilatedConvLayer conv;
    Param proj;      // V, (out x out) applied to the conv output
    Param proj_bias; // e
    std::optional<Param> input_proj; // 1x1 lift, present iff channels differ

private:
    Tensor input_, conv_out_;
};

/// Chain of residual units (one per dilation).
class ResidualBlock {
public:
    ResidualBlock(std::string name, std::size_t in_channels, std::size_t channels,
                  const std::vector<std::size_t>& dilations, Activation act, Rng& rng);

    Tensor forward(const Tensor& in);
    Tensor backward(const Tensor& dout);
    void collect_params(std::vector<Param*>& out);

    std::vector<ResidualUnit> units;
};

struct TcnConfig {
    std::size_t channels = 10;
    std::vector<std::size_t> dilations{1, 2, 4};
    std::size_t blocks = 1;
    std::size_t hidden_dim = 10; // width of the post-skip hidden layer
};

/**
 * TCN feature extractor: residual blocks chained in sequence, a skip sum
 * of every block's final state passed through ReLU, then a per-timestep
 * ReLU hidden layer. Output is the (T x hidden_dim) feature sequence.
 */
class TcnStack {
public:
    TcnStack(std::string name, std::size_t in_channels, const TcnConfig& config, Rng& rng);

    Tensor forward(const Tensor& in);
    Tensor backward(const Tensor& dout);
    void collect_params(std::vector<Param*>& out);

    /// 1 + sum over all conv layers of (kernel-1) * dilation.
    std::size_t receptive_field() const;

    std::vector<ResidualBlock> blocks;
    Dense hidden;

private:
    Tensor skip_sum_, skip_relu_;
};

/**
 * Gated recurrent cell. Gates act on the concatenation [h_prev, x]; the
 * candidate sees the reset-gated hidden state:
 *
 *   r = sigmoid(Wr [h_prev, x])
 *   z = sigmoid(Wz [h_prev, x])
 *   hc = tanh(Wc [r . h_prev, x])
 *   h  = (1 - z) . h_prev + z . hc
 *   y  = sigmoid(Wo h)
 */
class GruLayer {
public:
    GruLayer(std::string name, std::size_t input_dim, std::size_t hidden_dim, Rng& rng);

    struct StepCache {
        std::vector<double> concat, reset, update, cand_in, cand, h_prev, h;
    };

    /// One cell step; fills `cache` when provided (needed for backward).
    std::vector<double> step(const double* x, const double* h_prev, StepCache* cache) const;

    /// Per-step output vector y = sigmoid(Wo h).
    std::vector<double> output(const double* h) const;

    /// Fold step over a (T x input_dim) sequence from h0 = 0; returns h_T.
    std::vector<double> forward(const Tensor& features);

    /// BPTT from dL/dh_T; returns (T x input_dim) feature gradient.
    Tensor backward(const std::vector<double>& dh_final);

    void collect_params(std::vector<Param*>& out);

    std::size_t input_dim() const { return input_dim_; }
    std::size_t hidden_dim() const { return hidden_dim_; }

    Param w_reset, w_update, w_cand; // (H x (H + F))
    Param w_out;                     // (H x H)

private:
    std::size_t input_dim_, hidden_dim_;
    std::vector<StepCache> caches_;
    std::size_t seq_len_ = 0;
};

/// Vanilla recurrent layer: h = tanh(W [h_prev, x] + b).
class RnnLayer {
public:
    RnnLayer(std::string name, std::size_t input_dim, std::size_t hidden_dim, Rng& rng);

    struct StepCache {
        std::vector<double> concat, h;
    };

    std::vector<double> step(const double* x, const double* h_prev, StepCache* cache) const;
    std::vector<double> forward(const Tensor& features);
    Tensor backward(const std::vector<double>& dh_final);
    void collect_params(std::vector<Param*>& out);

    std::size_t input_dim() const { return input_dim_; }
    std::size_t hidden_dim() const { return hidden_dim_; }

    Param w; // (H x (H + F))
    Param b; // (H)

private:
    std::size_t input_dim_, hidden_dim_;
    std::vector<StepCache> caches_;
    std::size_t seq_len_ = 0;
};

/// Feed-forward net from a width list [in, hidden..., out]; smooth tanh
/// hidden activations, linear output.
class Mlp {
public:
    Mlp(std::string name, const std::vector<std::size_t>& widths, Rng& rng);

    Tensor forward(const Tensor& in);
    Tensor backward(const Tensor& dout);
    void collect_params(std::vector<Param*>& out);

    std::vector<Dense> layers;
};

} // namespace windcast

#endif
