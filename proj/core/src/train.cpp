#include "windcast/train.hpp"

#include "windcast/rng.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace windcast {

std::pair<double, std::vector<double>> mse_loss(const std::vector<double>& pred,
                                                const std::vector<double>& target) {
    if (pred.size() != target.size())
        throw std::invalid_argument("mse_loss: shape mismatch (" + std::to_string(pred.size()) +
                                    " vs " + std::to_string(target.size()) + ")");
    if (pred.empty()) throw std::invalid_argument("mse_loss: empty input");
    const double n = static_cast<double>(pred.size());
    double loss = 0.0;
    std::vector<double> grad(pred.size());
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double e = pred[i] - target[i];
        loss += e * e;
        grad[i] = 2.0 * e / n;
    }
    return {loss / n, std::move(grad)};
}

AdamOptimizer::AdamOptimizer(std::vector<Param*> params, const TrainConfig& config)
    : params_(std::move(params)), config_(config) {
    m_.reserve(params_.size());
    v_.reserve(params_.size());
    for (const Param* p : params_) {
        m_.emplace_back(p->value.numel(), 0.0);
        v_.emplace_back(p->value.numel(), 0.0);
    }
}

void AdamOptimizer::step() {
    ++step_count_;
    const double b1 = config_.beta1, b2 = config_.beta2;
    const double bias1 = 1.0 - std::pow(b1, static_cast<double>(step_count_));
    const double bias2 = 1.0 - std::pow(b2, static_cast<double>(step_count_));
    for (std::size_t pi = 0; pi < params_.size(); ++pi) {
        Param& p = *params_[pi];
        auto& m = m_[pi];
        auto& v = v_[pi];
        for (std::size_t i = 0; i < m.size(); ++i) {
            const double g = p.grad.data[i];
            m[i] = b1 * m[i] + (1.0 - b1) * g;
            v[i] = b2 * v[i] + (1.0 - b2) * g * g;
            const double m_hat = m[i] / bias1;
            const double v_hat = v[i] / bias2;
            p.value.data[i] -= config_.learning_rate * m_hat / (std::sqrt(v_hat) + config_.epsilon);
        }
        p.zero_grad();
    }
}

TrainTrace fit(ForecastNet& net, const WindowedDataset& dataset, std::size_t target_col,
               const TrainConfig& config) {
    if (config.epochs < 1) throw std::invalid_argument("fit: epochs must be >= 1");
    if (config.batch_size < 1) throw std::invalid_argument("fit: batch_size must be >= 1");
    if (config.learning_rate <= 0.0) throw std::invalid_argument("fit: learning_rate must be > 0");
    if (dataset.num_samples == 0) throw std::invalid_argument("fit: empty dataset");
    if (target_col >= dataset.horizons.size())
        throw std::invalid_argument("fit: target column out of range");
    if (dataset.window_dim != net.window_dim())
        throw std::invalid_argument("fit: dataset window_dim does not match the model");

    const auto start = std::chrono::steady_clock::now();
    TrainTrace trace;
    trace.seed = config.seed;
    trace.epoch_loss.reserve(config.epochs);

    net.zero_grads();
    AdamOptimizer optimizer(net.parameters(), config);

    std::vector<std::size_t> order(dataset.num_samples);
    std::iota(order.begin(), order.end(), std::size_t{0});

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        // Shuffle depends only on (seed, epoch).
        Rng rng(config.seed ^ ((epoch + 1) * 0x9e3779b97f4a7c15ULL));
        rng.shuffle(order);

        double epoch_sse = 0.0;
        std::size_t batch_index = 0;
        for (std::size_t begin = 0; begin < order.size(); begin += config.batch_size, ++batch_index) {
            const std::size_t end = std::min(begin + config.batch_size, order.size());
            const double batch_n = static_cast<double>(end - begin);
            double batch_sse = 0.0;
            for (std::size_t k = begin; k < end; ++k) {
                const std::size_t idx = order[k];
                const double pred = net.forward(
                    std::span<const double>(dataset.input_row(idx), dataset.window_dim));
                const double err = pred - dataset.target(idx, target_col);
                batch_sse += err * err;
                net.backward(2.0 * err / batch_n);
            }
            if (!std::isfinite(batch_sse))
                throw std::runtime_error("fit: non-finite loss at epoch " + std::to_string(epoch) +
                                         ", batch " + std::to_string(batch_index) +
                                         " (training diverged)");
            optimizer.step();
            epoch_sse += batch_sse;
        }
        trace.epoch_loss.push_back(epoch_sse / static_cast<double>(dataset.num_samples));
    }

    trace.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return trace;
}

} // namespace windcast
