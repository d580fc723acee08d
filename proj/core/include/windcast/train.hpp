#ifndef WINDCAST_TRAIN_HPP
#define WINDCAST_TRAIN_HPP

#include "windcast/model.hpp"
#include "windcast/series.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace windcast {

struct TrainConfig {
    std::size_t epochs = 60;
    std::size_t batch_size = 32;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::uint64_t seed = 1;
};

struct TrainTrace {
    std::vector<double> epoch_loss; // mean training MSE per epoch
    double wall_seconds = 0.0;
    std::uint64_t seed = 0;
};

/**
 * Mean squared error over matching vectors:
 * loss = (1/n) sum (pred - target)^2, grad_i = (2/n)(pred_i - target_i).
 */
std::pair<double, std::vector<double>> mse_loss(const std::vector<double>& pred,
                                                const std::vector<double>& target);

/**
 * Adam with standard bias correction. step() consumes the accumulated
 * gradients and zeroes them afterwards. First-moment/second-moment state
 * is owned here, aligned with the parameter list given at construction.
 */
class AdamOptimizer {
public:
    AdamOptimizer(std::vector<Param*> params, const TrainConfig& config);

    void step();
    std::uint64_t step_count() const { return step_count_; }

private:
    std::vector<Param*> params_;
    std::vector<std::vector<double>> m_, v_;
    TrainConfig config_;
    std::uint64_t step_count_ = 0;
};

/**
 * Mini-batch training on one target column of a windowed dataset.
 * Sample order is a pure function of (seed, epoch index); the last partial
 * batch is kept. Throws on a non-finite batch loss, naming epoch and batch.
 */
TrainTrace fit(ForecastNet& net, const WindowedDataset& dataset, std::size_t target_col,
               const TrainConfig& config);

} // namespace windcast

#endif
