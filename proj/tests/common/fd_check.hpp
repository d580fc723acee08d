#ifndef WINDCAST_TESTS_FD_CHECK_HPP
#define WINDCAST_TESTS_FD_CHECK_HPP

#include "windcast/rng.hpp"
#include "windcast/tensor.hpp"

#include <cmath>
#include <functional>
#include <vector>

namespace windcast::testing {

/**
 * Central finite-difference oracle for any differentiable map exposed as
 *   loss()        pure forward evaluation
 *   accumulate()  one forward + backward pass accumulating param grads
 * Returns the max relative error between analytic and numeric gradients
 * over every scalar of every parameter, with the denominator floored at
 * 1e-3: the absolute noise floor of central differences at step 1e-5 is
 * around 1e-8, so gradients much smaller than the floor carry no usable
 * relative information and compare absolutely instead.
 */
inline double max_grad_rel_error(const std::vector<Param*>& params,
                                 const std::function<double()>& loss,
                                 const std::function<void()>& accumulate,
                                 double step = 1e-5) {
    for (Param* p : params) p->zero_grad();
    accumulate();
    std::vector<std::vector<double>> analytic;
    analytic.reserve(params.size());
    for (const Param* p : params) analytic.push_back(p->grad.data);

    double max_rel = 0.0;
    for (std::size_t pi = 0; pi < params.size(); ++pi) {
        Param* p = params[pi];
        for (std::size_t i = 0; i < p->value.numel(); ++i) {
            const double saved = p->value.data[i];
            p->value.data[i] = saved + step;
            const double plus = loss();
            p->value.data[i] = saved - step;
            const double minus = loss();
            p->value.data[i] = saved;
            const double numeric = (plus - minus) / (2.0 * step);
            const double a = analytic[pi][i];
            const double scale = std::max({std::abs(a), std::abs(numeric), 1e-3});
            max_rel = std::max(max_rel, std::abs(a - numeric) / scale);
        }
    }
    for (Param* p : params) p->zero_grad();
    return max_rel;
}

/**
 * Move every parameter off its initialization point. Freshly built nets
 * hold biases at exactly zero, which parks ReLU pre-activations on the
 * kink where one-sided analytic derivatives and central differences
 * legitimately disagree; random configurations must avoid that measure-zero
 * set for the finite-difference oracle to be valid.
 */
inline void jitter_params(const std::vector<Param*>& params, Rng& rng, double radius = 0.3) {
    for (Param* p : params)
        for (double& v : p->value.data) v += rng.uniform(-radius, radius);
}

} // namespace windcast::testing

#endif
