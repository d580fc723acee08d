#ifndef WINDCAST_TENSOR_HPP
#define WINDCAST_TENSOR_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace windcast {

/**
 * Dense row-major tensor of doubles. Storage carrier for layer parameters
 * and sequence activations; shape arithmetic lives in the layers.
 */
struct Tensor {
    std::vector<std::size_t> shape;
    std::vector<double> data;

    Tensor() = default;
    explicit Tensor(std::vector<std::size_t> s);

    static Tensor zeros(std::vector<std::size_t> shape) { return Tensor(std::move(shape)); }

    std::size_t numel() const { return data.size(); }
    std::size_t rows() const { return shape.empty() ? 0 : shape[0]; }
    std::size_t cols() const { return shape.size() < 2 ? 1 : shape[1]; }

    double& at(std::size_t i, std::size_t j) { return data[i * cols() + j]; }
    double at(std::size_t i, std::size_t j) const { return data[i * cols() + j]; }

    double* row(std::size_t i) { return data.data() + i * cols(); }
    const double* row(std::size_t i) const { return data.data() + i * cols(); }

    void fill(double v);
    bool same_shape(const Tensor& other) const { return shape == other.shape; }
};

/// Named parameter tensor with a paired gradient buffer of the same shape.
struct Param {
    Tensor value;
    Tensor grad;
    std::string name;

    Param() = default;
    Param(std::string n, std::vector<std::size_t> shape)
        : value(shape), grad(std::move(shape)), name(std::move(n)) {}

    void zero_grad() { grad.fill(0.0); }
};

// Small dense kernels used by every layer. Plain loops on contiguous
// buffers; shapes are trusted (callers validate once at wiring time).

/// y = W x, W is (m x n) row-major.
inline void matvec(const double* w, std::size_t m, std::size_t n, const double* x, double* y) {
    for (std::size_t i = 0; i < m; ++i) {
        const double* wr = w + i * n;
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += wr[j] * x[j];
        y[i] = acc;
    }
}

/// y += W x.
inline void matvec_acc(const double* w, std::size_t m, std::size_t n, const double* x, double* y) {
    for (std::size_t i = 0; i < m; ++i) {
        const double* wr = w + i * n;
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += wr[j] * x[j];
        y[i] += acc;
    }
}

/// y += W^T x, W is (m x n), x has m entries, y has n entries.
inline void matvec_transpose_acc(const double* w, std::size_t m, std::size_t n,
                                 const double* x, double* y) {
    for (std::size_t i = 0; i < m; ++i) {
        const double* wr = w + i * n;
        const double xi = x[i];
        for (std::size_t j = 0; j < n; ++j) y[j] += wr[j] * xi;
    }
}

/// dW += u v^T, dW is (m x n).
inline void outer_acc(double* dw, std::size_t m, std::size_t n, const double* u, const double* v) {
    for (std::size_t i = 0; i < m; ++i) {
        double* dwr = dw + i * n;
        const double ui = u[i];
        for (std::size_t j = 0; j < n; ++j) dwr[j] += ui * v[j];
    }
}

inline void vec_add(double* y, const double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += x[i];
}

} // namespace windcast

#endif
