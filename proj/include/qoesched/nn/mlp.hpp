#pragma once

#include <Eigen/Dense>
#include <string_view>
#include <vector>

#include "qoesched/sim/rng.hpp"

namespace qoesched::nn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Activation { relu, identity, softplus };

std::string_view to_string(Activation act);
Activation activation_from_string(std::string_view name);

struct DenseLayer {
    Matrix weight;  // out x in
    Vector bias;    // out
    Activation activation = Activation::relu;

    int inputs() const { return static_cast<int>(weight.cols()); }
    int outputs() const { return static_cast<int>(weight.rows()); }
};

struct LayerSpec {
    int inputs = 0;
    int outputs = 0;
    Activation activation = Activation::relu;
};

struct LayerGradient {
    Matrix weight;
    Vector bias;
};

struct Gradients {
    std::vector<LayerGradient> layers;
    Matrix input;  // d(objective)/d(input), in x batch
};

/// Dense feed-forward network. Batches are matrices with one sample per column.
class Mlp {
public:
    Mlp() = default;
    explicit Mlp(std::vector<DenseLayer> layers);

    /// Kaiming-uniform weights, U(-1/sqrt(fan_in), 1/sqrt(fan_in)) biases.
    static Mlp init(const std::vector<LayerSpec>& shape, Rng& rng);

    /// Forward pass that caches what `backward` needs.
    Matrix forward(const Matrix& input);
    /// Forward pass without touching the cache.
    Matrix predict(const Matrix& input) const;

    /// Reverse-mode pass for the most recent `forward`. `upstream` is d(objective)/d(output).
    /// Parameter gradients are summed over the batch. Throws std::logic_error without a cached forward.
    Gradients backward(const Matrix& upstream) const;

    const std::vector<DenseLayer>& layers() const { return layers_; }
    std::vector<DenseLayer>& layers() { return layers_; }
    int input_size() const { return layers_.empty() ? 0 : layers_.front().inputs(); }
    int output_size() const { return layers_.empty() ? 0 : layers_.back().outputs(); }
    std::size_t parameter_count() const;

    /// this = tau * source + (1 - tau) * this. Shapes must match.
    void soft_update(const Mlp& source, double tau);

    void clear_cache() { cache_valid_ = false; }

private:
    std::vector<DenseLayer> layers_;
    std::vector<Matrix> cached_inputs_;
    std::vector<Matrix> cached_pre_;
    bool cache_valid_ = false;
};

/// First and second moments per parameter.
struct AdamState {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    long steps = 0;
    std::vector<LayerGradient> first;
    std::vector<LayerGradient> second;

    static AdamState for_network(const Mlp& net);
};

/// Bias-corrected Adam update. `sign` = -1 descends on `grads`, +1 ascends.
void adam_step(Mlp& net, const Gradients& grads, AdamState& state, double lr, double sign);

}  // namespace qoesched::nn
