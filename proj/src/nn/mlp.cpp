#include "qoesched/nn/mlp.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace qoesched::nn {

namespace {

void apply_activation(Matrix& z, Activation act) {
    if (act == Activation::relu) {
        z = z.cwiseMax(0.0);
    } else if (act == Activation::softplus) {
        // max(z, 0) + log1p(exp(-|z|)) avoids overflow for large z.
        z = z.cwiseMax(0.0).array() + (-z.array().abs()).exp().log1p();
    }
}

}  // namespace

std::string_view to_string(Activation act) {
    switch (act) {
        case Activation::relu: return "relu";
        case Activation::softplus: return "softplus";
        case Activation::identity: break;
    }
    return "identity";
}

Activation activation_from_string(std::string_view name) {
    if (name == "relu") return Activation::relu;
    if (name == "identity") return Activation::identity;
    if (name == "softplus") return Activation::softplus;
    throw std::invalid_argument("unknown activation: " + std::string(name));
}

Mlp::Mlp(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        if (layers_[i].bias.size() != layers_[i].weight.rows()) {
            throw std::invalid_argument("Mlp: bias size does not match layer outputs");
        }
        if (i > 0 && layers_[i].inputs() != layers_[i - 1].outputs()) {
            throw std::invalid_argument("Mlp: layer " + std::to_string(i) + " input size mismatch");
        }
    }
}

Mlp Mlp::init(const std::vector<LayerSpec>& shape, Rng& rng) {
    std::vector<DenseLayer> layers;
    for (const auto& spec : shape) {
        if (spec.inputs <= 0 || spec.outputs <= 0) {
            throw std::invalid_argument("Mlp::init: layer sizes must be positive");
        }
        const double fan_in = spec.inputs;
        std::uniform_real_distribution<double> weight_dist(-std::sqrt(6.0 / fan_in), std::sqrt(6.0 / fan_in));
        std::uniform_real_distribution<double> bias_dist(-1.0 / std::sqrt(fan_in), 1.0 / std::sqrt(fan_in));
        DenseLayer layer;
        layer.activation = spec.activation;
        layer.weight.resize(spec.outputs, spec.inputs);
        layer.bias.resize(spec.outputs);
        for (int r = 0; r < spec.outputs; ++r) {
            for (int c = 0; c < spec.inputs; ++c) {
                layer.weight(r, c) = weight_dist(rng);
            }
        }
        for (int r = 0; r < spec.outputs; ++r) {
            layer.bias(r) = bias_dist(rng);
        }
        layers.push_back(std::move(layer));
    }
    return Mlp(std::move(layers));
}

Matrix Mlp::forward(const Matrix& input) {
    cached_inputs_.resize(layers_.size());
    cached_pre_.resize(layers_.size());
    Matrix x = input;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        const auto& layer = layers_[i];
        if (x.rows() != layer.inputs()) {
            throw std::invalid_argument("Mlp::forward: input has " + std::to_string(x.rows()) + " rows, expected " +
                                        std::to_string(layer.inputs()));
        }
        Matrix z = layer.weight * x;
        z.colwise() += layer.bias;
        cached_inputs_[i] = std::move(x);
        cached_pre_[i] = z;
        apply_activation(z, layer.activation);
        x = std::move(z);
    }
    cache_valid_ = true;
    return x;
}

Matrix Mlp::predict(const Matrix& input) const {
    Matrix x = input;
    for (const auto& layer : layers_) {
        if (x.rows() != layer.inputs()) {
            throw std::invalid_argument("Mlp::predict: input size mismatch");
        }
        Matrix z = layer.weight * x;
        z.colwise() += layer.bias;
        apply_activation(z, layer.activation);
        x = std::move(z);
    }
    return x;
}

Gradients Mlp::backward(const Matrix& upstream) const {
    if (!cache_valid_) {
        throw std::logic_error("Mlp::backward called before forward");
    }
    if (upstream.rows() != output_size() || upstream.cols() != cached_pre_.back().cols()) {
        throw std::invalid_argument("Mlp::backward: upstream gradient shape mismatch");
    }
    Gradients grads;
    grads.layers.resize(layers_.size());
    Matrix delta = upstream;
    for (std::size_t i = layers_.size(); i-- > 0;) {
        const auto& layer = layers_[i];
        if (layer.activation == Activation::relu) {
            delta = delta.cwiseProduct((cached_pre_[i].array() > 0.0).cast<double>().matrix());
        } else if (layer.activation == Activation::softplus) {
            delta = delta.cwiseProduct((1.0 / (1.0 + (-cached_pre_[i].array()).exp())).matrix());
        }
        grads.layers[i].weight = delta * cached_inputs_[i].transpose();
        grads.layers[i].bias = delta.rowwise().sum();
        delta = layer.weight.transpose() * delta;
    }
    grads.input = std::move(delta);
    return grads;
}

std::size_t Mlp::parameter_count() const {
    std::size_t n = 0;
    for (const auto& layer : layers_) {
        n += static_cast<std::size_t>(layer.weight.size() + layer.bias.size());
    }
    return n;
}

void Mlp::soft_update(const Mlp& source, double tau) {
    if (source.layers_.size() != layers_.size()) {
        throw std::invalid_argument("soft_update: layer count mismatch");
    }
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        auto& dst = layers_[i];
        const auto& src = source.layers_[i];
        if (dst.weight.rows() != src.weight.rows() || dst.weight.cols() != src.weight.cols()) {
            throw std::invalid_argument("soft_update: shape mismatch");
        }
        dst.weight = tau * src.weight + (1.0 - tau) * dst.weight;
        dst.bias = tau * src.bias + (1.0 - tau) * dst.bias;
    }
}

AdamState AdamState::for_network(const Mlp& net) {
    AdamState state;
    for (const auto& layer : net.layers()) {
        state.first.push_back({Matrix::Zero(layer.weight.rows(), layer.weight.cols()), Vector::Zero(layer.bias.size())});
    }
    state.second = state.first;
    return state;
}

void adam_step(Mlp& net, const Gradients& grads, AdamState& state, double lr, double sign) {
    auto& layers = net.layers();
    if (grads.layers.size() != layers.size() || state.first.size() != layers.size()) {
        throw std::invalid_argument("adam_step: layer count mismatch");
    }
    ++state.steps;
    const double correction1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.steps));
    const double correction2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.steps));
    const double b1 = state.beta1;
    const double b2 = state.beta2;
    const double eps = state.epsilon;

    auto update = [&](auto& param, const auto& grad, auto& m, auto& v) {
        m = b1 * m + (1.0 - b1) * grad;
        v = b2 * v + (1.0 - b2) * grad.cwiseProduct(grad);
        param.array() += sign * lr * (m.array() / correction1) / ((v.array() / correction2).sqrt() + eps);
    };
    for (std::size_t i = 0; i < layers.size(); ++i) {
        update(layers[i].weight, grads.layers[i].weight, state.first[i].weight, state.second[i].weight);
        update(layers[i].bias, grads.layers[i].bias, state.first[i].bias, state.second[i].bias);
    }
}

}  // namespace qoesched::nn
