#pragma once

#include <string>
#include <vector>

#include "qoesched/nn/checkpoint.hpp"
#include "qoesched/nn/mlp.hpp"

namespace qoesched::ddpg {

using nn::Matrix;

/// Layer counts and widths of the actor and critic.
struct NetworkShape {
    int state_size = 0;   // U*K*4
    int action_size = 0;  // U*K
    int hidden_width = 256;
    int actor_hidden_layers = 4;   // p
    int critic_state_layers = 3;   // q
    nn::Activation actor_output = nn::Activation::relu;
    nn::Activation critic_output = nn::Activation::relu;
};

/// Flattened state -> p ReLU layers -> non-negative output of size U*K (ReLU unless overridden).
class ActorNet {
public:
    ActorNet() = default;
    ActorNet(const NetworkShape& shape, Rng& rng);
    explicit ActorNet(nn::Mlp net) : net_(std::move(net)) {}

    Matrix forward(const Matrix& states) { return net_.forward(states); }
    Matrix predict(const Matrix& states) const { return net_.predict(states); }
    nn::Gradients backward(const Matrix& upstream) const { return net_.backward(upstream); }

    nn::Mlp& net() { return net_; }
    const nn::Mlp& net() const { return net_; }

private:
    nn::Mlp net_;
};

struct CriticGradients {
    nn::Gradients state_branch;
    nn::Gradients action_branch;
    nn::Gradients head;
    Matrix state_input;   // d/dS
    Matrix action_input;  // d/dA
};

/// Two-branch Q network: state branch (q ReLU layers) and action branch (one ReLU layer)
/// concatenated into two fully connected layers ending in a scalar.
class CriticNet {
public:
    CriticNet() = default;
    CriticNet(const NetworkShape& shape, Rng& rng);
    CriticNet(nn::Mlp state_branch, nn::Mlp action_branch, nn::Mlp head);

    /// Returns a 1 x batch row of Q values.
    Matrix forward(const Matrix& states, const Matrix& actions);
    Matrix predict(const Matrix& states, const Matrix& actions) const;
    CriticGradients backward(const Matrix& upstream) const;

    void soft_update(const CriticNet& source, double tau);

    nn::Mlp& state_branch() { return state_; }
    nn::Mlp& action_branch() { return action_; }
    nn::Mlp& head() { return head_; }
    const nn::Mlp& state_branch() const { return state_; }
    const nn::Mlp& action_branch() const { return action_; }
    const nn::Mlp& head() const { return head_; }

    std::vector<nn::NamedNet> named() const;
    static CriticNet from_named(const std::vector<nn::NamedNet>& nets);

private:
    nn::Mlp state_;
    nn::Mlp action_;
    nn::Mlp head_;
};

}  // namespace qoesched::ddpg
