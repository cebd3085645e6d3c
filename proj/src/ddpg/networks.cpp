#include "qoesched/ddpg/networks.hpp"

#include <stdexcept>

namespace qoesched::ddpg {

namespace {

void check_shape(const NetworkShape& shape) {
    if (shape.state_size <= 0 || shape.action_size <= 0 || shape.hidden_width <= 0 || shape.actor_hidden_layers < 1 ||
        shape.critic_state_layers < 1) {
        throw std::invalid_argument("invalid network shape");
    }
}

}  // namespace

ActorNet::ActorNet(const NetworkShape& shape, Rng& rng) {
    check_shape(shape);
    std::vector<nn::LayerSpec> layers;
    int in = shape.state_size;
    for (int i = 0; i < shape.actor_hidden_layers; ++i) {
        layers.push_back({in, shape.hidden_width, nn::Activation::relu});
        in = shape.hidden_width;
    }
    if (shape.actor_output == nn::Activation::identity) {
        throw std::invalid_argument("actor output must be non-negative");
    }
    layers.push_back({in, shape.action_size, shape.actor_output});
    net_ = nn::Mlp::init(layers, rng);
}

CriticNet::CriticNet(const NetworkShape& shape, Rng& rng) {
    check_shape(shape);
    const int w = shape.hidden_width;
    std::vector<nn::LayerSpec> state_layers;
    int in = shape.state_size;
    for (int i = 0; i < shape.critic_state_layers; ++i) {
        state_layers.push_back({in, w, nn::Activation::relu});
        in = w;
    }
    state_ = nn::Mlp::init(state_layers, rng);
    action_ = nn::Mlp::init({{shape.action_size, w, nn::Activation::relu}}, rng);
    head_ = nn::Mlp::init({{2 * w, w, nn::Activation::relu}, {w, 1, shape.critic_output}}, rng);
}

CriticNet::CriticNet(nn::Mlp state_branch, nn::Mlp action_branch, nn::Mlp head)
    : state_(std::move(state_branch)), action_(std::move(action_branch)), head_(std::move(head)) {
    if (head_.input_size() != state_.output_size() + action_.output_size() || head_.output_size() != 1) {
        throw std::invalid_argument("CriticNet: branch and head sizes do not fit");
    }
}

Matrix CriticNet::forward(const Matrix& states, const Matrix& actions) {
    const Matrix s = state_.forward(states);
    const Matrix a = action_.forward(actions);
    Matrix joined(s.rows() + a.rows(), s.cols());
    joined << s, a;
    return head_.forward(joined);
}

Matrix CriticNet::predict(const Matrix& states, const Matrix& actions) const {
    const Matrix s = state_.predict(states);
    const Matrix a = action_.predict(actions);
    Matrix joined(s.rows() + a.rows(), s.cols());
    joined << s, a;
    return head_.predict(joined);
}

CriticGradients CriticNet::backward(const Matrix& upstream) const {
    CriticGradients g;
    g.head = head_.backward(upstream);
    const auto split = state_.output_size();
    g.state_branch = state_.backward(g.head.input.topRows(split));
    g.action_branch = action_.backward(g.head.input.bottomRows(g.head.input.rows() - split));
    g.state_input = g.state_branch.input;
    g.action_input = g.action_branch.input;
    return g;
}

void CriticNet::soft_update(const CriticNet& source, double tau) {
    state_.soft_update(source.state_, tau);
    action_.soft_update(source.action_, tau);
    head_.soft_update(source.head_, tau);
}

std::vector<nn::NamedNet> CriticNet::named() const {
    return {{"critic_state", state_}, {"critic_action", action_}, {"critic_head", head_}};
}

CriticNet CriticNet::from_named(const std::vector<nn::NamedNet>& nets) {
    const nn::Mlp* parts[3] = {nullptr, nullptr, nullptr};
    for (const auto& [name, net] : nets) {
        if (name == "critic_state") parts[0] = &net;
        if (name == "critic_action") parts[1] = &net;
        if (name == "critic_head") parts[2] = &net;
    }
    if (!parts[0] || !parts[1] || !parts[2]) {
        throw std::runtime_error("critic checkpoint is missing a branch");
    }
    return CriticNet(*parts[0], *parts[1], *parts[2]);
}

}  // namespace qoesched::ddpg
