#include "qoesched/ddpg/agent.hpp"

#include <fstream>
#include <stdexcept>

namespace qoesched::ddpg {

namespace {

Matrix column(const std::vector<double>& values) {
    return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

std::map<std::string, std::string> read_meta(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open agent metadata: " + path.string());
    }
    std::map<std::string, std::string> meta;
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (eq != std::string::npos) {
            meta[line.substr(0, eq)] = line.substr(eq + 1);
        }
    }
    return meta;
}

const std::string& require_key(const std::map<std::string, std::string>& meta, const std::string& key) {
    const auto it = meta.find(key);
    if (it == meta.end()) {
        throw std::runtime_error("agent metadata missing '" + key + "'");
    }
    return it->second;
}

}  // namespace

NetworkShape AgentConfig::shape() const {
    NetworkShape s;
    s.state_size = num_ues * num_apps * sim::kObservationFeatures;
    s.action_size = num_ues * num_apps;
    s.hidden_width = hidden_width;
    s.actor_hidden_layers = actor_hidden_layers;
    s.critic_state_layers = critic_state_layers;
    s.actor_output = actor_output;
    s.critic_output = critic_output;
    return s;
}

std::pair<int, int> architecture_setting(int setting) {
    switch (setting) {
        case 1: return {2, 1};
        case 2: return {3, 2};
        case 3: return {4, 3};
        case 4: return {5, 4};
        default: throw std::invalid_argument("architecture setting must be 1..4");
    }
}

Agent::Agent(const AgentConfig& config, std::uint64_t seed) : config_(config) {
    Rng rng = make_rng(seed, Stream::nn_init);
    const NetworkShape shape = config_.shape();
    actor_ = ActorNet(shape, rng);
    critic_ = CriticNet(shape, rng);
    target_actor_ = actor_;
    target_critic_ = critic_;
    init_optimizers();
}

Agent::Agent(const AgentConfig& config, ActorNet actor, CriticNet critic, ActorNet target_actor,
             CriticNet target_critic)
    : config_(config),
      actor_(std::move(actor)),
      critic_(std::move(critic)),
      target_actor_(std::move(target_actor)),
      target_critic_(std::move(target_critic)) {
    const NetworkShape shape = config_.shape();
    if (actor_.net().input_size() != shape.state_size || actor_.net().output_size() != shape.action_size ||
        critic_.state_branch().input_size() != shape.state_size ||
        critic_.action_branch().input_size() != shape.action_size) {
        throw std::invalid_argument("agent networks do not match the configured U, K");
    }
    init_optimizers();
}

void Agent::init_optimizers() {
    actor_opt_ = nn::AdamState::for_network(actor_.net());
    critic_state_opt_ = nn::AdamState::for_network(critic_.state_branch());
    critic_action_opt_ = nn::AdamState::for_network(critic_.action_branch());
    critic_head_opt_ = nn::AdamState::for_network(critic_.head());
}

std::vector<double> Agent::actor_output(const sim::Observation& obs) const {
    const Matrix out = actor_.predict(column(obs.features));
    return {out.data(), out.data() + out.size()};
}

sim::Allocation Agent::act(const sim::Observation& obs, ActMode mode, double noise_std, Rng* noise_rng,
                           ActionStats* stats) const {
    std::vector<double> output = actor_output(obs);
    if (mode == ActMode::train && noise_std > 0.0) {
        if (!noise_rng) {
            throw std::invalid_argument("train mode with noise needs a noise generator");
        }
        add_exploration_noise(output, noise_std, *noise_rng);
    }
    if (mode == ActMode::eval_ke) {
        knowledge_embed(output, obs);
    }
    return generate_action(output, config_.num_ues, config_.num_apps, config_.num_prbs, stats);
}

Matrix Agent::gather_states(const ReplayBuffer& buffer, const std::vector<std::size_t>& batch, bool next) const {
    const auto rows = static_cast<Eigen::Index>(config_.shape().state_size);
    Matrix out(rows, static_cast<Eigen::Index>(batch.size()));
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const auto& t = buffer.at(batch[i]);
        const auto& s = next ? t.next_state : t.state;
        if (static_cast<Eigen::Index>(s.size()) != rows) {
            throw std::invalid_argument("stored state has the wrong size");
        }
        out.col(static_cast<Eigen::Index>(i)) = column(s);
    }
    return out;
}

Matrix Agent::gather_actions(const ReplayBuffer& buffer, const std::vector<std::size_t>& batch) const {
    const auto rows = static_cast<Eigen::Index>(config_.shape().action_size);
    Matrix out(rows, static_cast<Eigen::Index>(batch.size()));
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const auto& a = buffer.at(batch[i]).action;
        if (static_cast<Eigen::Index>(a.size()) != rows) {
            throw std::invalid_argument("stored action has the wrong size");
        }
        out.col(static_cast<Eigen::Index>(i)) = column(a);
    }
    return out;
}

Matrix Agent::critic_targets(const ReplayBuffer& buffer, const std::vector<std::size_t>& batch) const {
    const Matrix next_states = gather_states(buffer, batch, true);
    const Matrix next_outputs = target_actor_.predict(next_states);
    Matrix next_actions(next_outputs.rows(), next_outputs.cols());
    for (Eigen::Index i = 0; i < next_outputs.cols(); ++i) {
        const auto alloc = generate_action({next_outputs.col(i).data(), static_cast<std::size_t>(next_outputs.rows())},
                                           config_.num_ues, config_.num_apps, config_.num_prbs);
        next_actions.col(i) = column(normalize_allocation(alloc, config_.num_prbs));
    }
    const Matrix next_q = target_critic_.predict(next_states, next_actions);
    Matrix y(1, static_cast<Eigen::Index>(batch.size()));
    for (std::size_t i = 0; i < batch.size(); ++i) {
        y(0, static_cast<Eigen::Index>(i)) = buffer.at(batch[i]).reward + config_.gamma * next_q(0, static_cast<Eigen::Index>(i));
    }
    return y;
}

double Agent::critic_loss(const ReplayBuffer& buffer, const std::vector<std::size_t>& batch) const {
    const Matrix y = critic_targets(buffer, batch);
    const Matrix q = critic_.predict(gather_states(buffer, batch, false), gather_actions(buffer, batch));
    return (q - y).squaredNorm() / static_cast<double>(batch.size());
}

double Agent::critic_step(const ReplayBuffer& buffer, const std::vector<std::size_t>& batch, double lr) {
    const double m = static_cast<double>(batch.size());
    const Matrix y = critic_targets(buffer, batch);
    const Matrix q = critic_.forward(gather_states(buffer, batch, false), gather_actions(buffer, batch));
    const Matrix diff = q - y;
    const CriticGradients g = critic_.backward(2.0 * diff / m);
    const double critic_lr = lr * config_.critic_lr_scale;
    nn::adam_step(critic_.state_branch(), g.state_branch, critic_state_opt_, critic_lr, -1.0);
    nn::adam_step(critic_.action_branch(), g.action_branch, critic_action_opt_, critic_lr, -1.0);
    nn::adam_step(critic_.head(), g.head, critic_head_opt_, critic_lr, -1.0);
    return diff.squaredNorm() / m;
}

double Agent::actor_step(const ReplayBuffer& buffer, const std::vector<std::size_t>& batch, double lr) {
    const double m = static_cast<double>(batch.size());
    const Matrix states = gather_states(buffer, batch, false);
    const Matrix outputs = actor_.forward(states);

    // The critic sees allocations as fractions of B; O / sum(O) is the differentiable
    // counterpart of generate_action(O) / B.
    const Eigen::RowVectorXd sums = outputs.colwise().sum();
    Matrix actions = Matrix::Zero(outputs.rows(), outputs.cols());
    for (Eigen::Index i = 0; i < outputs.cols(); ++i) {
        if (sums(i) > 0.0) {
            actions.col(i) = outputs.col(i) / sums(i);
        } else {
            actions(0, i) = 1.0;
        }
    }

    const double mean_q = critic_.forward(states, actions).mean();
    const CriticGradients g = critic_.backward(Matrix::Constant(1, outputs.cols(), 1.0 / m));

    Matrix d_outputs = Matrix::Zero(outputs.rows(), outputs.cols());
    for (Eigen::Index i = 0; i < outputs.cols(); ++i) {
        if (sums(i) > 0.0) {
            const double projection = g.action_input.col(i).dot(actions.col(i));
            d_outputs.col(i) = (g.action_input.col(i).array() - projection).matrix() / sums(i);
        }
    }
    const nn::Gradients actor_grads = actor_.backward(d_outputs);
    nn::adam_step(actor_.net(), actor_grads, actor_opt_, lr, +1.0);
    return mean_q;
}

void Agent::soft_update_targets(double tau) {
    target_actor_.net().soft_update(actor_.net(), tau);
    target_critic_.soft_update(critic_, tau);
}

TrainStepStats Agent::train_step(const ReplayBuffer& buffer, const std::vector<std::size_t>& batch, double lr) {
    TrainStepStats stats;
    stats.critic_loss = critic_step(buffer, batch, lr);
    stats.mean_q = actor_step(buffer, batch, lr);
    soft_update_targets(config_.tau);
    return stats;
}

void Agent::save(const std::filesystem::path& dir, const std::map<std::string, std::string>& extra_meta) const {
    std::filesystem::create_directories(dir);
    nn::save_checkpoint(dir / "actor.ckpt", {{"actor", actor_.net()}});
    nn::save_checkpoint(dir / "critic.ckpt", critic_.named());
    nn::save_checkpoint(dir / "target_actor.ckpt", {{"actor", target_actor_.net()}});
    nn::save_checkpoint(dir / "target_critic.ckpt", target_critic_.named());

    std::ofstream meta(dir / "meta.txt", std::ios::trunc);
    meta.precision(17);
    meta << "num_ues=" << config_.num_ues << '\n'
         << "num_apps=" << config_.num_apps << '\n'
         << "num_prbs=" << config_.num_prbs << '\n'
         << "hidden_width=" << config_.hidden_width << '\n'
         << "actor_hidden_layers=" << config_.actor_hidden_layers << '\n'
         << "critic_state_layers=" << config_.critic_state_layers << '\n'
         << "actor_output=" << nn::to_string(config_.actor_output) << '\n'
         << "critic_output=" << nn::to_string(config_.critic_output) << '\n'
         << "gamma=" << config_.gamma << '\n'
         << "tau=" << config_.tau << '\n'
         << "batch_size=" << config_.batch_size << '\n'
         << "critic_lr_scale=" << config_.critic_lr_scale << '\n';
    for (const auto& [key, value] : extra_meta) {
        meta << key << '=' << value << '\n';
    }
}

Agent Agent::load(const std::filesystem::path& dir) {
    const auto meta = read_meta(dir / "meta.txt");
    AgentConfig config;
    config.num_ues = std::stoi(require_key(meta, "num_ues"));
    config.num_apps = std::stoi(require_key(meta, "num_apps"));
    config.num_prbs = std::stoi(require_key(meta, "num_prbs"));
    config.hidden_width = std::stoi(require_key(meta, "hidden_width"));
    config.actor_hidden_layers = std::stoi(require_key(meta, "actor_hidden_layers"));
    config.critic_state_layers = std::stoi(require_key(meta, "critic_state_layers"));
    config.actor_output = nn::activation_from_string(require_key(meta, "actor_output"));
    config.critic_output = nn::activation_from_string(require_key(meta, "critic_output"));
    config.gamma = std::stod(require_key(meta, "gamma"));
    config.tau = std::stod(require_key(meta, "tau"));
    config.batch_size = std::stoul(require_key(meta, "batch_size"));
    config.critic_lr_scale = std::stod(require_key(meta, "critic_lr_scale"));

    ActorNet actor(nn::load(dir / "actor.ckpt"));
    CriticNet critic = CriticNet::from_named(nn::load_checkpoint(dir / "critic.ckpt"));
    ActorNet target_actor(nn::load(dir / "target_actor.ckpt"));
    CriticNet target_critic = CriticNet::from_named(nn::load_checkpoint(dir / "target_critic.ckpt"));
    return Agent(config, std::move(actor), std::move(critic), std::move(target_actor), std::move(target_critic));
}

}  // namespace qoesched::ddpg
