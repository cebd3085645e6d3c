#include "qoesched/nn/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qoesched::nn {

namespace {

constexpr std::string_view kMagic = "qoesched-nn";
constexpr int kVersion = 1;

void write_double(std::ostream& out, double value) {
    const auto bits = std::bit_cast<std::uint64_t>(value);
    std::array<char, 8> bytes{};
    for (int i = 0; i < 8; ++i) {
        bytes[static_cast<std::size_t>(i)] = static_cast<char>((bits >> (8 * i)) & 0xffu);
    }
    out.write(bytes.data(), bytes.size());
}

double read_double(std::istream& in) {
    std::array<unsigned char, 8> bytes{};
    in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
    if (!in) {
        throw std::runtime_error("checkpoint payload truncated");
    }
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) {
        bits |= static_cast<std::uint64_t>(bytes[static_cast<std::size_t>(i)]) << (8 * i);
    }
    return std::bit_cast<double>(bits);
}

std::istringstream next_line(std::istream& in, std::string_view expected) {
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("checkpoint header truncated, expected '" + std::string(expected) + "'");
    }
    std::istringstream fields(line);
    std::string key;
    fields >> key;
    if (key != expected) {
        throw std::runtime_error("checkpoint header: expected '" + std::string(expected) + "', got '" + key + "'");
    }
    return fields;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const std::vector<NamedNet>& nets) {
    std::ostringstream header;
    std::size_t payload = 0;
    header << kMagic << ' ' << kVersion << '\n' << "nets " << nets.size() << '\n';
    for (const auto& [name, net] : nets) {
        if (name.empty() || name.find_first_of(" \n") != std::string::npos) {
            throw std::invalid_argument("checkpoint net names must be non-empty without whitespace");
        }
        header << "net " << name << ' ' << net.layers().size() << '\n';
        for (const auto& layer : net.layers()) {
            header << "layer " << layer.inputs() << ' ' << layer.outputs() << ' ' << to_string(layer.activation) << '\n';
        }
        payload += net.parameter_count();
    }
    header << "payload " << payload << " f64le\n";

    const auto tmp = std::filesystem::path(path.string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write checkpoint: " + tmp.string());
        }
        out << header.str();
        for (const auto& named : nets) {
            for (const auto& layer : named.second.layers()) {
                for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
                    for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) {
                        write_double(out, layer.weight(r, c));
                    }
                }
                for (Eigen::Index r = 0; r < layer.bias.size(); ++r) {
                    write_double(out, layer.bias(r));
                }
            }
        }
        if (!out) {
            throw std::runtime_error("failed writing checkpoint: " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

std::vector<NamedNet> load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open checkpoint: " + path.string());
    }
    int version = 0;
    next_line(in, kMagic) >> version;
    if (version != kVersion) {
        throw std::runtime_error("unsupported checkpoint version " + std::to_string(version));
    }
    std::size_t count = 0;
    next_line(in, "nets") >> count;

    struct Pending {
        std::string name;
        std::vector<LayerSpec> layers;
    };
    std::vector<Pending> pending(count);
    std::size_t expected = 0;
    for (auto& p : pending) {
        std::size_t layer_count = 0;
        next_line(in, "net") >> p.name >> layer_count;
        for (std::size_t i = 0; i < layer_count; ++i) {
            LayerSpec spec;
            std::string act;
            next_line(in, "layer") >> spec.inputs >> spec.outputs >> act;
            if (spec.inputs <= 0 || spec.outputs <= 0) {
                throw std::runtime_error("checkpoint layer with non-positive size");
            }
            spec.activation = activation_from_string(act);
            expected += static_cast<std::size_t>(spec.inputs + 1) * static_cast<std::size_t>(spec.outputs);
            p.layers.push_back(spec);
        }
    }
    std::size_t payload = 0;
    std::string encoding;
    next_line(in, "payload") >> payload >> encoding;
    if (encoding != "f64le" || payload != expected) {
        throw std::runtime_error("checkpoint payload does not match its header");
    }

    std::vector<NamedNet> nets;
    for (const auto& p : pending) {
        std::vector<DenseLayer> layers;
        for (const auto& spec : p.layers) {
            DenseLayer layer;
            layer.activation = spec.activation;
            layer.weight.resize(spec.outputs, spec.inputs);
            layer.bias.resize(spec.outputs);
            for (int r = 0; r < spec.outputs; ++r) {
                for (int c = 0; c < spec.inputs; ++c) {
                    layer.weight(r, c) = read_double(in);
                }
            }
            for (int r = 0; r < spec.outputs; ++r) {
                layer.bias(r) = read_double(in);
            }
            layers.push_back(std::move(layer));
        }
        nets.emplace_back(p.name, Mlp(std::move(layers)));
    }
    return nets;
}

void save(const Mlp& net, const std::filesystem::path& path) { save_checkpoint(path, {{"net", net}}); }

Mlp load(const std::filesystem::path& path) {
    auto nets = load_checkpoint(path);
    if (nets.size() != 1) {
        throw std::runtime_error("expected a single-network checkpoint: " + path.string());
    }
    return std::move(nets.front().second);
}

}  // namespace qoesched::nn
