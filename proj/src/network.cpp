#include "pinn/network.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "pinn/rng.hpp"

namespace pinn {

void NetworkConfig::validate() const {
    if (n_input < 1 || n_input > 3) throw std::invalid_argument("n_input must be in [1,3]");
    if (n_output < 1 || n_output > 3) throw std::invalid_argument("n_output must be in [1,3]");
    if (hidden.empty()) throw std::invalid_argument("hidden layer list must be non-empty");
    for (int h : hidden)
        if (h < 1) throw std::invalid_argument("hidden layer widths must be >= 1");
}

Network::Network(NetworkConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    std::vector<int> widths;
    widths.push_back(cfg_.n_input);
    widths.insert(widths.end(), cfg_.hidden.begin(), cfg_.hidden.end());
    widths.push_back(cfg_.n_output);
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
        weights_.emplace_back(Eigen::MatrixXd::Zero(widths[l + 1], widths[l]));
        biases_.emplace_back(Eigen::VectorXd::Zero(widths[l + 1]));
        n_params_ += widths[l + 1] * widths[l] + widths[l + 1];
    }
}

void Network::get_parameters(Eigen::Ref<Eigen::VectorXd> out) const {
    if (out.size() != n_params_) throw std::invalid_argument("parameter vector size mismatch");
    int k = 0;
    for (int l = 0; l < layer_count(); ++l) {
        const auto& W = weights_[l];
        for (int i = 0; i < W.rows(); ++i)
            for (int j = 0; j < W.cols(); ++j) out[k++] = W(i, j);
        for (int i = 0; i < biases_[l].size(); ++i) out[k++] = biases_[l][i];
    }
}

void Network::set_parameters(const Eigen::Ref<const Eigen::VectorXd>& in) {
    if (in.size() != n_params_) throw std::invalid_argument("parameter vector size mismatch");
    int k = 0;
    for (int l = 0; l < layer_count(); ++l) {
        auto& W = weights_[l];
        for (int i = 0; i < W.rows(); ++i)
            for (int j = 0; j < W.cols(); ++j) W(i, j) = in[k++];
        for (int i = 0; i < biases_[l].size(); ++i) biases_[l][i] = in[k++];
    }
}

Eigen::VectorXd Network::parameters() const {
    Eigen::VectorXd p(n_params_);
    get_parameters(p);
    return p;
}

Eigen::VectorXd Network::raw_forward(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    if (x.size() != cfg_.n_input) throw std::invalid_argument("input dimension mismatch");
    Eigen::VectorXd a = x;
    for (int l = 0; l < layer_count(); ++l) {
        Eigen::VectorXd z = weights_[l] * a + biases_[l];
        if (l + 1 < layer_count())
            a = z.array().tanh().matrix();
        else
            a = std::move(z);
    }
    return a;
}

Network init_network(const NetworkConfig& cfg) {
    Network net(cfg);
    for (int l = 0; l < net.layer_count(); ++l) {
        SplitMix64 rng(split_seed(cfg.seed, static_cast<std::uint64_t>(l)));
        auto& W = net.weight(l);
        const double stddev = 1.0 / std::sqrt(static_cast<double>(W.cols()));
        for (int i = 0; i < W.rows(); ++i)
            for (int j = 0; j < W.cols(); ++j) W(i, j) = stddev * rng.next_normal();
        // biases stay zero
    }
    return net;
}

NetworkSet::NetworkSet(std::vector<Network> nets, HardBCTransform bc)
    : nets_(std::move(nets)), bc_(std::move(bc)) {
    if (nets_.empty()) throw std::invalid_argument("NetworkSet needs at least one network");
    for (const auto& n : nets_) {
        if (n.input_dim() != nets_.front().input_dim())
            throw std::invalid_argument("all networks must share the input dimension");
        offsets_.push_back(n_params_);
        n_params_ += n.parameter_count();
        n_components_ += n.output_dim();
    }
    if (static_cast<int>(bc_.per_component.size()) != n_components_)
        throw std::invalid_argument("hard-BC transform must have one entry per component");
}

std::pair<int, int> NetworkSet::locate(int component) const {
    int c = component;
    for (int i = 0; i < net_count(); ++i) {
        if (c < nets_[i].output_dim()) return {i, c};
        c -= nets_[i].output_dim();
    }
    throw std::out_of_range("component index out of range");
}

void NetworkSet::get_parameters(Eigen::Ref<Eigen::VectorXd> out) const {
    if (out.size() != n_params_) throw std::invalid_argument("parameter vector size mismatch");
    for (int i = 0; i < net_count(); ++i)
        nets_[i].get_parameters(out.segment(offsets_[i], nets_[i].parameter_count()));
}

void NetworkSet::set_parameters(const Eigen::Ref<const Eigen::VectorXd>& in) {
    if (in.size() != n_params_) throw std::invalid_argument("parameter vector size mismatch");
    for (int i = 0; i < net_count(); ++i)
        nets_[i].set_parameters(in.segment(offsets_[i], nets_[i].parameter_count()));
}

Eigen::VectorXd NetworkSet::parameters() const {
    Eigen::VectorXd p(n_params_);
    get_parameters(p);
    return p;
}

Eigen::VectorXd NetworkSet::displacement(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    Eigen::VectorXd u(n_components_);
    int c = 0;
    for (const auto& net : nets_) {
        Eigen::VectorXd raw = net.raw_forward(x);
        for (int k = 0; k < raw.size(); ++k, ++c) {
            if (const auto& t = bc_.per_component[c])
                u[c] = (x[t->axis] - t->anchor) * raw[k];
            else
                u[c] = raw[k];
        }
    }
    return u;
}

Eigen::VectorXd forward(const Network& net, const HardBCTransform& bc,
                        const Eigen::Ref<const Eigen::VectorXd>& x) {
    if (static_cast<int>(bc.per_component.size()) != net.output_dim())
        throw std::invalid_argument("hard-BC transform must have one entry per output");
    Eigen::VectorXd u = net.raw_forward(x);
    for (int c = 0; c < u.size(); ++c)
        if (const auto& t = bc.per_component[c]) u[c] = (x[t->axis] - t->anchor) * u[c];
    return u;
}

namespace {

constexpr const char* kFormatTag = "pinn-network";
constexpr int kFormatVersion = 1;

const char* activation_name(Activation a) {
    switch (a) {
        case Activation::Tanh: return "tanh";
    }
    throw std::logic_error("unknown activation");
}

Activation activation_from_name(const std::string& s) {
    if (s == "tanh") return Activation::Tanh;
    throw std::runtime_error("unknown activation '" + s + "'");
}

const char* init_name(InitScheme s) {
    switch (s) {
        case InitScheme::LecunNormal: return "lecun_normal";
    }
    throw std::logic_error("unknown init scheme");
}

InitScheme init_from_name(const std::string& s) {
    if (s == "lecun_normal") return InitScheme::LecunNormal;
    throw std::runtime_error("unknown init scheme '" + s + "'");
}

}  // namespace

void save_network(const Network& net, std::ostream& os) {
    const auto& cfg = net.config();
    nlohmann::json j;
    j["format"] = kFormatTag;
    j["version"] = kFormatVersion;
    j["config"] = {{"n_input", cfg.n_input},
                   {"n_output", cfg.n_output},
                   {"hidden", cfg.hidden},
                   {"activation", activation_name(cfg.activation)},
                   {"init", init_name(cfg.init)},
                   {"seed", cfg.seed}};
    Eigen::VectorXd p = net.parameters();
    j["parameters"] = std::vector<double>(p.data(), p.data() + p.size());
    os << j.dump(2) << '\n';
}

Network load_network(std::istream& is) {
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("malformed network checkpoint: ") + e.what());
    }
    try {
        if (j.at("format").get<std::string>() != kFormatTag)
            throw std::runtime_error("not a network checkpoint");
        if (j.at("version").get<int>() != kFormatVersion)
            throw std::runtime_error("unsupported checkpoint version");
        const auto& c = j.at("config");
        NetworkConfig cfg;
        cfg.n_input = c.at("n_input").get<int>();
        cfg.n_output = c.at("n_output").get<int>();
        cfg.hidden = c.at("hidden").get<std::vector<int>>();
        cfg.activation = activation_from_name(c.at("activation").get<std::string>());
        cfg.init = init_from_name(c.at("init").get<std::string>());
        cfg.seed = c.at("seed").get<std::uint64_t>();
        Network net(cfg);
        const auto params = j.at("parameters").get<std::vector<double>>();
        if (static_cast<int>(params.size()) != net.parameter_count())
            throw std::runtime_error("checkpoint parameter count does not match config");
        net.set_parameters(Eigen::Map<const Eigen::VectorXd>(params.data(), params.size()));
        return net;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("malformed network checkpoint: ") + e.what());
    }
}

void save_network_file(const Network& net, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    save_network(net, os);
    if (!os) throw std::runtime_error("failed writing '" + path + "'");
}

Network load_network_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open '" + path + "'");
    return load_network(is);
}

}  // namespace pinn
