#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace pinn {

enum class Activation { Tanh };
enum class InitScheme { LecunNormal };

struct NetworkConfig {
    int n_input = 1;
    int n_output = 1;
    std::vector<int> hidden;  // neuron counts, non-empty
    Activation activation = Activation::Tanh;
    InitScheme init = InitScheme::LecunNormal;
    std::uint64_t seed = 0;

    /// Throws std::invalid_argument on empty hidden list or counts < 1.
    void validate() const;

    bool operator==(const NetworkConfig&) const = default;
};

/// Fully connected network. Layer l maps width n_l to n_{l+1} through
/// z = W a + b; hidden layers apply the activation, the output layer is
/// affine. Parameters follow one canonical flat ordering everywhere:
/// layer-major, weights before biases, row-major within a weight block.
class Network {
public:
    explicit Network(NetworkConfig cfg);  // zero-initialized parameters

    const NetworkConfig& config() const { return cfg_; }
    int input_dim() const { return cfg_.n_input; }
    int output_dim() const { return cfg_.n_output; }
    int layer_count() const { return static_cast<int>(weights_.size()); }

    const Eigen::MatrixXd& weight(int l) const { return weights_[l]; }
    const Eigen::VectorXd& bias(int l) const { return biases_[l]; }
    Eigen::MatrixXd& weight(int l) { return weights_[l]; }
    Eigen::VectorXd& bias(int l) { return biases_[l]; }

    int parameter_count() const { return n_params_; }
    void get_parameters(Eigen::Ref<Eigen::VectorXd> out) const;
    void set_parameters(const Eigen::Ref<const Eigen::VectorXd>& in);
    Eigen::VectorXd parameters() const;

    /// Raw forward pass (no boundary-condition transform, no derivatives).
    Eigen::VectorXd raw_forward(const Eigen::Ref<const Eigen::VectorXd>& x) const;

private:
    NetworkConfig cfg_;
    std::vector<Eigen::MatrixXd> weights_;  // out x in
    std::vector<Eigen::VectorXd> biases_;
    int n_params_ = 0;
};

/// LeCun-normal initialization: weights ~ Normal(0, 1/fan_in), biases zero.
/// Each layer draws from its own substream of cfg.seed so that appending
/// layers does not reshuffle earlier ones.
Network init_network(const NetworkConfig& cfg);

/// Output transform u_c = (x[axis] - anchor) * uhat_c pinning u_c = 0 on the
/// hyperplane x[axis] = anchor. Components without an entry pass through.
struct HardBCTransform {
    struct AnchoredAxis {
        int axis = 0;
        double anchor = 0.0;
        bool operator==(const AnchoredAxis&) const = default;
    };
    std::vector<std::optional<AnchoredAxis>> per_component;

    bool empty() const { return per_component.empty(); }
    static HardBCTransform none(int n_components) {
        HardBCTransform t;
        t.per_component.resize(n_components);
        return t;
    }
};

/// Networks predicting the displacement components of one problem: either
/// one single-output net per component (the default architecture) or one
/// shared net emitting all components. `bc` has one entry per global
/// component. Parameters of all nets concatenate net-major into one flat
/// canonical vector.
class NetworkSet {
public:
    NetworkSet(std::vector<Network> nets, HardBCTransform bc);

    int dimension() const { return nets_.front().input_dim(); }
    int component_count() const { return n_components_; }
    int net_count() const { return static_cast<int>(nets_.size()); }
    const Network& net(int i) const { return nets_[i]; }
    Network& net(int i) { return nets_[i]; }
    const HardBCTransform& bc() const { return bc_; }

    /// Global component c is output `locate(c).second` of net `locate(c).first`.
    std::pair<int, int> locate(int component) const;
    /// Offset of net i's parameter block in the flat vector.
    int parameter_offset(int i) const { return offsets_[i]; }

    int parameter_count() const { return n_params_; }
    void get_parameters(Eigen::Ref<Eigen::VectorXd> out) const;
    void set_parameters(const Eigen::Ref<const Eigen::VectorXd>& in);
    Eigen::VectorXd parameters() const;

    /// Displacement at x with the hard-BC transform applied.
    Eigen::VectorXd displacement(const Eigen::Ref<const Eigen::VectorXd>& x) const;

private:
    std::vector<Network> nets_;
    HardBCTransform bc_;
    std::vector<int> offsets_;
    int n_components_ = 0;
    int n_params_ = 0;
};

/// Spec'd single-net forward with hard-BC transform (bc sized to net outputs).
Eigen::VectorXd forward(const Network& net, const HardBCTransform& bc,
                        const Eigen::Ref<const Eigen::VectorXd>& x);

/// Checkpoint serialization: versioned JSON with the config block followed by
/// parameters in canonical order. Round-trips are bit-exact; malformed or
/// truncated input throws std::runtime_error without producing a network.
void save_network(const Network& net, std::ostream& os);
Network load_network(std::istream& is);
void save_network_file(const Network& net, const std::string& path);
Network load_network_file(const std::string& path);

}  // namespace pinn
