#include <doctest.h>

#include "pinn/autodiff.hpp"
#include "pinn/loss.hpp"
#include "pinn/problems.hpp"
#include "pinn/rng.hpp"
#include "pinn/verify.hpp"

using namespace pinn;

namespace {

/// Test objective with a closed-form gradient: L = sum theta_k^2.
class QuadraticParamLoss final : public LossFunction {
public:
    LossKind kind() const override { return LossKind::Collocation; }
    LossBreakdown evaluate(const NetworkSet& nets) const override {
        LossBreakdown b;
        b.total = nets.parameters().squaredNorm();
        b.governing = b.total;
        return b;
    }
    LossBreakdown evaluate_with_gradient(const NetworkSet& nets,
                                         Eigen::Ref<Eigen::VectorXd> grad) const override {
        grad = 2.0 * nets.parameters();
        return evaluate(nets);
    }
};

Network tanh_neuron_chain() {
    // One hidden tanh neuron, unit weights, zero biases: u = tanh(x).
    NetworkConfig cfg;
    cfg.n_input = 1;
    cfg.n_output = 1;
    cfg.hidden = {1};
    Network net(cfg);
    net.weight(0)(0, 0) = 1.0;
    net.weight(1)(0, 0) = 1.0;
    return net;
}

}  // namespace

TEST_CASE("identity map through the hard-BC product: u = x * 1") {
    NetworkConfig cfg;
    cfg.n_input = 1;
    cfg.n_output = 1;
    cfg.hidden = {5};
    Network net(cfg);          // zero weights
    net.bias(1)[0] = 1.0;      // uhat == 1
    HardBCTransform bc;
    bc.per_component = {HardBCTransform::AnchoredAxis{0, 0.0}};
    const auto pd = eval_with_input_derivatives(net, bc, Eigen::VectorXd::Constant(1, 0.7));
    CHECK(pd.u[0] == 0.7);
    CHECK(pd.du(0, 0) == 1.0);
    CHECK(pd.d2u[0](0, 0) == 0.0);
}

TEST_CASE("single tanh neuron at the origin") {
    const Network net = tanh_neuron_chain();
    const auto pd = eval_with_input_derivatives(net, Eigen::VectorXd::Zero(1));
    CHECK(pd.u[0] == 0.0);
    CHECK(pd.du(0, 0) == 1.0);   // tanh'(0) = 1
    CHECK(pd.d2u[0](0, 0) == 0.0);  // tanh''(0) = 0
}

TEST_CASE("input dimension mismatch is rejected") {
    const Network net = tanh_neuron_chain();
    CHECK_THROWS_AS(eval_with_input_derivatives(net, Eigen::VectorXd::Zero(2)),
                    std::invalid_argument);
}

TEST_CASE("random 3x5 tanh net derivatives match finite differences") {
    NetworkConfig cfg;
    cfg.n_input = 1;
    cfg.n_output = 1;
    cfg.hidden = {5, 5, 5};
    SplitMix64 rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        cfg.seed = rng.next_u64();
        const Network net = init_network(cfg);
        NetworkSet nets({net}, HardBCTransform::none(1));
        const Eigen::VectorXd x = Eigen::VectorXd::Constant(1, rng.next_uniform());
        const auto ad = eval_with_input_derivatives(nets, x);
        const auto fd = fd_input_derivatives(nets, x);
        CHECK(max_relative_error(ad.du.reshaped(), fd.du.reshaped()) < 1e-5);
        CHECK(max_relative_error(ad.d2u[0].reshaped(), fd.d2u[0].reshaped()) < 1e-5);
    }
}

TEST_CASE("Hessians are symmetric bitwise for every output") {
    SplitMix64 rng(555);
    NetworkConfig cfg;
    cfg.n_input = 3;
    cfg.n_output = 3;
    cfg.hidden = {10, 10};
    for (int trial = 0; trial < 20; ++trial) {
        cfg.seed = rng.next_u64();
        const Network net = init_network(cfg);
        Eigen::Vector3d x(rng.next_normal(), rng.next_normal(), rng.next_normal());
        const auto pd = eval_with_input_derivatives(net, x);
        for (const auto& H : pd.d2u)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) CHECK(H(i, j) == H(j, i));
    }
}

TEST_CASE("zero hidden weights: output equals the final bias, derivatives vanish") {
    NetworkConfig cfg;
    cfg.n_input = 2;
    cfg.n_output = 1;
    cfg.hidden = {4, 4};
    Network net(cfg);
    SplitMix64 rng(8);
    for (int l = 0; l < net.layer_count(); ++l)
        for (int i = 0; i < net.bias(l).size(); ++i) net.bias(l)[i] = rng.next_normal();
    const auto pd = eval_with_input_derivatives(net, Eigen::Vector2d(0.3, -0.8));
    CHECK(pd.u[0] == net.bias(2)[0]);
    CHECK(pd.du.cwiseAbs().maxCoeff() == 0.0);
    CHECK(pd.d2u[0].cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("product rule through the hard-BC transform holds exactly") {
    NetworkConfig cfg;
    cfg.n_input = 1;
    cfg.n_output = 1;
    cfg.hidden = {5, 5};
    cfg.seed = 31337;
    const Network net = init_network(cfg);  // frozen uhat network
    HardBCTransform bc;
    bc.per_component = {HardBCTransform::AnchoredAxis{0, 0.0}};
    SplitMix64 rng(17);
    for (int trial = 0; trial < 25; ++trial) {
        const Eigen::VectorXd x = Eigen::VectorXd::Constant(1, 2.0 * rng.next_uniform() - 0.5);
        const auto raw = eval_with_input_derivatives(net, x);
        const auto bcd = eval_with_input_derivatives(net, bc, x);
        // u = x uhat, du = uhat + x duhat, d2u = 2 duhat + x d2uhat
        CHECK(bcd.u[0] == x[0] * raw.u[0]);
        CHECK(bcd.du(0, 0) == raw.u[0] + x[0] * raw.du(0, 0));
        CHECK(bcd.d2u[0](0, 0) ==
              doctest::Approx(2.0 * raw.du(0, 0) + x[0] * raw.d2u[0](0, 0)).epsilon(1e-15));
    }
}

TEST_CASE("loss = sum theta^2 has gradient 2 theta") {
    const ProblemSpec rod = build_rod_1d(11);
    NetworkSet nets = make_networks(rod, 5);
    QuadraticParamLoss loss;
    auto [value, grad] = loss_parameter_gradient(loss, nets);
    CHECK(value == doctest::Approx(nets.parameters().squaredNorm()));
    CHECK((grad - 2.0 * nets.parameters()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("collocation 1D gradient matches finite differences at random init") {
    const ProblemSpec rod = build_rod_1d(11);
    CollocationLoss loss(rod.samples, rod.material, rod.body_force);
    SplitMix64 rng(404);
    for (int trial = 0; trial < 5; ++trial) {
        NetworkSet nets = make_networks(rod, rng.next_u64());
        auto [value, ad] = loss_parameter_gradient(loss, nets);
        const Eigen::VectorXd fd = fd_parameter_gradient(loss, nets);
        CHECK(value == loss.evaluate(nets).total);
        CHECK(max_relative_error(ad, fd) < 1e-5);
    }
}

TEST_CASE("energy 1D gradient matches finite differences at random init") {
    const ProblemSpec rod = build_rod_1d(11);
    EnergyLoss loss(rod.samples, rod.material);
    SplitMix64 rng(405);
    for (int trial = 0; trial < 5; ++trial) {
        NetworkSet nets = make_networks(rod, rng.next_u64());
        auto [value, ad] = loss_parameter_gradient(loss, nets);
        const Eigen::VectorXd fd = fd_parameter_gradient(loss, nets);
        CHECK(max_relative_error(ad, fd) < 1e-5);
    }
}

TEST_CASE("gradients match finite differences on the 2D and 3D benchmarks") {
    // Reduced draw count here; the acceptance suite runs the full 20 draws.
    for (const auto& outcome : run_verification_suite(0xB10C5EEDULL, 3)) {
        INFO(outcome.name, " worst ", outcome.worst);
        CHECK(outcome.pass);
    }
}
