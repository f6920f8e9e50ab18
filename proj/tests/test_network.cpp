#include <doctest.h>

#include <sstream>

#include "pinn/network.hpp"
#include "pinn/rng.hpp"

using namespace pinn;

namespace {

NetworkConfig rod_cfg(std::uint64_t seed = 0) {
    NetworkConfig cfg;
    cfg.n_input = 1;
    cfg.n_output = 1;
    cfg.hidden = {5, 5, 5};
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("parameter count follows the shape chain") {
    // (1*5+5) + (5*5+5) + (5*5+5) + (5*1+1) = 76
    CHECK(Network(rod_cfg()).parameter_count() == 76);
}

TEST_CASE("initialization is deterministic per seed") {
    const Network a = init_network(rod_cfg(42));
    const Network b = init_network(rod_cfg(42));
    const Network c = init_network(rod_cfg(43));
    CHECK(a.parameters() == b.parameters());
    CHECK(a.parameters() != c.parameters());
}

TEST_CASE("biases start at zero") {
    const Network net = init_network(rod_cfg(5));
    for (int l = 0; l < net.layer_count(); ++l) CHECK(net.bias(l).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("appending a layer keeps the earlier draws") {
    NetworkConfig small = rod_cfg(9);
    NetworkConfig big = small;
    big.hidden.push_back(5);
    const Network a = init_network(small);
    const Network b = init_network(big);
    for (int l = 0; l < 3; ++l) CHECK(a.weight(l) == b.weight(l));
}

TEST_CASE("LeCun draws have variance 1/fan_in") {
    NetworkConfig cfg;
    cfg.n_input = 3;
    cfg.n_output = 1;
    cfg.hidden = {20};
    // Aggregate fan_in=20 weights over many seeds to reach 10^4 draws.
    double sum = 0.0, sum2 = 0.0;
    int n = 0;
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        cfg.seed = seed;
        const Network net = init_network(cfg);
        const auto& W = net.weight(1);  // 1 x 20 output block, fan_in 20
        for (int j = 0; j < W.cols(); ++j) {
            sum += W(0, j);
            sum2 += W(0, j) * W(0, j);
            ++n;
        }
    }
    REQUIRE(n == 10000);
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK(var == doctest::Approx(0.05).epsilon(0.10));
}

TEST_CASE("hard-BC outputs vanish identically on their anchor planes") {
    SplitMix64 rng(123);
    NetworkConfig cfg;
    cfg.n_input = 2;
    cfg.n_output = 1;
    cfg.hidden = {8, 8};
    HardBCTransform bc;
    bc.per_component = {HardBCTransform::AnchoredAxis{0, 0.0}};
    for (int trial = 0; trial < 100; ++trial) {
        cfg.seed = rng.next_u64();
        const Network net = init_network(cfg);
        Eigen::Vector2d x(0.0, rng.next_uniform());
        CHECK(forward(net, bc, x)[0] == 0.0);
    }
}

TEST_CASE("2D plate transforms pin U on x=0 and V on y=0") {
    SplitMix64 rng(321);
    HardBCTransform bc;
    bc.per_component = {HardBCTransform::AnchoredAxis{0, 0.0},
                        HardBCTransform::AnchoredAxis{1, 0.0}};
    NetworkConfig cfg;
    cfg.n_input = 2;
    cfg.n_output = 2;
    cfg.hidden = {10};
    for (int trial = 0; trial < 100; ++trial) {
        cfg.seed = rng.next_u64();
        const Network net = init_network(cfg);
        Eigen::Vector2d on_x0(0.0, rng.next_uniform());
        Eigen::Vector2d on_y0(rng.next_uniform(), 0.0);
        CHECK(forward(net, bc, on_x0)[0] == 0.0);
        CHECK(forward(net, bc, on_y0)[1] == 0.0);
    }
}

TEST_CASE("3D transforms hold simultaneously") {
    SplitMix64 rng(99);
    HardBCTransform bc;
    bc.per_component = {HardBCTransform::AnchoredAxis{0, 0.0},
                        HardBCTransform::AnchoredAxis{1, 0.0},
                        HardBCTransform::AnchoredAxis{2, 0.0}};
    NetworkConfig cfg;
    cfg.n_input = 3;
    cfg.n_output = 3;
    cfg.hidden = {6, 6};
    for (int trial = 0; trial < 50; ++trial) {
        cfg.seed = rng.next_u64();
        const Network net = init_network(cfg);
        const double y = rng.next_uniform(), z = rng.next_uniform(), x = rng.next_uniform();
        CHECK(forward(net, bc, Eigen::Vector3d(0, y, z))[0] == 0.0);
        CHECK(forward(net, bc, Eigen::Vector3d(x, 0, z))[1] == 0.0);
        CHECK(forward(net, bc, Eigen::Vector3d(x, y, 0))[2] == 0.0);
    }
}

TEST_CASE("zero-parameter network maps everything to zero") {
    const Network net(rod_cfg());  // all weights and biases zero
    HardBCTransform bc;
    bc.per_component = {HardBCTransform::AnchoredAxis{0, 0.0}};
    CHECK(forward(net, bc, Eigen::VectorXd::Constant(1, 0.37))[0] == 0.0);
    CHECK(net.raw_forward(Eigen::VectorXd::Constant(1, 0.37))[0] == 0.0);
}

TEST_CASE("checkpoint round-trip is bit-exact") {
    const Network net = init_network(rod_cfg(777));
    std::stringstream ss;
    save_network(net, ss);
    const Network back = load_network(ss);
    CHECK(back.config() == net.config());
    CHECK(back.parameters() == net.parameters());
}

TEST_CASE("round-trip reproduces forward values at 100 random points") {
    NetworkConfig cfg;
    cfg.n_input = 2;
    cfg.n_output = 2;
    cfg.hidden = {20, 20, 20};
    cfg.seed = 4242;
    const Network net = init_network(cfg);
    std::stringstream ss;
    save_network(net, ss);
    const Network back = load_network(ss);
    SplitMix64 rng(1);
    for (int i = 0; i < 100; ++i) {
        Eigen::Vector2d x(rng.next_uniform(), rng.next_uniform());
        CHECK(net.raw_forward(x) == back.raw_forward(x));
    }
}

TEST_CASE("truncated checkpoint stream is rejected") {
    const Network net = init_network(rod_cfg(7));
    std::stringstream ss;
    save_network(net, ss);
    const std::string full = ss.str();
    std::stringstream truncated(full.substr(0, full.size() / 2));
    CHECK_THROWS_AS(load_network(truncated), std::runtime_error);
    std::stringstream garbage("not json at all");
    CHECK_THROWS_AS(load_network(garbage), std::runtime_error);
}

TEST_CASE("config validation rejects bad shapes") {
    NetworkConfig cfg;
    cfg.hidden = {};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.hidden = {0};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.hidden = {5};
    cfg.n_input = 4;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("network set concatenates parameters net-major") {
    NetworkConfig cfg;
    cfg.n_input = 2;
    cfg.n_output = 1;
    cfg.hidden = {4};
    cfg.seed = 1;
    std::vector<Network> nets{init_network(cfg), init_network([&] {
                                  auto c = cfg;
                                  c.seed = 2;
                                  return c;
                              }())};
    HardBCTransform bc = HardBCTransform::none(2);
    NetworkSet set(std::move(nets), bc);
    CHECK(set.parameter_count() == 2 * set.net(0).parameter_count());
    Eigen::VectorXd p = set.parameters();
    CHECK(p.segment(0, set.net(0).parameter_count()) == set.net(0).parameters());
    CHECK(p.segment(set.parameter_offset(1), set.net(1).parameter_count()) ==
          set.net(1).parameters());
    CHECK(set.locate(0) == std::pair<int, int>{0, 0});
    CHECK(set.locate(1) == std::pair<int, int>{1, 0});
}
