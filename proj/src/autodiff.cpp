#include "pinn/autodiff.hpp"

namespace pinn {

namespace {

template <int D>
PointDerivatives collect(const std::vector<Dual2<D>>& outs, PointDerivatives&& acc) {
    const int base = static_cast<int>(acc.d2u.size());
    acc.u.conservativeResize(base + static_cast<int>(outs.size()));
    acc.du.conservativeResize(base + static_cast<int>(outs.size()), D);
    for (std::size_t k = 0; k < outs.size(); ++k) {
        acc.u[base + static_cast<int>(k)] = outs[k].val;
        acc.du.row(base + static_cast<int>(k)) = outs[k].grad.transpose();
        acc.d2u.push_back(outs[k].hess);
    }
    return std::move(acc);
}

template <int D>
PointDerivatives eval_net(const Network& net, const HardBCTransform* bc, int first_component,
                          const Eigen::Ref<const Eigen::VectorXd>& x) {
    Eigen::Matrix<double, D, 1> xf = x;
    NetworkTrace<D> trace;
    std::vector<Dual2<D>> outs = trace.forward(net, xf);
    if (bc && !bc->empty()) apply_bc_duals<D>(*bc, first_component, xf, outs);
    PointDerivatives r;
    r.u.resize(0);
    r.du.resize(0, D);
    return collect<D>(outs, std::move(r));
}

template <int D>
PointDerivatives eval_set(const NetworkSet& nets, const Eigen::Ref<const Eigen::VectorXd>& x) {
    Eigen::Matrix<double, D, 1> xf = x;
    NetworkTrace<D> trace;
    PointDerivatives r;
    r.u.resize(0);
    r.du.resize(0, D);
    int c = 0;
    for (int i = 0; i < nets.net_count(); ++i) {
        std::vector<Dual2<D>> outs = trace.forward(nets.net(i), xf);
        apply_bc_duals<D>(nets.bc(), c, xf, outs);
        c += static_cast<int>(outs.size());
        r = collect<D>(outs, std::move(r));
    }
    return r;
}

template <typename F>
auto dispatch_dim(int d, F&& f) {
    switch (d) {
        case 1: return f(std::integral_constant<int, 1>{});
        case 2: return f(std::integral_constant<int, 2>{});
        case 3: return f(std::integral_constant<int, 3>{});
        default: throw std::invalid_argument("spatial dimension must be 1, 2 or 3");
    }
}

}  // namespace

PointDerivatives eval_with_input_derivatives(const Network& net,
                                             const Eigen::Ref<const Eigen::VectorXd>& x) {
    if (x.size() != net.input_dim())
        throw std::invalid_argument("input point dimension does not match network input width");
    return dispatch_dim(net.input_dim(), [&](auto dim) {
        return eval_net<decltype(dim)::value>(net, nullptr, 0, x);
    });
}

PointDerivatives eval_with_input_derivatives(const Network& net, const HardBCTransform& bc,
                                             const Eigen::Ref<const Eigen::VectorXd>& x) {
    if (x.size() != net.input_dim())
        throw std::invalid_argument("input point dimension does not match network input width");
    if (static_cast<int>(bc.per_component.size()) != net.output_dim())
        throw std::invalid_argument("hard-BC transform must have one entry per output");
    return dispatch_dim(net.input_dim(), [&](auto dim) {
        return eval_net<decltype(dim)::value>(net, &bc, 0, x);
    });
}

PointDerivatives eval_with_input_derivatives(const NetworkSet& nets,
                                             const Eigen::Ref<const Eigen::VectorXd>& x) {
    if (x.size() != nets.dimension())
        throw std::invalid_argument("input point dimension does not match network input width");
    return dispatch_dim(nets.dimension(), [&](auto dim) {
        return eval_set<decltype(dim)::value>(nets, x);
    });
}

}  // namespace pinn
