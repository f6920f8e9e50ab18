#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <vector>

#include "pinn/dual.hpp"
#include "pinn/network.hpp"

namespace pinn {

/// Displacement value and exact spatial derivatives at one point:
/// du(c, b) = d u_c / d x_b, d2u[c](b, g) = d^2 u_c / d x_b d x_g.
/// The Hessians are exactly symmetric.
struct PointDerivatives {
    Eigen::VectorXd u;                  // m
    Eigen::MatrixXd du;                 // m x d
    std::vector<Eigen::MatrixXd> d2u;   // m entries, each d x d
};

/// Adjoint of b in the product a*b: maps d(loss)/d(product components) to
/// d(loss)/d(b components), holding a fixed. Valid for any adjoint matrix,
/// symmetric or not.
template <int D>
Dual2<D> product_adjoint(const Dual2<D>& adj, const Dual2<D>& a) {
    Dual2<D> r;
    r.val = a.val * adj.val + a.grad.dot(adj.grad) + a.hess.cwiseProduct(adj.hess).sum();
    r.grad = a.val * adj.grad + (adj.hess + adj.hess.transpose()) * a.grad;
    r.hess = a.val * adj.hess;
    return r;
}

/// The hard-BC factor (x[axis] - anchor) as a dual: unit slope, no curvature.
template <int D>
Dual2<D> bc_factor(const HardBCTransform::AnchoredAxis& t, const Eigen::Matrix<double, D, 1>& x) {
    return Dual2<D>::variable(x[t.axis] - t.anchor, t.axis);
}

/// Records one forward pass of a network on second-order duals and plays it
/// back in reverse to accumulate exact loss gradients with respect to the
/// network parameters. One instance is a reusable per-thread workspace.
template <int D>
class NetworkTrace {
public:
    using DualD = Dual2<D>;
    using VecD = Eigen::Matrix<double, D, 1>;

    /// Forward pass on duals seeded as independent variables; records every
    /// layer's inputs and pre-activations. Returns the raw outputs (no
    /// hard-BC transform).
    const std::vector<DualD>& forward(const Network& net, const VecD& x) {
        const int L = net.layer_count();
        act_.resize(L);
        pre_.resize(L);
        act_[0].resize(D);
        for (int j = 0; j < D; ++j) act_[0][j] = DualD::variable(x[j], j);
        for (int l = 0; l < L; ++l) {
            const auto& W = net.weight(l);
            const auto& b = net.bias(l);
            const auto& a = act_[l];
            auto& z = pre_[l];
            z.assign(static_cast<std::size_t>(W.rows()), DualD());
            for (int i = 0; i < W.rows(); ++i) z[i].val = b[i];
            for (int j = 0; j < W.cols(); ++j) {
                const DualD& aj = a[j];
                for (int i = 0; i < W.rows(); ++i) {
                    const double w = W(i, j);
                    DualD& zi = z[i];
                    zi.val += w * aj.val;
                    zi.grad += w * aj.grad;
                    zi.hess += w * aj.hess;
                }
            }
            if (l + 1 < L) {
                auto& out = act_[l + 1];
                out.resize(z.size());
                for (std::size_t i = 0; i < z.size(); ++i) out[i] = tanh(z[i]);
            }
        }
        return pre_.back();
    }

    const std::vector<DualD>& outputs() const { return pre_.back(); }

    /// Reverse pass: given d(loss)/d(raw output components) shaped like the
    /// outputs themselves, accumulate d(loss)/d(theta) into `grad` (the
    /// network's canonical parameter ordering). Must follow a forward().
    void backward(const Network& net, const std::vector<DualD>& out_adjoints,
                  Eigen::Ref<Eigen::VectorXd> grad) {
        const int L = net.layer_count();
        adj_ = out_adjoints;
        if (grad.size() != net.parameter_count())
            throw std::invalid_argument("gradient buffer size mismatch");
        // Walk layers backwards; offset bookkeeping is easier forward, so
        // precompute block offsets first.
        block_offsets_.resize(L);
        int off = 0;
        for (int l = 0; l < L; ++l) {
            block_offsets_[l] = off;
            off += static_cast<int>(net.weight(l).size() + net.bias(l).size());
        }
        for (int l = L - 1; l >= 0; --l) {
            const auto& W = net.weight(l);
            const auto& a = act_[l];
            const int rows = static_cast<int>(W.rows());
            const int cols = static_cast<int>(W.cols());
            double* wgrad = grad.data() + block_offsets_[l];
            double* bgrad = wgrad + rows * cols;
            // dL/dW(i,j) = <zbar_i, a_j> over all dual components; dL/db_i = zbar_i.val.
            for (int i = 0; i < rows; ++i) {
                const DualD& zb = adj_[i];
                double* wrow = wgrad + i * cols;
                for (int j = 0; j < cols; ++j) {
                    wrow[j] += zb.val * a[j].val + zb.grad.dot(a[j].grad) +
                               zb.hess.cwiseProduct(a[j].hess).sum();
                }
                bgrad[i] += zb.val;
            }
            if (l == 0) break;
            // abar_j = sum_i W(i,j) zbar_i, then pull back through tanh.
            prev_adj_.assign(static_cast<std::size_t>(cols), DualD());
            for (int j = 0; j < cols; ++j) {
                DualD& ab = prev_adj_[j];
                for (int i = 0; i < rows; ++i) {
                    const double w = W(i, j);
                    ab.val += w * adj_[i].val;
                    ab.grad += w * adj_[i].grad;
                    ab.hess += w * adj_[i].hess;
                }
            }
            // act_[l] = tanh(pre_[l-1]): reverse the elementwise chain rule.
            const auto& z = pre_[l - 1];
            for (int j = 0; j < cols; ++j) {
                const double t = act_[l][j].val;
                const double t1 = 1.0 - t * t;             // tanh'
                const double t2 = -2.0 * t * t1;           // tanh''
                const double t3 = -2.0 * t1 * (1.0 - 3.0 * t * t);  // tanh'''
                const DualD& ab = prev_adj_[j];
                const VecD& g = z[j].grad;
                DualD zb;
                zb.val = ab.val * t1 + t2 * ab.grad.dot(g) +
                         t3 * g.dot(ab.hess * g) + t2 * ab.hess.cwiseProduct(z[j].hess).sum();
                zb.grad = t1 * ab.grad + t2 * ((ab.hess + ab.hess.transpose()) * g);
                zb.hess = t1 * ab.hess;
                prev_adj_[j] = zb;
            }
            adj_.swap(prev_adj_);
        }
    }

private:
    std::vector<std::vector<DualD>> act_;  // inputs to each layer (act_[0] = x duals)
    std::vector<std::vector<DualD>> pre_;  // pre-activations per layer
    std::vector<DualD> adj_;
    std::vector<DualD> prev_adj_;
    std::vector<int> block_offsets_;
};

/// Apply the hard-BC transform to raw output duals in place:
/// u_c = (x[axis_c] - anchor_c) * uhat_c for components that carry one.
template <int D>
void apply_bc_duals(const HardBCTransform& bc, int first_component,
                    const Eigen::Matrix<double, D, 1>& x, std::vector<Dual2<D>>& outs) {
    for (std::size_t k = 0; k < outs.size(); ++k) {
        const auto& t = bc.per_component[first_component + static_cast<int>(k)];
        if (t) outs[k] = Dual2<D>::variable(x[t->axis] - t->anchor, t->axis) * outs[k];
    }
}

/// Exact value, gradient, and Hessian of every raw network output with
/// respect to the spatial input. Throws std::invalid_argument if x does not
/// match the network input width.
PointDerivatives eval_with_input_derivatives(const Network& net,
                                             const Eigen::Ref<const Eigen::VectorXd>& x);

/// Same, with the hard-BC output transform differentiated through.
PointDerivatives eval_with_input_derivatives(const Network& net, const HardBCTransform& bc,
                                             const Eigen::Ref<const Eigen::VectorXd>& x);

/// Same for a network set (its transform applied), components concatenated.
PointDerivatives eval_with_input_derivatives(const NetworkSet& nets,
                                             const Eigen::Ref<const Eigen::VectorXd>& x);

/// Flat d(loss)/d(parameters) in the canonical ordering.
struct ParamGradient {
    Eigen::VectorXd flat;
};

}  // namespace pinn
