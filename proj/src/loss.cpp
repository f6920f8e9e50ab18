#include "pinn/loss.hpp"

#include <array>
#include <cmath>
#include <thread>

#include "pinn/autodiff.hpp"

namespace pinn {

namespace {

void validate_samples(const SamplePointSet& s) {
    if (s.interior.rows() == 0)
        throw std::invalid_argument("loss requires a non-empty interior sample set");
    if (s.weights.size() != s.interior.rows())
        throw std::invalid_argument("interior weights must match the point count");
    for (const auto& p : s.patches) {
        if (std::abs(p.normal.norm() - 1.0) > 1e-12)
            throw std::invalid_argument("patch '" + p.name + "' normal must have unit length");
        if (p.tractions.rows() != p.points.rows())
            throw std::invalid_argument("patch '" + p.name + "' traction row count mismatch");
    }
}

/// One evaluation pass over the sample set at a fixed spatial dimension.
/// Interior points are split into contiguous chunks (one per thread) whose
/// partial sums and gradients are combined in chunk order, so results are
/// reproducible bit-for-bit for a given thread count. Boundary patches are
/// processed sequentially afterwards.
template <int D>
class LossKernel {
public:
    using VecD = Eigen::Matrix<double, D, 1>;
    using MatD = Eigen::Matrix<double, D, D>;

    LossKernel(LossKind kind, const SamplePointSet& samples, const Material& mat,
               const Eigen::VectorXd& body_force, const NetworkSet& nets, int threads)
        : kind_(kind), s_(samples), mat_(mat), nets_(nets), threads_(threads) {
        if (nets.dimension() != D)
            throw std::invalid_argument("network input width does not match the sample dimension");
        if (nets.component_count() != D)
            throw std::invalid_argument("need one displacement component per spatial dimension");
        f_ = body_force.size() ? VecD(body_force) : VecD::Zero();
        n_ = s_.interior_count();
        mt_ = s_.traction_point_count();
    }

    LossBreakdown run(Eigen::VectorXd* grad_out) {
        if (grad_out) grad_out->setZero(nets_.parameter_count());

        const int chunks = std::max(1, std::min(threads_, n_));
        std::vector<Worker> workers(static_cast<std::size_t>(chunks));
        for (auto& w : workers) init_worker(w, grad_out != nullptr);

        auto run_chunk = [&](int c) {
            const int lo = static_cast<int>(static_cast<long long>(n_) * c / chunks);
            const int hi = static_cast<int>(static_cast<long long>(n_) * (c + 1) / chunks);
            Worker& w = workers[static_cast<std::size_t>(c)];
            for (int i = lo; i < hi; ++i) process_interior(w, i);
        };
        if (chunks == 1) {
            run_chunk(0);
        } else {
            std::vector<std::thread> pool;
            for (int c = 1; c < chunks; ++c) pool.emplace_back(run_chunk, c);
            run_chunk(0);
            for (auto& t : pool) t.join();
        }

        double interior_sum = 0.0;
        for (auto& w : workers) interior_sum += w.acc;
        if (grad_out)
            for (auto& w : workers) *grad_out += w.grad;

        // Boundary terms, sequential on the caller's thread.
        Worker& w0 = workers.front();
        double boundary_sum = 0.0;
        for (const auto& p : s_.patches) {
            if (kind_ == LossKind::Energy && !p.in_energy) continue;
            for (int j = 0; j < p.points.rows(); ++j)
                boundary_sum += process_boundary(w0, p, j, grad_out);
        }
        if (grad_out && w0.boundary_grad.size()) *grad_out += w0.boundary_grad;

        LossBreakdown b;
        b.kind = kind_;
        if (kind_ == LossKind::Collocation) {
            b.governing = interior_sum / n_;
            b.traction = mt_ > 0 ? boundary_sum / mt_ : 0.0;
            b.total = b.governing + b.traction;
        } else {
            b.internal_energy = interior_sum;
            b.external_work = boundary_sum;
            b.total = b.internal_energy - b.external_work;
        }
        return b;
    }

private:
    struct Worker {
        std::vector<NetworkTrace<D>> traces;           // one per network
        std::vector<Dual2<D>> u;                       // per component, BC applied
        std::vector<Dual2<D>> adj;                     // per component adjoint seed
        std::vector<std::vector<Dual2<D>>> raw_adj;    // per net raw-output adjoints
        Eigen::VectorXd grad;                          // interior partial gradient
        Eigen::VectorXd boundary_grad;                 // boundary gradient (worker 0 only)
        double acc = 0.0;
    };

    void init_worker(Worker& w, bool with_grad) {
        const int nn = nets_.net_count();
        w.traces.resize(static_cast<std::size_t>(nn));
        w.u.resize(static_cast<std::size_t>(D));
        w.adj.resize(static_cast<std::size_t>(D));
        w.raw_adj.resize(static_cast<std::size_t>(nn));
        for (int k = 0; k < nn; ++k)
            w.raw_adj[static_cast<std::size_t>(k)].resize(
                static_cast<std::size_t>(nets_.net(k).output_dim()));
        if (with_grad) {
            w.grad.setZero(nets_.parameter_count());
            w.boundary_grad.setZero(nets_.parameter_count());
        }
    }

    void forward_components(Worker& w, const VecD& xf) {
        int c = 0;
        for (int k = 0; k < nets_.net_count(); ++k) {
            const auto& outs = w.traces[static_cast<std::size_t>(k)].forward(nets_.net(k), xf);
            for (std::size_t s = 0; s < outs.size(); ++s, ++c) {
                const auto& t = nets_.bc().per_component[static_cast<std::size_t>(c)];
                w.u[static_cast<std::size_t>(c)] =
                    t ? bc_factor<D>(*t, xf) * outs[s] : outs[s];
            }
        }
    }

    void backprop_components(Worker& w, const VecD& xf, Eigen::VectorXd& grad) {
        int c = 0;
        for (int k = 0; k < nets_.net_count(); ++k) {
            auto& ra = w.raw_adj[static_cast<std::size_t>(k)];
            for (std::size_t s = 0; s < ra.size(); ++s, ++c) {
                const auto& t = nets_.bc().per_component[static_cast<std::size_t>(c)];
                ra[s] = t ? product_adjoint<D>(w.adj[static_cast<std::size_t>(c)],
                                               bc_factor<D>(*t, xf))
                          : w.adj[static_cast<std::size_t>(c)];
            }
            w.traces[static_cast<std::size_t>(k)].backward(
                nets_.net(k), ra,
                grad.segment(nets_.parameter_offset(k), nets_.net(k).parameter_count()));
        }
    }

    void zero_adjoints(Worker& w) {
        for (auto& a : w.adj) a = Dual2<D>();
    }

    void process_interior(Worker& w, int i) {
        const VecD xf = s_.interior.row(i).transpose();
        forward_components(w, xf);
        const bool with_grad = w.grad.size() != 0;

        if (kind_ == LossKind::Collocation) {
            std::array<MatD, D> H;
            for (int c = 0; c < D; ++c) H[static_cast<std::size_t>(c)] = w.u[static_cast<std::size_t>(c)].hess;
            const VecD r = fixed::residual<D>(H, mat_, f_);
            w.acc += r.squaredNorm();
            if (!with_grad) return;
            zero_adjoints(w);
            const double wg = 2.0 / n_;
            if (mat_.mode == MaterialMode::Bar1D) {
                w.adj[0].hess(0, 0) += wg * mat_.E * r[0];
            } else {
                const double lm = mat_.lambda + mat_.mu;
                for (int m = 0; m < D; ++m) {
                    auto& hb = w.adj[static_cast<std::size_t>(m)].hess;
                    for (int j = 0; j < D; ++j) hb(m, j) += wg * lm * r[j];
                    for (int i2 = 0; i2 < D; ++i2) hb(i2, i2) += wg * mat_.mu * r[m];
                }
            }
            backprop_components(w, xf, w.grad);
        } else {
            MatD G;
            for (int c = 0; c < D; ++c) G.row(c) = w.u[static_cast<std::size_t>(c)].grad.transpose();
            const MatD eps = fixed::strain<D>(G);
            const MatD sigma = fixed::stress<D>(eps, mat_);
            const double density = 0.5 * sigma.cwiseProduct(eps).sum();
            const double dv = s_.weights[i];
            w.acc += density * dv;
            if (!with_grad) return;
            zero_adjoints(w);
            // d(density)/d(grad u) = sigma.
            for (int c = 0; c < D; ++c)
                w.adj[static_cast<std::size_t>(c)].grad = dv * sigma.row(c).transpose();
            backprop_components(w, xf, w.grad);
        }
    }

    /// Returns the point's contribution to the boundary sum (traction
    /// residual sum-of-squares, or external work).
    double process_boundary(Worker& w, const BoundaryPatch& p, int j, Eigen::VectorXd* grad_out) {
        const VecD xf = p.points.row(j).transpose();
        forward_components(w, xf);

        if (kind_ == LossKind::Energy) {
            const double dg = p.weights[j];
            double work = 0.0;
            for (int c = 0; c < D; ++c) work += w.u[static_cast<std::size_t>(c)].val * p.tractions(j, c);
            if (grad_out) {
                zero_adjoints(w);
                // total = E_in - E_ex, so the work seed enters negatively.
                for (int c = 0; c < D; ++c)
                    w.adj[static_cast<std::size_t>(c)].val = -dg * p.tractions(j, c);
                backprop_components(w, xf, w.boundary_grad);
            }
            return work * dg;
        }

        const VecD nrm = p.normal;
        MatD G;
        for (int c = 0; c < D; ++c) G.row(c) = w.u[static_cast<std::size_t>(c)].grad.transpose();
        VecD T;
        if (mat_.mode == MaterialMode::Bar1D) {
            T[0] = mat_.E * G(0, 0) * nrm[0];
        } else {
            const MatD eps = fixed::strain<D>(G);
            T = fixed::stress<D>(eps, mat_) * nrm;
        }
        double ssq = 0.0;
        if (grad_out) zero_adjoints(w);
        const double wt = 2.0 / mt_;
        for (int a : p.enforced) {
            const double diff = T[a] - p.tractions(j, a);
            ssq += diff * diff;
            if (!grad_out) continue;
            const double ca = wt * diff;
            if (mat_.mode == MaterialMode::Bar1D) {
                w.adj[0].grad[0] += ca * mat_.E * nrm[0];
            } else {
                // dT_a/dG(m,k) = lambda n_a delta_mk + mu (delta_am n_k + delta_ka n_m)
                for (int m = 0; m < D; ++m) {
                    w.adj[static_cast<std::size_t>(m)].grad[m] += ca * mat_.lambda * nrm[a];
                    w.adj[static_cast<std::size_t>(m)].grad[a] += ca * mat_.mu * nrm[m];
                }
                w.adj[static_cast<std::size_t>(a)].grad += ca * mat_.mu * nrm;
            }
        }
        if (grad_out) backprop_components(w, xf, w.boundary_grad);
        return ssq;
    }

    LossKind kind_;
    const SamplePointSet& s_;
    const Material& mat_;
    const NetworkSet& nets_;
    int threads_;
    VecD f_;
    int n_ = 0;
    int mt_ = 0;
};

template <typename F>
auto dispatch_dim(int d, F&& f) {
    switch (d) {
        case 1: return f(std::integral_constant<int, 1>{});
        case 2: return f(std::integral_constant<int, 2>{});
        case 3: return f(std::integral_constant<int, 3>{});
        default: throw std::invalid_argument("spatial dimension must be 1, 2 or 3");
    }
}

LossBreakdown run_loss(LossKind kind, const SamplePointSet& s, const Material& mat,
                       const Eigen::VectorXd& body_force, const NetworkSet& nets, int threads,
                       Eigen::VectorXd* grad_out) {
    return dispatch_dim(s.dimension(), [&](auto dim) {
        LossKernel<decltype(dim)::value> kernel(kind, s, mat, body_force, nets, threads);
        return kernel.run(grad_out);
    });
}

}  // namespace

CollocationLoss::CollocationLoss(SamplePointSet samples, Material material,
                                 Eigen::VectorXd body_force, int threads)
    : samples_(std::move(samples)),
      material_(material),
      body_force_(std::move(body_force)),
      threads_(threads < 1 ? 1 : threads) {
    validate_samples(samples_);
}

LossBreakdown CollocationLoss::evaluate(const NetworkSet& nets) const {
    return run_loss(LossKind::Collocation, samples_, material_, body_force_, nets, threads_,
                    nullptr);
}

LossBreakdown CollocationLoss::evaluate_with_gradient(const NetworkSet& nets,
                                                      Eigen::Ref<Eigen::VectorXd> grad) const {
    Eigen::VectorXd g;
    LossBreakdown b =
        run_loss(LossKind::Collocation, samples_, material_, body_force_, nets, threads_, &g);
    grad = g;
    return b;
}

EnergyLoss::EnergyLoss(SamplePointSet samples, Material material, int threads)
    : samples_(std::move(samples)), material_(material), threads_(threads < 1 ? 1 : threads) {
    validate_samples(samples_);
}

LossBreakdown EnergyLoss::evaluate(const NetworkSet& nets) const {
    return run_loss(LossKind::Energy, samples_, material_, Eigen::VectorXd(), nets, threads_,
                    nullptr);
}

LossBreakdown EnergyLoss::evaluate_with_gradient(const NetworkSet& nets,
                                                 Eigen::Ref<Eigen::VectorXd> grad) const {
    Eigen::VectorXd g;
    LossBreakdown b =
        run_loss(LossKind::Energy, samples_, material_, Eigen::VectorXd(), nets, threads_, &g);
    grad = g;
    return b;
}

std::pair<double, Eigen::VectorXd> loss_parameter_gradient(const LossFunction& loss,
                                                           const NetworkSet& nets) {
    Eigen::VectorXd grad(nets.parameter_count());
    LossBreakdown b = loss.evaluate_with_gradient(nets, grad);
    return {b.total, std::move(grad)};
}

}  // namespace pinn
