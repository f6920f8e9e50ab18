#pragma once

#include <Eigen/Core>
#include <memory>
#include <string>
#include <vector>

#include "pinn/mechanics.hpp"
#include "pinn/network.hpp"

namespace pinn {

/// One boundary region with a single outward normal: the prescribed traction
/// at each of its points, the subset of traction components enforced in the
/// collocation residual (symmetry planes enforce only the tangential ones),
/// and whether the patch contributes external work to the energy loss.
struct BoundaryPatch {
    std::string name;
    Eigen::MatrixXd points;     // k x d
    Eigen::VectorXd weights;    // surface measure per point
    Eigen::VectorXd normal;     // unit outward normal, constant on the patch
    Eigen::MatrixXd tractions;  // k x d prescribed traction values
    std::vector<int> enforced;  // traction components entering the residual
    bool in_energy = false;
};

/// Sampled problem domain: the volumetric residual/quadrature points (the
/// closure of the domain, uniform grid) and the boundary patches.
struct SamplePointSet {
    Eigen::MatrixXd interior;  // n x d
    Eigen::VectorXd weights;   // volume measure per point
    std::vector<BoundaryPatch> patches;

    int dimension() const { return static_cast<int>(interior.cols()); }
    int interior_count() const { return static_cast<int>(interior.rows()); }
    /// m_t: total number of traction-condition boundary points.
    int traction_point_count() const {
        int m = 0;
        for (const auto& p : patches) m += static_cast<int>(p.points.rows());
        return m;
    }
};

enum class LossKind { Collocation, Energy };

struct LossBreakdown {
    LossKind kind = LossKind::Collocation;
    double total = 0.0;
    // Collocation sub-terms (total = governing + traction):
    double governing = 0.0;
    double traction = 0.0;
    // Energy sub-terms (total = internal_energy - external_work):
    double internal_energy = 0.0;
    double external_work = 0.0;

    double term1() const { return kind == LossKind::Collocation ? governing : internal_energy; }
    double term2() const { return kind == LossKind::Collocation ? traction : external_work; }
};

/// A scalar training objective over the parameters of a NetworkSet.
/// evaluate_with_gradient fills d(total)/d(theta) exactly (reverse
/// accumulation through the recorded forward passes), with theta in the
/// network set's canonical flat ordering; its breakdown equals evaluate()
/// at the same parameters.
class LossFunction {
public:
    virtual ~LossFunction() = default;
    virtual LossKind kind() const = 0;
    virtual LossBreakdown evaluate(const NetworkSet& nets) const = 0;
    virtual LossBreakdown evaluate_with_gradient(const NetworkSet& nets,
                                                 Eigen::Ref<Eigen::VectorXd> grad) const = 0;
};

/// Mean-square residual of the governing equation over the interior points
/// plus mean-square traction mismatch over the boundary points:
///   L = 1/n sum_i sum_a r_a(x_i)^2 + 1/m_t sum_j sum_a (sigma n - tbar)_a^2
/// (means over points, sums over enforced components).
class CollocationLoss final : public LossFunction {
public:
    CollocationLoss(SamplePointSet samples, Material material, Eigen::VectorXd body_force,
                    int threads = 1);

    LossKind kind() const override { return LossKind::Collocation; }
    LossBreakdown evaluate(const NetworkSet& nets) const override;
    LossBreakdown evaluate_with_gradient(const NetworkSet& nets,
                                         Eigen::Ref<Eigen::VectorXd> grad) const override;

    const SamplePointSet& samples() const { return samples_; }
    void set_threads(int t) { threads_ = t < 1 ? 1 : t; }

private:
    SamplePointSet samples_;
    Material material_;
    Eigen::VectorXd body_force_;
    int threads_;
};

/// Total potential energy of the discretized solid:
///   L = sum_i (1/2 sigma:eps)(x_i) dV_i  -  sum_j (u . tbar)(x_j) dGamma_j
/// with the external-work sum running over the loaded patches only.
class EnergyLoss final : public LossFunction {
public:
    EnergyLoss(SamplePointSet samples, Material material, int threads = 1);

    LossKind kind() const override { return LossKind::Energy; }
    LossBreakdown evaluate(const NetworkSet& nets) const override;
    LossBreakdown evaluate_with_gradient(const NetworkSet& nets,
                                         Eigen::Ref<Eigen::VectorXd> grad) const override;

    const SamplePointSet& samples() const { return samples_; }
    void set_threads(int t) { threads_ = t < 1 ? 1 : t; }

private:
    SamplePointSet samples_;
    Material material_;
    int threads_;
};

/// Loss value together with its exact parameter gradient; the value equals a
/// plain evaluate() at the same parameters.
std::pair<double, Eigen::VectorXd> loss_parameter_gradient(const LossFunction& loss,
                                                           const NetworkSet& nets);

}  // namespace pinn
