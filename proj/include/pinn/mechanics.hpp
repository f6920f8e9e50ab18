#pragma once

#include <Eigen/Core>
#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace pinn {

enum class MaterialMode { Bar1D, PlaneStress, Solid3D };

/// Isotropic linear-elastic material. In Bar1D mode the constitutive law is
/// sigma = E * eps directly and the Lame constants are unused.
struct Material {
    double E = 0.0;
    double nu = 0.0;
    double lambda = 0.0;
    double mu = 0.0;
    MaterialMode mode = MaterialMode::Bar1D;

    static Material bar_1d(double E);
    static Material plane_stress(double E, double nu);
    static Material solid_3d(double E, double nu);
};

/// Lame constants from engineering constants.
///   plane stress: lambda = E nu / ((1+nu)(1-nu)),  mu = E / (2(1+nu))
///   3D solid:     lambda = E nu / ((1+nu)(1-2nu)), mu = E / (2(1+nu))
/// Throws std::invalid_argument outside E > 0, -1 < nu < 0.5, and for
/// nu = 0.5 in Solid3D (incompressible limit).
std::pair<double, double> lame_from_engineering(double E, double nu, MaterialMode mode);

/// eps = (du + du^T) / 2. Requires du square (m == d).
Eigen::MatrixXd strain_from_gradient(const Eigen::Ref<const Eigen::MatrixXd>& du);

/// sigma = lambda tr(eps) I + 2 mu eps; Bar1D: sigma = E eps.
Eigen::MatrixXd stress_from_strain(const Eigen::Ref<const Eigen::MatrixXd>& eps,
                                   const Material& mat);

/// Navier-form equilibrium residual, the stress divergence expanded through
/// the constitutive law and kinematics:
///   r_a = (lambda + mu) u_{g,ga} + mu u_{a,bb} + f_a      (Bar1D: E u_xx + f).
/// d2u[c](b, g) = d^2 u_c / d x_b d x_g, symmetric in (b, g).
Eigen::VectorXd equilibrium_residual(const std::vector<Eigen::MatrixXd>& d2u,
                                     const Material& mat,
                                     const Eigen::Ref<const Eigen::VectorXd>& f);

/// t = sigma n. Throws if |n| deviates from 1 by more than 1e-12.
Eigen::VectorXd traction(const Eigen::Ref<const Eigen::MatrixXd>& sigma,
                         const Eigen::Ref<const Eigen::VectorXd>& n);

/// Strain energy density 1/2 sigma : eps for the material's constitutive law.
double strain_energy_density(const Eigen::Ref<const Eigen::MatrixXd>& eps, const Material& mat);

// Fixed-size kernels used by the loss hot paths; same formulas as above.
namespace fixed {

template <int D>
Eigen::Matrix<double, D, D> strain(const Eigen::Matrix<double, D, D>& du) {
    return 0.5 * (du + du.transpose());
}

template <int D>
Eigen::Matrix<double, D, D> stress(const Eigen::Matrix<double, D, D>& eps, const Material& mat) {
    if (mat.mode == MaterialMode::Bar1D) return mat.E * eps;
    return mat.lambda * eps.trace() * Eigen::Matrix<double, D, D>::Identity() + 2.0 * mat.mu * eps;
}

template <int D>
Eigen::Matrix<double, D, 1> residual(const std::array<Eigen::Matrix<double, D, D>, D>& d2u,
                                     const Material& mat, const Eigen::Matrix<double, D, 1>& f) {
    Eigen::Matrix<double, D, 1> r;
    if (mat.mode == MaterialMode::Bar1D) {
        r[0] = mat.E * d2u[0](0, 0) + f[0];
        return r;
    }
    for (int a = 0; a < D; ++a) {
        double mixed = 0.0, laplace = 0.0;
        for (int g = 0; g < D; ++g) mixed += d2u[g](g, a);
        for (int b = 0; b < D; ++b) laplace += d2u[a](b, b);
        r[a] = (mat.lambda + mat.mu) * mixed + mat.mu * laplace + f[a];
    }
    return r;
}

}  // namespace fixed

}  // namespace pinn
