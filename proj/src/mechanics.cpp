#include "pinn/mechanics.hpp"

#include <cmath>

namespace pinn {

namespace {

void check_ranges(double E, double nu) {
    if (!(E > 0.0)) throw std::invalid_argument("Young's modulus must be positive");
    if (!(nu > -1.0 && nu < 0.5))
        throw std::invalid_argument("Poisson ratio must lie in (-1, 0.5)");
}

}  // namespace

std::pair<double, double> lame_from_engineering(double E, double nu, MaterialMode mode) {
    switch (mode) {
        case MaterialMode::Bar1D:
            return {0.0, 0.0};  // unused: sigma = E eps
        case MaterialMode::PlaneStress: {
            check_ranges(E, nu);
            return {E * nu / ((1.0 + nu) * (1.0 - nu)), E / (2.0 * (1.0 + nu))};
        }
        case MaterialMode::Solid3D: {
            check_ranges(E, nu);
            return {E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu)), E / (2.0 * (1.0 + nu))};
        }
    }
    throw std::logic_error("unknown material mode");
}

Material Material::bar_1d(double E) {
    if (!(E > 0.0)) throw std::invalid_argument("Young's modulus must be positive");
    Material m;
    m.E = E;
    m.mode = MaterialMode::Bar1D;
    return m;
}

Material Material::plane_stress(double E, double nu) {
    Material m;
    m.mode = MaterialMode::PlaneStress;
    m.E = E;
    m.nu = nu;
    std::tie(m.lambda, m.mu) = lame_from_engineering(E, nu, m.mode);
    return m;
}

Material Material::solid_3d(double E, double nu) {
    Material m;
    m.mode = MaterialMode::Solid3D;
    m.E = E;
    m.nu = nu;
    std::tie(m.lambda, m.mu) = lame_from_engineering(E, nu, m.mode);
    return m;
}

Eigen::MatrixXd strain_from_gradient(const Eigen::Ref<const Eigen::MatrixXd>& du) {
    if (du.rows() != du.cols())
        throw std::invalid_argument("displacement gradient must be square (m == d)");
    return 0.5 * (du + du.transpose());
}

Eigen::MatrixXd stress_from_strain(const Eigen::Ref<const Eigen::MatrixXd>& eps,
                                   const Material& mat) {
    if (mat.mode == MaterialMode::Bar1D) return mat.E * eps;
    const auto d = eps.rows();
    return mat.lambda * eps.trace() * Eigen::MatrixXd::Identity(d, d) + 2.0 * mat.mu * eps;
}

Eigen::VectorXd equilibrium_residual(const std::vector<Eigen::MatrixXd>& d2u,
                                     const Material& mat,
                                     const Eigen::Ref<const Eigen::VectorXd>& f) {
    const int d = static_cast<int>(d2u.size());
    if (f.size() != d) throw std::invalid_argument("body force dimension mismatch");
    Eigen::VectorXd r(d);
    if (mat.mode == MaterialMode::Bar1D) {
        r[0] = mat.E * d2u[0](0, 0) + f[0];
        return r;
    }
    for (int a = 0; a < d; ++a) {
        double mixed = 0.0, laplace = 0.0;
        for (int g = 0; g < d; ++g) mixed += d2u[g](g, a);
        for (int b = 0; b < d; ++b) laplace += d2u[a](b, b);
        r[a] = (mat.lambda + mat.mu) * mixed + mat.mu * laplace + f[a];
    }
    return r;
}

Eigen::VectorXd traction(const Eigen::Ref<const Eigen::MatrixXd>& sigma,
                         const Eigen::Ref<const Eigen::VectorXd>& n) {
    if (std::abs(n.norm() - 1.0) > 1e-12)
        throw std::invalid_argument("boundary normal must have unit length");
    return sigma * n;
}

double strain_energy_density(const Eigen::Ref<const Eigen::MatrixXd>& eps, const Material& mat) {
    const Eigen::MatrixXd sigma = stress_from_strain(eps, mat);
    return 0.5 * sigma.cwiseProduct(eps).sum();
}

}  // namespace pinn
