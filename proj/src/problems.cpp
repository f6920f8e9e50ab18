#include "pinn/problems.hpp"

#include <cmath>

#include "pinn/rng.hpp"

namespace pinn {

namespace {

constexpr double kPi = 3.14159265358979323846;

/// Coordinates i * spacing (exact multiples, no accumulation) and cell
/// measures: spacing per point, halved where the point sits on the domain
/// boundary, so the weights partition [0,1] exactly.
void axis_grid(int n, double spacing, std::vector<double>& coord, std::vector<double>& weight) {
    coord.resize(static_cast<std::size_t>(n));
    weight.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        coord[static_cast<std::size_t>(i)] = i * spacing;
        weight[static_cast<std::size_t>(i)] = (i == 0 || i == n - 1) ? 0.5 * spacing : spacing;
    }
}

struct GridBuilder {
    int dim;
    int n;
    double spacing;
    std::vector<double> coord, weight;

    GridBuilder(int dim_, int n_) : dim(dim_), n(n_), spacing(1.0 / (n_ - 1)) {
        if (n_ < 2) throw std::invalid_argument("need at least 2 points per axis");
        axis_grid(n, spacing, coord, weight);
    }

    int total() const {
        int t = 1;
        for (int a = 0; a < dim; ++a) t *= n;
        return t;
    }

    /// Multi-index of flat point p, axis 0 slowest.
    std::array<int, 3> unflatten(int p) const {
        std::array<int, 3> idx{0, 0, 0};
        for (int a = dim - 1; a >= 0; --a) {
            idx[static_cast<std::size_t>(a)] = p % n;
            p /= n;
        }
        return idx;
    }

    Eigen::VectorXd point(const std::array<int, 3>& idx) const {
        Eigen::VectorXd x(dim);
        for (int a = 0; a < dim; ++a) x[a] = coord[static_cast<std::size_t>(idx[static_cast<std::size_t>(a)])];
        return x;
    }

    bool on_boundary(const std::array<int, 3>& idx) const {
        for (int a = 0; a < dim; ++a) {
            const int i = idx[static_cast<std::size_t>(a)];
            if (i == 0 || i == n - 1) return true;
        }
        return false;
    }

    double volume_weight(const std::array<int, 3>& idx) const {
        double w = 1.0;
        for (int a = 0; a < dim; ++a) w *= weight[static_cast<std::size_t>(idx[static_cast<std::size_t>(a)])];
        return w;
    }

    /// Surface measure of a point on the face normal to `face_axis`: the
    /// product of cell measures along the in-face axes.
    double face_weight(const std::array<int, 3>& idx, int face_axis) const {
        double w = 1.0;
        for (int a = 0; a < dim; ++a)
            if (a != face_axis) w *= weight[static_cast<std::size_t>(idx[static_cast<std::size_t>(a)])];
        return w;
    }
};

struct PatchRule {
    std::string name;
    int axis;        // face: x[axis] == side
    int side;        // 0 or n-1 (grid index)
    Eigen::VectorXd normal;
    std::vector<int> enforced;
    bool in_energy;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> traction;
};

/// Assign every boundary grid point to the first rule whose face contains
/// it (rules are listed loaded, free, then symmetry), so shared corner/edge
/// points land in exactly one patch.
std::vector<BoundaryPatch> assign_patches(const GridBuilder& g, const std::vector<PatchRule>& rules) {
    std::vector<std::vector<int>> members(rules.size());
    const int total = g.total();
    for (int p = 0; p < total; ++p) {
        const auto idx = g.unflatten(p);
        if (!g.on_boundary(idx)) continue;
        for (std::size_t r = 0; r < rules.size(); ++r) {
            if (idx[static_cast<std::size_t>(rules[r].axis)] == rules[r].side) {
                members[r].push_back(p);
                break;
            }
        }
    }
    std::vector<BoundaryPatch> patches;
    for (std::size_t r = 0; r < rules.size(); ++r) {
        BoundaryPatch patch;
        patch.name = rules[r].name;
        patch.normal = rules[r].normal;
        patch.enforced = rules[r].enforced;
        patch.in_energy = rules[r].in_energy;
        const int k = static_cast<int>(members[r].size());
        patch.points.resize(k, g.dim);
        patch.weights.resize(k);
        patch.tractions.resize(k, g.dim);
        for (int j = 0; j < k; ++j) {
            const auto idx = g.unflatten(members[r][static_cast<std::size_t>(j)]);
            const Eigen::VectorXd x = g.point(idx);
            patch.points.row(j) = x.transpose();
            patch.weights[j] = g.face_weight(idx, rules[r].axis);
            patch.tractions.row(j) = rules[r].traction(x).transpose();
        }
        patches.push_back(std::move(patch));
    }
    return patches;
}

SamplePointSet build_samples(const GridBuilder& g, const std::vector<PatchRule>& rules) {
    SamplePointSet s;
    const int total = g.total();
    s.interior.resize(total, g.dim);
    s.weights.resize(total);
    for (int p = 0; p < total; ++p) {
        const auto idx = g.unflatten(p);
        s.interior.row(p) = g.point(idx).transpose();
        s.weights[p] = g.volume_weight(idx);
    }
    s.patches = assign_patches(g, rules);
    return s;
}

Eigen::VectorXd unit(int dim, int axis, double sign) {
    Eigen::VectorXd n = Eigen::VectorXd::Zero(dim);
    n[axis] = sign;
    return n;
}

}  // namespace

ProblemSpec build_rod_1d(int points_per_axis) {
    GridBuilder g(1, points_per_axis);
    const double E = 10.0;

    std::vector<PatchRule> rules;
    rules.push_back({"load-right", 0, g.n - 1, unit(1, 0, 1.0), {0}, true,
                     [](const Eigen::VectorXd&) { return Eigen::VectorXd::Constant(1, 1.0); }});
    // x = 0 is the fixed end (hard BC), not a traction boundary.

    ProblemSpec p;
    p.name = "rod1d";
    p.dimension = 1;
    p.material = Material::bar_1d(E);
    p.spacing = g.spacing;
    p.points_per_axis = g.n;
    p.samples = build_samples(g, rules);
    p.hard_bc.per_component = {HardBCTransform::AnchoredAxis{0, 0.0}};
    p.default_hidden = {5, 5, 5};
    p.body_force = Eigen::VectorXd::Zero(1);

    AnalyticOracle o;
    o.kind = AnalyticOracle::Kind::ExactPaper;
    o.displacement = [E](const Eigen::VectorXd& x) {
        return Eigen::VectorXd::Constant(1, x[0] / E);
    };
    o.strain = [E](const Eigen::VectorXd&) { return Eigen::MatrixXd::Constant(1, 1, 1.0 / E); };
    o.stress = [](const Eigen::VectorXd&) { return Eigen::MatrixXd::Constant(1, 1, 1.0); };
    p.oracle = o;
    return p;
}

ProblemSpec build_plate_2d(LoadCase load, int points_per_axis) {
    GridBuilder g(2, points_per_axis);
    const double E = 7.0, nu = 0.3;

    auto loaded_traction = [load](const Eigen::VectorXd& x) {
        Eigen::VectorXd t = Eigen::VectorXd::Zero(2);
        t[0] = load == LoadCase::Cosine ? std::cos(0.5 * kPi * x[1]) : 1.0;
        return t;
    };
    auto zero_traction = [](const Eigen::VectorXd&) { return Eigen::VectorXd::Zero(2); };

    std::vector<PatchRule> rules;
    rules.push_back({"load-x1", 0, g.n - 1, unit(2, 0, 1.0), {0, 1}, true, loaded_traction});
    rules.push_back({"free-y1", 1, g.n - 1, unit(2, 1, 1.0), {0, 1}, false, zero_traction});
    // Symmetry planes: normal displacement is pinned by the hard BC, only the
    // shear (tangential) traction component is enforced.
    rules.push_back({"symmetry-x0", 0, 0, unit(2, 0, -1.0), {1}, false, zero_traction});
    rules.push_back({"symmetry-y0", 1, 0, unit(2, 1, -1.0), {0}, false, zero_traction});

    ProblemSpec p;
    p.name = load == LoadCase::Cosine ? "plate2d" : "plate2d-patch";
    p.dimension = 2;
    p.material = Material::plane_stress(E, nu);
    p.spacing = g.spacing;
    p.points_per_axis = g.n;
    p.samples = build_samples(g, rules);
    p.hard_bc.per_component = {HardBCTransform::AnchoredAxis{0, 0.0},
                               HardBCTransform::AnchoredAxis{1, 0.0}};
    p.default_hidden = {20, 20, 20};
    p.body_force = Eigen::VectorXd::Zero(2);

    if (load == LoadCase::UniformPatch) {
        // Uniaxial unit stress along x: U = x/E, V = -nu y / E.
        AnalyticOracle o;
        o.kind = AnalyticOracle::Kind::PatchTest;
        o.displacement = [E, nu](const Eigen::VectorXd& x) {
            Eigen::VectorXd u(2);
            u[0] = x[0] / E;
            u[1] = -nu * x[1] / E;
            return u;
        };
        o.strain = [E, nu](const Eigen::VectorXd&) {
            Eigen::MatrixXd e = Eigen::MatrixXd::Zero(2, 2);
            e(0, 0) = 1.0 / E;
            e(1, 1) = -nu / E;
            return e;
        };
        o.stress = [](const Eigen::VectorXd&) {
            Eigen::MatrixXd s = Eigen::MatrixXd::Zero(2, 2);
            s(0, 0) = 1.0;
            return s;
        };
        p.oracle = o;
    }
    return p;
}

ProblemSpec build_cube_3d(LoadCase load, int points_per_axis) {
    GridBuilder g(3, points_per_axis);
    const double E = 10.0, nu = 0.25;

    auto loaded_traction = [load](const Eigen::VectorXd& x) {
        Eigen::VectorXd t = Eigen::VectorXd::Zero(3);
        t[2] = load == LoadCase::Cosine
                   ? std::cos(0.5 * kPi * x[0]) * std::cos(0.5 * kPi * x[1])
                   : 1.0;
        return t;
    };
    auto zero_traction = [](const Eigen::VectorXd&) { return Eigen::VectorXd::Zero(3); };

    std::vector<PatchRule> rules;
    rules.push_back({"load-z1", 2, g.n - 1, unit(3, 2, 1.0), {0, 1, 2}, true, loaded_traction});
    rules.push_back({"free-x1", 0, g.n - 1, unit(3, 0, 1.0), {0, 1, 2}, false, zero_traction});
    rules.push_back({"free-y1", 1, g.n - 1, unit(3, 1, 1.0), {0, 1, 2}, false, zero_traction});
    rules.push_back({"symmetry-x0", 0, 0, unit(3, 0, -1.0), {1, 2}, false, zero_traction});
    rules.push_back({"symmetry-y0", 1, 0, unit(3, 1, -1.0), {0, 2}, false, zero_traction});
    rules.push_back({"symmetry-z0", 2, 0, unit(3, 2, -1.0), {0, 1}, false, zero_traction});

    ProblemSpec p;
    p.name = load == LoadCase::Cosine ? "cube3d" : "cube3d-patch";
    p.dimension = 3;
    p.material = Material::solid_3d(E, nu);
    p.spacing = g.spacing;
    p.points_per_axis = g.n;
    p.samples = build_samples(g, rules);
    p.hard_bc.per_component = {HardBCTransform::AnchoredAxis{0, 0.0},
                               HardBCTransform::AnchoredAxis{1, 0.0},
                               HardBCTransform::AnchoredAxis{2, 0.0}};
    p.default_hidden = {20, 20, 20, 20};
    p.body_force = Eigen::VectorXd::Zero(3);

    if (load == LoadCase::UniformPatch) {
        // Uniaxial unit stress along z: W = z/E, U = -nu x/E, V = -nu y/E.
        AnalyticOracle o;
        o.kind = AnalyticOracle::Kind::PatchTest;
        o.displacement = [E, nu](const Eigen::VectorXd& x) {
            Eigen::VectorXd u(3);
            u[0] = -nu * x[0] / E;
            u[1] = -nu * x[1] / E;
            u[2] = x[2] / E;
            return u;
        };
        o.strain = [E, nu](const Eigen::VectorXd&) {
            Eigen::MatrixXd e = Eigen::MatrixXd::Zero(3, 3);
            e(0, 0) = -nu / E;
            e(1, 1) = -nu / E;
            e(2, 2) = 1.0 / E;
            return e;
        };
        o.stress = [](const Eigen::VectorXd&) {
            Eigen::MatrixXd s = Eigen::MatrixXd::Zero(3, 3);
            s(2, 2) = 1.0;
            return s;
        };
        p.oracle = o;
    }
    return p;
}

ProblemSpec make_problem(const std::string& name) {
    if (name == "rod1d") return build_rod_1d();
    if (name == "plate2d") return build_plate_2d(LoadCase::Cosine);
    if (name == "plate2d-patch") return build_plate_2d(LoadCase::UniformPatch);
    if (name == "cube3d") return build_cube_3d(LoadCase::Cosine);
    if (name == "cube3d-patch") return build_cube_3d(LoadCase::UniformPatch);
    throw std::invalid_argument("unknown problem '" + name + "'");
}

std::vector<std::string> problem_names() {
    return {"rod1d", "plate2d", "plate2d-patch", "cube3d", "cube3d-patch"};
}

NetworkSet make_networks(const ProblemSpec& p, std::uint64_t seed,
                         const std::vector<int>& hidden_override, bool shared) {
    const std::vector<int>& hidden = hidden_override.empty() ? p.default_hidden : hidden_override;
    std::vector<Network> nets;
    if (shared) {
        NetworkConfig cfg;
        cfg.n_input = p.dimension;
        cfg.n_output = p.dimension;
        cfg.hidden = hidden;
        cfg.seed = seed;
        nets.push_back(init_network(cfg));
    } else {
        for (int c = 0; c < p.dimension; ++c) {
            NetworkConfig cfg;
            cfg.n_input = p.dimension;
            cfg.n_output = 1;
            cfg.hidden = hidden;
            cfg.seed = split_seed(seed, static_cast<std::uint64_t>(c));
            nets.push_back(init_network(cfg));
        }
    }
    return NetworkSet(std::move(nets), p.hard_bc);
}

}  // namespace pinn
