#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pinn/loss.hpp"
#include "pinn/mechanics.hpp"
#include "pinn/network.hpp"

namespace pinn {

enum class LoadCase { Cosine, UniformPatch };

/// Closed-form reference fields. PatchTest oracles are spatially constant
/// stress states; ExactPaper is the rod's analytic solution.
struct AnalyticOracle {
    enum class Kind { ExactPaper, PatchTest };
    Kind kind = Kind::ExactPaper;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> displacement;
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> strain;
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> stress;
};

/// A fully assembled benchmark: unit-box domain sampled on a uniform grid,
/// material, hard displacement BCs, boundary patches with tractions, the
/// per-paper default network sizes, and the analytic oracle when one exists.
struct ProblemSpec {
    std::string name;
    int dimension = 1;
    Material material;
    double spacing = 0.0;
    int points_per_axis = 0;
    SamplePointSet samples;
    HardBCTransform hard_bc;
    std::vector<int> default_hidden;
    Eigen::VectorXd body_force;
    std::optional<AnalyticOracle> oracle;
};

/// Stretching rod on [0,1]: E = 10, fixed at x = 0, unit traction at x = 1.
/// Default grid 51 points at spacing 0.02; one 3x5 tanh network.
ProblemSpec build_rod_1d(int points_per_axis = 51);

/// Quarter plate on [0,1]^2, plane stress E = 7, nu = 0.3. U pinned on x = 0,
/// V on y = 0; load t_x = cos(pi y / 2) (Cosine) or 1 (UniformPatch) on
/// x = 1; y = 1 traction-free; symmetry edges zero-shear. Default 51x51 grid;
/// two 3x20 networks.
ProblemSpec build_plate_2d(LoadCase load, int points_per_axis = 51);

/// One-eighth cube on [0,1]^3, E = 10, nu = 0.25. Load t_z =
/// cos(pi x/2) cos(pi y/2) (Cosine) or 1 (UniformPatch) on z = 1. Default
/// 21^3 grid; three networks with four hidden layers of 20.
ProblemSpec build_cube_3d(LoadCase load, int points_per_axis = 21);

/// Benchmark registry: rod1d, plate2d, plate2d-patch, cube3d, cube3d-patch.
/// Throws std::invalid_argument for unknown names.
ProblemSpec make_problem(const std::string& name);
std::vector<std::string> problem_names();

/// Networks for a problem at the paper's architecture: one single-output net
/// per displacement component (or one shared net when `shared`), LeCun
/// initialized from per-net substreams of `seed`.
NetworkSet make_networks(const ProblemSpec& p, std::uint64_t seed,
                         const std::vector<int>& hidden_override = {}, bool shared = false);

}  // namespace pinn
