#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pinn/lbfgs.hpp"
#include "pinn/loss.hpp"
#include "pinn/problems.hpp"

namespace pinn {

/// Relative mean square error (normalized by the largest absolute ground
/// truth value):  e = 1/n sum_i ((truth_i - pred_i) / max_j |truth_j|)^2.
/// Throws std::invalid_argument on length mismatch or an all-zero truth
/// field (undefined normalizer).
double rms_error(const Eigen::Ref<const Eigen::VectorXd>& truth,
                 const Eigen::Ref<const Eigen::VectorXd>& pred);

struct RunConfig {
    std::string problem = "rod1d";
    std::string loss = "collocation";  // or "energy"
    std::uint64_t seed = 0;
    std::vector<int> hidden;           // empty: the problem's default sizes
    bool shared_net = false;           // one net for all components
    int max_iterations = 5000;
    int threads = 1;
    std::string out_dir = "out";
    bool quiet = false;                // suppress progress lines
    int log_every = 10;
};

/// Predicted fields at every sample point: coordinates, displacement, strain
/// (engineering shear) and stress components in the canonical column order,
/// e.g. 2D: x, y, U, V, eps_x, eps_y, gamma_xy, sig_x, sig_y, tau_xy.
struct FieldSnapshot {
    std::vector<std::string> columns;
    Eigen::MatrixXd values;  // one row per sample point
};

struct TrainReport {
    std::string problem;
    std::string loss;
    std::uint64_t seed = 0;
    std::vector<int> hidden;
    int threads = 1;
    int grid_points = 0;
    int parameter_count = 0;
    int iterations = 0;
    int function_evals = 0;
    std::string converged_by;
    double final_loss = 0.0;
    double term1 = 0.0;  // governing / internal energy
    double term2 = 0.0;  // traction / external work
    double train_seconds = 0.0;
    std::map<std::string, double> rms;  // per field, when an oracle exists
    std::vector<std::array<double, 4>> loss_history;  // iter, total, term1, term2
};

/// Evaluate the displacement/strain/stress fields of a trained network set
/// at every interior sample point.
FieldSnapshot snapshot_fields(const ProblemSpec& p, const NetworkSet& nets);

/// Oracle fields in the same column layout (coordinates included).
FieldSnapshot snapshot_oracle(const ProblemSpec& p);

/// RMS errors per non-degenerate field column (truth fields that are not
/// identically zero), keyed by column name.
std::map<std::string, double> rms_against_oracle(const ProblemSpec& p, const FieldSnapshot& pred);

/// Atomic CSV/JSON writers (temp file + rename); values round-trip exactly.
void export_fields(const FieldSnapshot& snapshot, const std::string& path);
void export_report(const TrainReport& report, const std::string& path);
FieldSnapshot import_fields(const std::string& path);

struct RunOutput {
    TrainReport report;
    FieldSnapshot fields;
    NetworkSet nets;
};

/// Full pipeline: build problem and networks, train with L-BFGS, evaluate
/// fields and RMS errors, write <out_dir>/fields.csv and report.json.
/// Unknown problem or loss names throw std::invalid_argument before any
/// compute; non-finite training losses throw std::runtime_error after
/// writing a diagnostic report.
RunOutput run(const RunConfig& config);

/// Thrown when training produces a non-finite loss.
struct DivergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace pinn
