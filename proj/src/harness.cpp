#include "pinn/harness.hpp"

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pinn/autodiff.hpp"

namespace pinn {

double rms_error(const Eigen::Ref<const Eigen::VectorXd>& truth,
                 const Eigen::Ref<const Eigen::VectorXd>& pred) {
    if (truth.size() != pred.size())
        throw std::invalid_argument("rms_error: field lengths differ");
    if (truth.size() == 0) throw std::invalid_argument("rms_error: empty fields");
    const double norm = truth.cwiseAbs().maxCoeff();
    if (norm == 0.0)
        throw std::invalid_argument("rms_error: ground-truth field is identically zero");
    const Eigen::VectorXd rel = (truth - pred) / norm;
    return rel.squaredNorm() / static_cast<double>(truth.size());
}

namespace {

std::vector<std::string> field_columns(int d) {
    switch (d) {
        case 1: return {"x", "U", "eps_x", "sig_x"};
        case 2:
            return {"x", "y", "U", "V", "eps_x", "eps_y", "gamma_xy", "sig_x", "sig_y", "tau_xy"};
        case 3:
            return {"x", "y", "z", "U", "V", "W", "eps_x", "eps_y", "eps_z",
                    "gamma_xy", "gamma_yz", "gamma_zx",
                    "sig_x", "sig_y", "sig_z", "tau_xy", "tau_yz", "tau_zx"};
        default: throw std::invalid_argument("dimension must be 1, 2 or 3");
    }
}

/// Tensor components in the column order: diagonal first, then the shear
/// pairs (xy, yz, zx); strain shears are exported as engineering shear.
void write_row(Eigen::Ref<Eigen::MatrixXd> values, int row, const Eigen::VectorXd& x,
               const Eigen::VectorXd& u, const Eigen::MatrixXd& eps, const Eigen::MatrixXd& sig) {
    const int d = static_cast<int>(x.size());
    int k = 0;
    for (int a = 0; a < d; ++a) values(row, k++) = x[a];
    for (int a = 0; a < d; ++a) values(row, k++) = u[a];
    for (int a = 0; a < d; ++a) values(row, k++) = eps(a, a);
    if (d >= 2) values(row, k++) = 2.0 * eps(0, 1);
    if (d == 3) {
        values(row, k++) = 2.0 * eps(1, 2);
        values(row, k++) = 2.0 * eps(2, 0);
    }
    for (int a = 0; a < d; ++a) values(row, k++) = sig(a, a);
    if (d >= 2) values(row, k++) = sig(0, 1);
    if (d == 3) {
        values(row, k++) = sig(1, 2);
        values(row, k++) = sig(2, 0);
    }
}

}  // namespace

FieldSnapshot snapshot_fields(const ProblemSpec& p, const NetworkSet& nets) {
    FieldSnapshot snap;
    snap.columns = field_columns(p.dimension);
    const int n = p.samples.interior_count();
    snap.values.resize(n, static_cast<int>(snap.columns.size()));
    for (int i = 0; i < n; ++i) {
        const Eigen::VectorXd x = p.samples.interior.row(i).transpose();
        const PointDerivatives pd = eval_with_input_derivatives(nets, x);
        const Eigen::MatrixXd eps = strain_from_gradient(pd.du);
        const Eigen::MatrixXd sig = stress_from_strain(eps, p.material);
        write_row(snap.values, i, x, pd.u, eps, sig);
    }
    return snap;
}

FieldSnapshot snapshot_oracle(const ProblemSpec& p) {
    if (!p.oracle) throw std::invalid_argument("problem '" + p.name + "' has no analytic oracle");
    FieldSnapshot snap;
    snap.columns = field_columns(p.dimension);
    const int n = p.samples.interior_count();
    snap.values.resize(n, static_cast<int>(snap.columns.size()));
    for (int i = 0; i < n; ++i) {
        const Eigen::VectorXd x = p.samples.interior.row(i).transpose();
        write_row(snap.values, i, x, p.oracle->displacement(x), p.oracle->strain(x),
                  p.oracle->stress(x));
    }
    return snap;
}

std::map<std::string, double> rms_against_oracle(const ProblemSpec& p, const FieldSnapshot& pred) {
    const FieldSnapshot truth = snapshot_oracle(p);
    if (truth.values.rows() != pred.values.rows())
        throw std::invalid_argument("snapshot row count does not match the problem grid");
    std::map<std::string, double> rms;
    for (std::size_t c = static_cast<std::size_t>(p.dimension); c < truth.columns.size(); ++c) {
        const auto col = static_cast<int>(c);
        if (truth.values.col(col).cwiseAbs().maxCoeff() == 0.0) continue;  // degenerate field
        rms[truth.columns[c]] = rms_error(truth.values.col(col), pred.values.col(col));
    }
    return rms;
}

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        os << content;
        if (!os) throw std::runtime_error("failed writing '" + tmp.string() + "'");
    }
    fs::rename(tmp, target);
}

}  // namespace

void export_fields(const FieldSnapshot& snapshot, const std::string& path) {
    std::ostringstream os;
    for (std::size_t c = 0; c < snapshot.columns.size(); ++c) {
        if (c) os << ',';
        os << snapshot.columns[c];
    }
    os << '\n';
    for (int i = 0; i < snapshot.values.rows(); ++i) {
        for (int c = 0; c < snapshot.values.cols(); ++c) {
            if (c) os << ',';
            os << format_double(snapshot.values(i, c));
        }
        os << '\n';
    }
    atomic_write(path, os.str());
}

FieldSnapshot import_fields(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open '" + path + "'");
    FieldSnapshot snap;
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("empty CSV '" + path + "'");
    std::stringstream header(line);
    std::string cell;
    while (std::getline(header, cell, ',')) snap.columns.push_back(cell);
    std::vector<std::vector<double>> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != snap.columns.size())
            throw std::runtime_error("ragged CSV row in '" + path + "'");
        rows.push_back(std::move(row));
    }
    snap.values.resize(static_cast<int>(rows.size()), static_cast<int>(snap.columns.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t c = 0; c < rows[i].size(); ++c)
            snap.values(static_cast<int>(i), static_cast<int>(c)) = rows[i][c];
    return snap;
}

void export_report(const TrainReport& r, const std::string& path) {
    nlohmann::json j;
    j["format"] = "pinn-report";
    j["version"] = 1;
    j["problem"] = r.problem;
    j["loss"] = r.loss;
    j["seed"] = r.seed;
    j["hidden"] = r.hidden;
    j["threads"] = r.threads;
    j["grid_points"] = r.grid_points;
    j["parameter_count"] = r.parameter_count;
    j["iterations"] = r.iterations;
    j["function_evals"] = r.function_evals;
    j["converged_by"] = r.converged_by;
    j["final_loss"] = r.final_loss;
    if (r.loss == "energy") {
        j["internal_energy"] = r.term1;
        j["external_work"] = r.term2;
    } else {
        j["governing_term"] = r.term1;
        j["traction_term"] = r.term2;
    }
    j["train_seconds"] = r.train_seconds;
    j["rms"] = r.rms;
    auto& hist = j["loss_history"] = nlohmann::json::array();
    for (const auto& h : r.loss_history)
        hist.push_back({static_cast<int>(h[0]), h[1], h[2], h[3]});
    atomic_write(path, j.dump(2) + "\n");
}

RunOutput run(const RunConfig& config) {
    // Validate everything cheap before any compute or output.
    if (config.loss != "collocation" && config.loss != "energy")
        throw std::invalid_argument("unknown loss '" + config.loss +
                                    "' (expected collocation or energy)");
    ProblemSpec problem = make_problem(config.problem);
    if (config.max_iterations < 0) throw std::invalid_argument("max-iter must be >= 0");

    NetworkSet nets = make_networks(problem, config.seed, config.hidden, config.shared_net);

    std::unique_ptr<LossFunction> loss;
    if (config.loss == "collocation")
        loss = std::make_unique<CollocationLoss>(problem.samples, problem.material,
                                                 problem.body_force, config.threads);
    else
        loss = std::make_unique<EnergyLoss>(problem.samples, problem.material, config.threads);

    LossBreakdown last;  // breakdown at the most recent objective evaluation
    NetworkSet work = nets;
    Objective objective = [&](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
        work.set_parameters(x);
        grad.resize(work.parameter_count());
        last = loss->evaluate_with_gradient(work, grad);
        return last.total;
    };

    TrainReport report;
    report.problem = config.problem;
    report.loss = config.loss;
    report.seed = config.seed;
    report.hidden = config.hidden.empty() ? problem.default_hidden : config.hidden;
    report.threads = config.threads;
    report.grid_points = problem.samples.interior_count();
    report.parameter_count = nets.parameter_count();

    // Divergence pre-check at the initial parameters.
    {
        LossBreakdown b0 = loss->evaluate(nets);
        if (!std::isfinite(b0.total)) {
            report.converged_by = "diverged";
            report.final_loss = b0.total;
            export_report(report, config.out_dir + "/report.json");
            throw DivergenceError("loss is not finite at the initial parameters");
        }
        report.loss_history.push_back({0.0, b0.total, b0.term1(), b0.term2()});
    }

    OptOptions opts;
    opts.max_iterations = config.max_iterations;
    opts.log_every = config.log_every;
    opts.on_iteration = [&](const OptOptions::Progress& pr) {
        report.loss_history.push_back({static_cast<double>(pr.iteration), pr.loss, last.term1(),
                                       last.term2()});
    };
    if (!config.quiet) {
        opts.on_progress = [&](const OptOptions::Progress& pr) {
            std::printf("iter %6d  loss %.6e  |grad| %.3e  evals %d\n", pr.iteration, pr.loss,
                        pr.grad_inf_norm, pr.function_evals);
        };
    }

    const auto t0 = std::chrono::steady_clock::now();
    OptResult opt = minimize(objective, nets.parameters(), opts);
    const auto t1 = std::chrono::steady_clock::now();

    nets.set_parameters(opt.x);
    LossBreakdown final_b = loss->evaluate(nets);
    report.iterations = opt.iterations;
    report.function_evals = opt.function_evals;
    report.converged_by = converged_by_name(opt.converged_by);
    report.final_loss = final_b.total;
    report.term1 = final_b.term1();
    report.term2 = final_b.term2();
    report.train_seconds = std::chrono::duration<double>(t1 - t0).count();

    if (!std::isfinite(final_b.total)) {
        report.converged_by = "diverged";
        export_report(report, config.out_dir + "/report.json");
        throw DivergenceError("training diverged to a non-finite loss");
    }

    FieldSnapshot fields = snapshot_fields(problem, nets);
    if (problem.oracle) report.rms = rms_against_oracle(problem, fields);

    export_fields(fields, config.out_dir + "/fields.csv");
    export_report(report, config.out_dir + "/report.json");
    for (int k = 0; k < nets.net_count(); ++k)
        save_network_file(nets.net(k), config.out_dir + "/net_" + std::to_string(k) + ".json");

    return RunOutput{std::move(report), std::move(fields), std::move(nets)};
}

}  // namespace pinn
