#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

namespace pinn {

/// Objective callback: fills grad and returns the loss at x.
using Objective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd& grad)>;

struct OptOptions {
    int memory = 10;              // history pairs
    int max_iterations = 5000;
    double grad_tol = 1e-8;       // infinity norm of the gradient
    // Relative per-step decrease threshold, checked over a 3-step window.
    // Default matches the reference L-BFGS-B ftol (factr 1e7 x machine eps).
    double rel_loss_tol = 2.2e-9;
    double wolfe_c1 = 1e-4;
    double wolfe_c2 = 0.9;
    int log_every = 10;           // progress callback cadence; 0 disables

    struct Progress {
        int iteration;
        double loss;
        double grad_inf_norm;
        int function_evals;
    };
    std::function<void(const Progress&)> on_progress;   // every log_every iterations
    std::function<void(const Progress&)> on_iteration;  // every accepted iteration

    void validate() const;
};

enum class ConvergedBy { GradTol, RelLossTol, MaxIter, LineSearchFailure };

const char* converged_by_name(ConvergedBy c);

struct OptResult {
    Eigen::VectorXd x;
    double final_loss = 0.0;
    int iterations = 0;       // accepted parameter updates
    int function_evals = 0;   // objective evaluations incl. line search
    ConvergedBy converged_by = ConvergedBy::MaxIter;
    std::vector<std::pair<int, double>> loss_history;  // (iteration, loss) per accepted step
};

/// Limited-memory BFGS with a strong-Wolfe line search (two-loop recursion,
/// implicit initial Hessian gamma = s.y / y.y). Every accepted step satisfies
///   f(x + a p) <= f(x) + c1 a g.p   and   |g(x + a p).p| <= c2 |g.p|.
/// Deterministic: identical (objective, x0, opts) produce identical iterates.
/// Throws std::invalid_argument on non-finite loss or gradient at x0; a
/// failed line search terminates with the best point found so far.
OptResult minimize(const Objective& objective, const Eigen::VectorXd& x0, const OptOptions& opts);

}  // namespace pinn
