#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pinn/autodiff.hpp"
#include "pinn/loss.hpp"
#include "pinn/problems.hpp"

namespace pinn {

/// Independent finite-difference oracles. These differentiate plain forward
/// evaluations (never the dual/backprop path) and exist to cross-check it.

/// Central differences of the displacement (hard BC applied): du with step
/// h, d2u with the 4-point cross stencil.
PointDerivatives fd_input_derivatives(const NetworkSet& nets, const Eigen::VectorXd& x,
                                      double step = 1e-4);

/// Central differences of the loss value over the flat parameter vector,
/// restricted to `indices` (all parameters when empty).
Eigen::VectorXd fd_parameter_gradient(const LossFunction& loss, const NetworkSet& nets,
                                      const std::vector<int>& indices = {}, double step = 1e-6);

/// Largest relative mismatch over components with magnitude above
/// `floor`; relative to max(|a_i|, |b_i|).
double max_relative_error(const Eigen::Ref<const Eigen::VectorXd>& a,
                          const Eigen::Ref<const Eigen::VectorXd>& b, double floor = 1e-8);

struct CheckOutcome {
    std::string name;
    bool pass = false;
    double worst = 0.0;   // worst observed error for the check
    double limit = 0.0;   // tolerance it was held to
    std::string note;
};

/// The gradient-verification and oracle suites behind `check`:
///  - first/second input derivatives vs. finite differences on random
///    networks at each benchmark topology;
///  - loss parameter gradients vs. finite differences for both loss types
///    on all three benchmarks at reduced point counts (random draws;
///    component subsets for the large nets);
///  - analytic-oracle self-consistency: equilibrium residual and enforced
///    traction conditions at random points, |error| <= 1e-12.
std::vector<CheckOutcome> run_verification_suite(std::uint64_t seed = 0xB10C5EEDULL,
                                                 int draws = 20);

/// Print one line per check; returns true when everything passed.
bool report_checks(const std::vector<CheckOutcome>& checks, std::ostream& os);

}  // namespace pinn
