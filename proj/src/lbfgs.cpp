#include "pinn/lbfgs.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace pinn {

void OptOptions::validate() const {
    if (memory < 1) throw std::invalid_argument("memory must be >= 1");
    if (!(wolfe_c1 > 0.0 && wolfe_c1 < wolfe_c2 && wolfe_c2 < 1.0))
        throw std::invalid_argument("need 0 < c1 < c2 < 1");
    if (max_iterations < 0) throw std::invalid_argument("max_iterations must be >= 0");
}

const char* converged_by_name(ConvergedBy c) {
    switch (c) {
        case ConvergedBy::GradTol: return "grad_tol";
        case ConvergedBy::RelLossTol: return "rel_loss_tol";
        case ConvergedBy::MaxIter: return "max_iter";
        case ConvergedBy::LineSearchFailure: return "line_search_failure";
    }
    return "unknown";
}

namespace {

constexpr int kMaxLineSearchEvals = 50;

struct LineSearchOut {
    bool ok = false;
    double alpha = 0.0;
    double f = 0.0;
    Eigen::VectorXd x;
    Eigen::VectorXd g;
};

double finite_or_inf(double v) {
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

/// Cubic minimizer of the interpolant through (a0,f0,d0) and (a1,f1,d1);
/// falls back to bisection when degenerate or outside the open interval.
double interpolate(double a0, double f0, double d0, double a1, double f1, double d1) {
    const double mid = 0.5 * (a0 + a1);
    if (!std::isfinite(f0) || !std::isfinite(f1) || !std::isfinite(d0) || !std::isfinite(d1))
        return mid;
    const double d1c = d0 + d1 - 3.0 * (f0 - f1) / (a0 - a1);
    const double disc = d1c * d1c - d0 * d1;
    if (disc < 0.0) return mid;
    const double d2c = (a1 > a0 ? 1.0 : -1.0) * std::sqrt(disc);
    double a = a1 - (a1 - a0) * (d1 + d2c - d1c) / (d1 - d0 + 2.0 * d2c);
    const double lo = std::min(a0, a1), hi = std::max(a0, a1);
    const double margin = 0.1 * (hi - lo);
    if (!std::isfinite(a) || a < lo + margin || a > hi - margin) return mid;
    return a;
}

/// Strong-Wolfe line search (Nocedal & Wright Alg. 3.5 with zoom 3.6).
LineSearchOut line_search(const Objective& obj, const Eigen::VectorXd& x0, double f0,
                          const Eigen::VectorXd& g0, const Eigen::VectorXd& p, double alpha_init,
                          double c1, double c2, int& total_evals) {
    LineSearchOut out;
    const double dphi0 = g0.dot(p);
    if (!(dphi0 < 0.0)) return out;

    int evals = 0;  // this search's own evaluation budget
    Eigen::VectorXd x(x0.size()), g(x0.size());
    auto phi = [&](double a, double& dphi) {
        x = x0 + a * p;
        double f = obj(x, g);
        ++evals;
        ++total_evals;
        f = finite_or_inf(f);
        dphi = std::isfinite(f) ? g.dot(p) : std::numeric_limits<double>::infinity();
        return f;
    };
    auto accept = [&](double a, double f) {
        out.ok = true;
        out.alpha = a;
        out.f = f;
        out.x = x0 + a * p;
        out.g = g;
        return out;
    };

    auto zoom = [&](double lo, double f_lo, double d_lo, double hi, double f_hi, double d_hi) {
        while (evals < kMaxLineSearchEvals) {
            if (std::abs(hi - lo) <= 1e-16 * std::max({1.0, std::abs(lo), std::abs(hi)})) break;
            const double a = interpolate(lo, f_lo, d_lo, hi, f_hi, d_hi);
            double d = 0.0;
            const double f = phi(a, d);
            if (f > f0 + c1 * a * dphi0 || f >= f_lo) {
                hi = a;
                f_hi = f;
                d_hi = d;
            } else {
                if (std::abs(d) <= -c2 * dphi0) return accept(a, f);
                if (d * (hi - lo) >= 0.0) {
                    hi = lo;
                    f_hi = f_lo;
                    d_hi = d_lo;
                }
                lo = a;
                f_lo = f;
                d_lo = d;
            }
        }
        return out;  // not ok
    };

    double a_prev = 0.0, f_prev = f0, d_prev = dphi0;
    double a = alpha_init;
    bool first = true;
    while (evals < kMaxLineSearchEvals) {
        double d = 0.0;
        const double f = phi(a, d);
        if (f > f0 + c1 * a * dphi0 || (!first && f >= f_prev))
            return zoom(a_prev, f_prev, d_prev, a, f, d);
        if (std::abs(d) <= -c2 * dphi0) return accept(a, f);
        if (d >= 0.0) return zoom(a, f, d, a_prev, f_prev, d_prev);
        a_prev = a;
        f_prev = f;
        d_prev = d;
        a *= 2.0;
        if (a > 1e20) break;
        first = false;
    }
    return out;
}

}  // namespace

OptResult minimize(const Objective& objective, const Eigen::VectorXd& x0, const OptOptions& opts) {
    opts.validate();
    const auto n = x0.size();

    OptResult res;
    res.x = x0;
    Eigen::VectorXd g(n);
    double f = objective(res.x, g);
    res.function_evals = 1;
    if (!std::isfinite(f) || !g.allFinite())
        throw std::invalid_argument("objective is not finite at the starting point");
    res.final_loss = f;
    res.loss_history.emplace_back(0, f);

    std::deque<Eigen::VectorXd> s_hist, y_hist;
    std::deque<double> rho_hist;
    double gamma = 1.0;

    Eigen::VectorXd q(n), p(n);
    std::vector<double> alpha_buf;

    auto two_loop = [&](const Eigen::VectorXd& grad) {
        q = grad;
        const int m = static_cast<int>(s_hist.size());
        alpha_buf.assign(static_cast<std::size_t>(m), 0.0);
        for (int i = m - 1; i >= 0; --i) {
            alpha_buf[static_cast<std::size_t>(i)] = rho_hist[static_cast<std::size_t>(i)] *
                                                     s_hist[static_cast<std::size_t>(i)].dot(q);
            q -= alpha_buf[static_cast<std::size_t>(i)] * y_hist[static_cast<std::size_t>(i)];
        }
        q *= gamma;
        for (int i = 0; i < m; ++i) {
            const double beta =
                rho_hist[static_cast<std::size_t>(i)] * y_hist[static_cast<std::size_t>(i)].dot(q);
            q += (alpha_buf[static_cast<std::size_t>(i)] - beta) *
                 s_hist[static_cast<std::size_t>(i)];
        }
        return -q;
    };

    if (g.lpNorm<Eigen::Infinity>() <= opts.grad_tol) {
        res.converged_by = ConvergedBy::GradTol;
        return res;
    }

    int stall = 0;
    for (int k = 1; k <= opts.max_iterations; ++k) {
        p = two_loop(g);
        double dphi0 = g.dot(p);
        if (!(dphi0 < 0.0)) {
            // Direction not a descent direction: drop the history, restart
            // from steepest descent.
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
            gamma = 1.0;
            p = -g;
            dphi0 = -g.squaredNorm();
        }
        const double a_init =
            s_hist.empty() ? std::min(1.0, 1.0 / std::max(1.0, g.lpNorm<Eigen::Infinity>()))
                           : 1.0;
        LineSearchOut ls = line_search(objective, res.x, f, g, p, a_init, opts.wolfe_c1,
                                       opts.wolfe_c2, res.function_evals);
        if (!ls.ok) {
            res.converged_by = ConvergedBy::LineSearchFailure;
            return res;
        }

        const Eigen::VectorXd s = ls.x - res.x;
        const Eigen::VectorXd y = ls.g - g;
        const double df = f - ls.f;
        res.x = ls.x;
        f = ls.f;
        g = ls.g;
        res.final_loss = f;
        res.iterations = k;
        res.loss_history.emplace_back(k, f);

        const double sy = s.dot(y);
        if (sy > 1e-10 * s.norm() * y.norm()) {
            s_hist.push_back(s);
            y_hist.push_back(y);
            rho_hist.push_back(1.0 / sy);
            gamma = sy / y.squaredNorm();
            if (static_cast<int>(s_hist.size()) > opts.memory) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }

        const double ginf = g.lpNorm<Eigen::Infinity>();
        if (opts.on_iteration) opts.on_iteration({k, f, ginf, res.function_evals});
        if (opts.on_progress && opts.log_every > 0 && k % opts.log_every == 0)
            opts.on_progress({k, f, ginf, res.function_evals});

        if (ginf <= opts.grad_tol) {
            res.converged_by = ConvergedBy::GradTol;
            return res;
        }
        if (std::abs(df) <= opts.rel_loss_tol * std::max(1.0, std::abs(f))) {
            if (++stall >= 3) {
                res.converged_by = ConvergedBy::RelLossTol;
                return res;
            }
        } else {
            stall = 0;
        }
    }
    res.converged_by = ConvergedBy::MaxIter;
    return res;
}

}  // namespace pinn
