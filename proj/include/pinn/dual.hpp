#pragma once

#include <Eigen/Core>
#include <cmath>

namespace pinn {

/// Second-order forward-mode scalar carrying value, gradient and Hessian
/// with respect to D independent inputs. Arithmetic propagates exact
/// product/chain rules; Hessians are constructed entrywise-symmetric
/// (mirror assignment, never two different rounding paths), so
/// hess(i,j) == hess(j,i) holds bitwise.
template <int D>
struct Dual2 {
    using Vec = Eigen::Matrix<double, D, 1>;
    using Mat = Eigen::Matrix<double, D, D>;

    double val = 0.0;
    Vec grad = Vec::Zero();
    Mat hess = Mat::Zero();

    Dual2() = default;

    static Dual2 constant(double v) {
        Dual2 r;
        r.val = v;
        return r;
    }

    /// Independent variable along `axis`: unit gradient seed, zero Hessian.
    static Dual2 variable(double v, int axis) {
        Dual2 r;
        r.val = v;
        r.grad[axis] = 1.0;
        return r;
    }

    Dual2 operator-() const {
        Dual2 r;
        r.val = -val;
        r.grad = -grad;
        r.hess = -hess;
        return r;
    }

    Dual2& operator+=(const Dual2& o) {
        val += o.val;
        grad += o.grad;
        hess += o.hess;
        return *this;
    }
    Dual2& operator-=(const Dual2& o) {
        val -= o.val;
        grad -= o.grad;
        hess -= o.hess;
        return *this;
    }
    Dual2& operator+=(double s) {
        val += s;
        return *this;
    }
    Dual2& operator-=(double s) {
        val -= s;
        return *this;
    }
    Dual2& operator*=(double s) {
        val *= s;
        grad *= s;
        hess *= s;
        return *this;
    }

    friend Dual2 operator+(Dual2 a, const Dual2& b) { return a += b; }
    friend Dual2 operator-(Dual2 a, const Dual2& b) { return a -= b; }
    friend Dual2 operator+(Dual2 a, double s) { return a += s; }
    friend Dual2 operator+(double s, Dual2 a) { return a += s; }
    friend Dual2 operator-(Dual2 a, double s) { return a -= s; }
    friend Dual2 operator-(double s, const Dual2& a) { return (-a) += s; }
    friend Dual2 operator*(Dual2 a, double s) { return a *= s; }
    friend Dual2 operator*(double s, Dual2 a) { return a *= s; }
    friend Dual2 operator/(Dual2 a, double s) { return a *= (1.0 / s); }

    friend Dual2 operator*(const Dual2& a, const Dual2& b) {
        Dual2 r;
        r.val = a.val * b.val;
        r.grad = a.val * b.grad + b.val * a.grad;
        for (int i = 0; i < D; ++i) {
            for (int j = i; j < D; ++j) {
                const double h = a.val * b.hess(i, j) + b.val * a.hess(i, j) +
                                 a.grad[i] * b.grad[j] + a.grad[j] * b.grad[i];
                r.hess(i, j) = h;
                r.hess(j, i) = h;
            }
        }
        return r;
    }

    friend Dual2 operator/(const Dual2& a, const Dual2& b) { return a * reciprocal(b); }
    friend Dual2 operator/(double s, const Dual2& b) { return reciprocal(b) * s; }

    friend Dual2 reciprocal(const Dual2& b) {
        // 1/b: chain rule through r(v) = 1/v with r' = -1/v^2, r'' = 2/v^3.
        const double inv = 1.0 / b.val;
        const double d1 = -inv * inv;
        const double d2 = 2.0 * inv * inv * inv;
        return chain(b, inv, d1, d2);
    }

    friend Dual2 tanh(const Dual2& z) {
        // Hard-coded tanh derivatives: t' = 1 - t^2, t'' = -2 t (1 - t^2).
        const double t = std::tanh(z.val);
        const double t1 = 1.0 - t * t;
        const double t2 = -2.0 * t * t1;
        return chain(z, t, t1, t2);
    }

    friend Dual2 sin(const Dual2& z) {
        const double s = std::sin(z.val);
        const double c = std::cos(z.val);
        return chain(z, s, c, -s);
    }

    friend Dual2 cos(const Dual2& z) {
        const double c = std::cos(z.val);
        const double s = std::sin(z.val);
        return chain(z, c, -s, -c);
    }

    friend Dual2 exp(const Dual2& z) {
        const double e = std::exp(z.val);
        return chain(z, e, e, e);
    }

    /// Apply a scalar map f with given f(v), f'(v), f''(v) at v = z.val:
    ///   out.grad = f' g,  out.hess = f'' g g^T + f' H.
    friend Dual2 chain(const Dual2& z, double f, double f1, double f2) {
        Dual2 r;
        r.val = f;
        r.grad = f1 * z.grad;
        for (int i = 0; i < D; ++i) {
            for (int j = i; j < D; ++j) {
                const double h = f2 * z.grad[i] * z.grad[j] + f1 * z.hess(i, j);
                r.hess(i, j) = h;
                r.hess(j, i) = h;
            }
        }
        return r;
    }
};

}  // namespace pinn
