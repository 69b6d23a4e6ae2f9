#include "oracles.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <functional>

#include <splitmono/errors.hpp>

namespace splitmono::testing {

double prox_objective(const ProxFunction& f, double gamma, const Vector& x, const Vector& y) {
    return f.value(y) + (y - x).squaredNorm() / (2.0 * gamma);
}

namespace {

// golden-section search on a convex 1-d function (tolerates +inf values)
double golden_min(const std::function<double(double)>& phi, double lo, double hi, int iters) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = phi(c), fd = phi(d);
    for (int i = 0; i < iters; ++i) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = phi(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = phi(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

Vector numeric_prox_separable(const ProxFunction& f, double gamma, const Vector& x) {
    Vector p = x;
    // two sweeps; for separable f the first one already decouples exactly
    for (int sweep = 0; sweep < 2; ++sweep) {
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            const double radius = std::abs(x[i]) + 10.0 * gamma + 10.0;
            auto phi = [&](double t) {
                Vector y = p;
                y[i] = t;
                return prox_objective(f, gamma, x, y);
            };
            p[i] = golden_min(phi, x[i] - radius, x[i] + radius, 90);
        }
    }
    return p;
}

Vector prox_grad_minimize(const ProxFunction& f, const Eigen::MatrixXd& P, const Vector& p,
                          double tol, long max_iters) {
    if (P.rows() != P.cols() || P.rows() != p.size() || p.size() != f.dim())
        throw DimError("prox_grad_minimize");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P, Eigen::EigenvaluesOnly);
    const double lip = std::max(es.eigenvalues().maxCoeff(), 1e-12);
    const double step = 1.0 / lip;

    Vector u = f.prox(step, -step * p);  // start from one step at the origin
    Vector v = u;
    double t = 1.0;
    for (long it = 0; it < max_iters; ++it) {
        Vector grad_v = P * v + p;
        Vector u_next = f.prox(step, v - step * grad_v);
        // fixed-point residual of the plain prox-gradient map at u_next
        Vector grad_u = P * u_next + p;
        const double res = (u_next - f.prox(step, u_next - step * grad_u)).norm();
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        Vector v_next = u_next + ((t - 1.0) / t_next) * (u_next - u);
        // monotone restart
        if ((u_next - u).dot(v - u_next) > 0.0) {
            v_next = u_next;
            t = 1.0;
        } else {
            t = t_next;
        }
        u = std::move(u_next);
        v = std::move(v_next);
        if (res <= tol * (1.0 + u.norm())) return u;
    }
    return u;
}

}  // namespace splitmono::testing
