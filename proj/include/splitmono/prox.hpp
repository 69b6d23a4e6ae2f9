#pragma once

// Catalog of proper convex lsc functions with closed-form proximal maps.
// Conjugate proximal maps are evaluated through the Moreau decomposition,
// never through an explicit conjugate oracle.

#include <memory>
#include <optional>
#include <string>

#include "splitmono/hilbert.hpp"

namespace splitmono {

class ProxFunction {
public:
    enum class Kind { L1, SquaredL2, BoxIndicator, Quadratic, ElasticNet, Conjugate, Translated, Scaled };

    static ProxFunction l1(Eigen::Index dim);
    // (weight/2) ||x||^2, weight >= 0
    static ProxFunction squared_l2(Eigen::Index dim, double weight);
    // indicator of {lo <= x <= hi} componentwise
    static ProxFunction box(Vector lo, Vector hi);
    static ProxFunction box(Eigen::Index dim, double lo, double hi);
    // (1/2) x^T Q x + q^T x, Q symmetric PSD
    static ProxFunction quadratic(Eigen::MatrixXd Q, Vector q);
    // ||x||_1 + (gamma/2) ||x||^2
    static ProxFunction elastic_net(Eigen::Index dim, double gamma);
    static ProxFunction conjugate(ProxFunction inner);
    // x -> inner(x - shift)
    static ProxFunction translated(ProxFunction inner, Vector shift);
    // factor * inner, factor > 0
    static ProxFunction scaled(ProxFunction inner, double factor);

    Kind kind() const;
    Eigen::Index dim() const;

    // argmin_y f(y) + ||y - x||^2 / (2 gamma)
    Vector prox(double gamma, const Vector& x) const;

    // f(x); +infinity outside the effective domain (indicator kinds).
    double value(const Vector& x) const;

    // f*(u) where a closed form exists.
    std::optional<double> conjugate_value(const Vector& u) const;

    double strong_convexity() const;

    // parameter access (serialization)
    double scalar_param() const;              // weight / gamma / factor
    const Vector& lo() const;
    const Vector& hi() const;
    const Eigen::MatrixXd& quad_matrix() const;
    const Vector& quad_linear() const;
    ProxFunction inner() const;
    const Vector& shift() const;

private:
    struct Impl;
    explicit ProxFunction(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

// prox_{gamma f*}(x) = x - gamma prox_{f/gamma}(x/gamma)
Vector conjugate_prox(const ProxFunction& f, double gamma, const Vector& x);

}  // namespace splitmono
