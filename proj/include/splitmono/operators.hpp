#pragma once

// Maximally monotone operator oracles: resolvents, inverse resolvents through
// the resolvent identity, cocoercive forward maps, and the metric resolvent
// (U + A)^{-1} that both solver engines are built on.

#include <functional>
#include <memory>

#include "splitmono/hilbert.hpp"
#include "splitmono/prox.hpp"

namespace splitmono {

class MonotoneOracle {
public:
    enum class Kind { Zero, Linear, Subdifferential, Inverse };

    static MonotoneOracle zero(Eigen::Index dim);
    // A(x) = T x + t; requires T + T^T PSD
    static MonotoneOracle linear(Eigen::MatrixXd T, Vector offset);
    static MonotoneOracle linear(Eigen::MatrixXd T);
    static MonotoneOracle scaled_identity(Eigen::Index dim, double s);
    static MonotoneOracle subdifferential(ProxFunction f);

    // A^{-1}; its resolvent is evaluated through the resolvent identity,
    // never by applying A^{-1} directly.
    MonotoneOracle inverse() const;

    Kind kind() const;
    Eigen::Index dim() const;

    // J_{gamma A}(x)
    Vector resolvent(double gamma, const Vector& x) const;

    // J_{gamma A^{-1}}(x) = x - gamma J_{A/gamma}(x/gamma)
    Vector inverse_resolvent(double gamma, const Vector& x) const;

    // strong-monotonicity modulus (0 when unknown)
    double strong_monotonicity() const;

    // A(x) = T x + t exposure, when A is single-valued affine
    bool has_linear_form() const;
    const Eigen::MatrixXd& linear_T() const;
    const Vector& linear_offset() const;

    // distance proxy for u in A(x): ||x - J_A(x + u)||; zero iff u in A(x)
    double membership_residual(const Vector& x, const Vector& u) const;

    const ProxFunction* prox_function() const;  // non-null for subdifferentials
    bool is_zero() const;
    const MonotoneOracle* inverse_inner() const;  // non-null for Inverse kind

private:
    struct Impl;
    explicit MonotoneOracle(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

// Single-valued monotone map with either a cocoercivity modulus eta (gradients
// of smooth convex functions) or just a Lipschitz modulus mu (e.g. skew maps).
class CocoerciveMap {
public:
    static CocoerciveMap zero(Eigen::Index dim);
    // C(x) = H x + b with H + H^T PSD. eta is inferred: 1/lambda_max for
    // symmetric H, lambda_min(sym)/||H||^2 otherwise (0 if that is not positive).
    static CocoerciveMap affine(Eigen::MatrixXd H, Vector b);
    static CocoerciveMap affine(Eigen::MatrixXd H);

    Eigen::Index dim() const;
    Vector apply(const Vector& x) const;
    bool is_zero() const;
    // cocoercivity modulus; +infinity for the zero map, 0 when not cocoercive
    double eta() const;
    // Lipschitz modulus
    double mu() const;
    const Eigen::MatrixXd& matrix() const;
    const Vector& offset() const;

private:
    struct Impl;
    explicit CocoerciveMap(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

Vector resolvent(const MonotoneOracle& A, double gamma, const Vector& x);
Vector inverse_resolvent(const MonotoneOracle& A, double gamma, const Vector& x);

struct GenResolventOptions {
    double tol = 1e-12;
    long max_iters = 10000;
};

// p = (U + A)^{-1} r, i.e. the unique p with r - U p in A(p).
//
// Dispatch: affine A -> one dense solve of (U + T) p = r - t; U = rho*Id ->
// p = J_{A/rho}(r/rho); otherwise U must be positive definite and a damped
// fixed point p <- J_{A/rho}((r - U p + rho p)/rho), rho = lambda_max(U), is
// run until the update norm falls below tol*(1+||p||).
Vector generalized_resolvent(const MetricOperator& U, const MonotoneOracle& A, const Vector& r,
                             const GenResolventOptions& opts = {});

// Same, but reuses precomputed solver state across calls with the same U.
class MetricResolvent {
public:
    MetricResolvent(MetricOperator U, MonotoneOracle A, GenResolventOptions opts = {});
    Vector solve(const Vector& r) const;
    const MetricOperator& metric() const { return U_; }

private:
    MetricOperator U_;
    MonotoneOracle A_;
    GenResolventOptions opts_;
    enum class Path { DenseSolve, ScalarMetric, FixedPoint } path_;
    std::shared_ptr<Eigen::PartialPivLU<Eigen::MatrixXd>> lu_;
    double rho_ = 0.0;  // scalar metric value or lambda_max for the fixed point
};

}  // namespace splitmono
