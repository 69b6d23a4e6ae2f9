#include "splitmono/operators.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

namespace splitmono {

struct MonotoneOracle::Impl {
    Kind kind;
    Eigen::Index dim = 0;
    // Linear
    Eigen::MatrixXd T;
    Vector offset;
    double sym_min_eig = 0.0;
    // Subdifferential
    std::shared_ptr<const ProxFunction> f;
    // Inverse
    std::shared_ptr<const MonotoneOracle> inner;
    // derived linear form for Inverse of invertible affine maps
    bool has_linear = false;

    mutable std::mutex lu_mutex;
    mutable std::map<double, std::shared_ptr<Eigen::PartialPivLU<Eigen::MatrixXd>>> lu_cache;

    std::shared_ptr<Eigen::PartialPivLU<Eigen::MatrixXd>> resolvent_solver(double gamma) const {
        std::lock_guard<std::mutex> lock(lu_mutex);
        auto it = lu_cache.find(gamma);
        if (it != lu_cache.end()) return it->second;
        auto lu = std::make_shared<Eigen::PartialPivLU<Eigen::MatrixXd>>(
            Eigen::MatrixXd(Eigen::MatrixXd::Identity(dim, dim) + gamma * T));
        if (lu_cache.size() > 32) lu_cache.clear();
        lu_cache.emplace(gamma, lu);
        return lu;
    }
};

MonotoneOracle MonotoneOracle::zero(Eigen::Index dim) {
    if (dim < 1) throw InvalidInput("zero oracle: dim must be positive");
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::Zero;
    impl->dim = dim;
    impl->T = Eigen::MatrixXd::Zero(dim, dim);
    impl->offset = Vector::Zero(dim);
    impl->has_linear = true;
    return MonotoneOracle(std::move(impl));
}

MonotoneOracle MonotoneOracle::linear(Eigen::MatrixXd T, Vector offset) {
    if (T.rows() != T.cols() || T.rows() != offset.size())
        throw InvalidInput("linear oracle: T must be square and match offset");
    require_finite(T, "linear oracle T");
    require_finite(offset, "linear oracle offset");
    const double sym_min = min_eigenvalue_sym(T);
    if (sym_min < -1e-10 * (1.0 + T.cwiseAbs().maxCoeff()))
        throw InvalidInput("linear oracle: T + T^T is not positive semidefinite");
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::Linear;
    impl->dim = T.rows();
    impl->T = std::move(T);
    impl->offset = std::move(offset);
    impl->sym_min_eig = sym_min;
    impl->has_linear = true;
    return MonotoneOracle(std::move(impl));
}

MonotoneOracle MonotoneOracle::linear(Eigen::MatrixXd T) {
    Vector zero_offset = Vector::Zero(T.rows());
    return linear(std::move(T), std::move(zero_offset));
}

MonotoneOracle MonotoneOracle::scaled_identity(Eigen::Index dim, double s) {
    return linear(s * Eigen::MatrixXd::Identity(dim, dim));
}

MonotoneOracle MonotoneOracle::subdifferential(ProxFunction f) {
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::Subdifferential;
    impl->dim = f.dim();
    impl->f = std::make_shared<const ProxFunction>(std::move(f));
    return MonotoneOracle(std::move(impl));
}

MonotoneOracle MonotoneOracle::inverse() const {
    if (impl_->kind == Kind::Inverse) return *impl_->inner;
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::Inverse;
    impl->dim = impl_->dim;
    impl->inner = std::make_shared<const MonotoneOracle>(*this);
    if (impl_->has_linear) {
        // (x -> T x + t)^{-1} is affine again when T is invertible
        Eigen::FullPivLU<Eigen::MatrixXd> lu(impl_->T);
        if (lu.isInvertible()) {
            Eigen::MatrixXd Tinv = lu.inverse();
            impl->T = Tinv;
            impl->offset = -Tinv * impl_->offset;
            impl->sym_min_eig = min_eigenvalue_sym(impl->T);
            impl->has_linear = true;
        }
    }
    return MonotoneOracle(std::move(impl));
}

MonotoneOracle::Kind MonotoneOracle::kind() const { return impl_->kind; }
Eigen::Index MonotoneOracle::dim() const { return impl_->dim; }

Vector MonotoneOracle::resolvent(double gamma, const Vector& x) const {
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw InvalidInput("resolvent: gamma must be positive");
    if (x.size() != impl_->dim)
        throw DimError("resolvent: x has dim " + std::to_string(x.size()) + ", oracle has dim " +
                       std::to_string(impl_->dim));
    switch (impl_->kind) {
        case Kind::Zero:
            return x;
        case Kind::Linear: {
            auto lu = impl_->resolvent_solver(gamma);
            return lu->solve(x - gamma * impl_->offset);
        }
        case Kind::Subdifferential:
            return impl_->f->prox(gamma, x);
        case Kind::Inverse:
            return impl_->inner->inverse_resolvent(gamma, x);
    }
    throw InvalidInput("resolvent: unknown kind");
}

Vector MonotoneOracle::inverse_resolvent(double gamma, const Vector& x) const {
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw InvalidInput("inverse_resolvent: gamma must be positive");
    if (impl_->kind == Kind::Inverse) return impl_->inner->resolvent(gamma, x);
    return x - gamma * resolvent(1.0 / gamma, x / gamma);
}

double MonotoneOracle::strong_monotonicity() const {
    switch (impl_->kind) {
        case Kind::Zero:
            return 0.0;
        case Kind::Linear:
            return std::max(impl_->sym_min_eig, 0.0);
        case Kind::Subdifferential:
            return impl_->f->strong_convexity();
        case Kind::Inverse:
            return impl_->has_linear ? std::max(impl_->sym_min_eig, 0.0) : 0.0;
    }
    return 0.0;
}

bool MonotoneOracle::has_linear_form() const { return impl_->has_linear; }

const Eigen::MatrixXd& MonotoneOracle::linear_T() const {
    if (!impl_->has_linear) throw InvalidInput("linear_T: oracle has no affine form");
    return impl_->T;
}

const Vector& MonotoneOracle::linear_offset() const {
    if (!impl_->has_linear) throw InvalidInput("linear_offset: oracle has no affine form");
    return impl_->offset;
}

double MonotoneOracle::membership_residual(const Vector& x, const Vector& u) const {
    return (x - resolvent(1.0, x + u)).norm();
}

const ProxFunction* MonotoneOracle::prox_function() const {
    return impl_->kind == Kind::Subdifferential ? impl_->f.get() : nullptr;
}

bool MonotoneOracle::is_zero() const { return impl_->kind == Kind::Zero; }

const MonotoneOracle* MonotoneOracle::inverse_inner() const {
    return impl_->kind == Kind::Inverse ? impl_->inner.get() : nullptr;
}

Vector resolvent(const MonotoneOracle& A, double gamma, const Vector& x) {
    return A.resolvent(gamma, x);
}

Vector inverse_resolvent(const MonotoneOracle& A, double gamma, const Vector& x) {
    return A.inverse_resolvent(gamma, x);
}

struct CocoerciveMap::Impl {
    Eigen::Index dim = 0;
    bool zero = true;
    Eigen::MatrixXd H;
    Vector b;
    double eta = 0.0;
    double mu = 0.0;
};

CocoerciveMap CocoerciveMap::zero(Eigen::Index dim) {
    if (dim < 1) throw InvalidInput("zero map: dim must be positive");
    auto impl = std::make_shared<Impl>();
    impl->dim = dim;
    impl->zero = true;
    impl->H = Eigen::MatrixXd::Zero(dim, dim);
    impl->b = Vector::Zero(dim);
    impl->eta = std::numeric_limits<double>::infinity();
    impl->mu = 0.0;
    return CocoerciveMap(std::move(impl));
}

CocoerciveMap CocoerciveMap::affine(Eigen::MatrixXd H, Vector b) {
    if (H.rows() != H.cols() || H.rows() != b.size())
        throw InvalidInput("affine map: H must be square and match b");
    require_finite(H, "affine map H");
    require_finite(b, "affine map b");
    const double scale = H.cwiseAbs().maxCoeff();
    if (scale == 0.0 && b.cwiseAbs().maxCoeff() == 0.0) return zero(H.rows());
    const double sym_min = min_eigenvalue_sym(H);
    if (sym_min < -1e-10 * (1.0 + scale))
        throw InvalidInput("affine map: H + H^T is not positive semidefinite (not monotone)");
    auto impl = std::make_shared<Impl>();
    impl->dim = H.rows();
    impl->zero = false;
    const double asym = (H - H.transpose()).cwiseAbs().maxCoeff();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(H);
    impl->mu = svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
    if (asym <= 1e-12 * (1.0 + scale)) {
        // symmetric PSD: gradient of a convex quadratic
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
        const double lmax = es.eigenvalues().maxCoeff();
        impl->eta = lmax > 0.0 ? 1.0 / lmax : std::numeric_limits<double>::infinity();
    } else {
        impl->eta = (sym_min > 0.0 && impl->mu > 0.0) ? sym_min / (impl->mu * impl->mu) : 0.0;
    }
    impl->H = std::move(H);
    impl->b = std::move(b);
    return CocoerciveMap(std::move(impl));
}

CocoerciveMap CocoerciveMap::affine(Eigen::MatrixXd H) {
    Vector b = Vector::Zero(H.rows());
    return affine(std::move(H), std::move(b));
}

Eigen::Index CocoerciveMap::dim() const { return impl_->dim; }

Vector CocoerciveMap::apply(const Vector& x) const {
    if (x.size() != impl_->dim) throw DimError("cocoercive map apply");
    if (impl_->zero) return Vector::Zero(impl_->dim);
    return impl_->H * x + impl_->b;
}

bool CocoerciveMap::is_zero() const { return impl_->zero; }
double CocoerciveMap::eta() const { return impl_->eta; }
double CocoerciveMap::mu() const { return impl_->mu; }
const Eigen::MatrixXd& CocoerciveMap::matrix() const { return impl_->H; }
const Vector& CocoerciveMap::offset() const { return impl_->b; }

namespace {

// U must be positive definite here; returns (lambda_min, lambda_max).
std::pair<double, double> require_positive_definite(const MetricOperator& U, const char* where) {
    const double lmin = U.min_eigenvalue();
    const double lmax = U.max_eigenvalue();
    if (lmin <= 1e-12 * (1.0 + std::abs(lmax)))
        throw MetricNotPositive(std::string(where) + " (min eigenvalue " + std::to_string(lmin) + ")",
                                lmin);
    return {lmin, lmax};
}

Vector fixed_point_solve(const MetricOperator& U, const MonotoneOracle& A, const Vector& r,
                         double rho, const GenResolventOptions& opts) {
    const double inv_rho = 1.0 / rho;
    Vector p = A.resolvent(inv_rho, inv_rho * r);
    double residual = std::numeric_limits<double>::infinity();
    for (long it = 0; it < opts.max_iters; ++it) {
        Vector next = A.resolvent(inv_rho, inv_rho * (r - U.apply(p)) + p);
        residual = (next - p).norm();
        p = std::move(next);
        if (residual <= opts.tol * (1.0 + p.norm())) return p;
    }
    throw NoConvergence("metric resolvent fixed point", residual, opts.max_iters);
}

}  // namespace

Vector generalized_resolvent(const MetricOperator& U, const MonotoneOracle& A, const Vector& r,
                             const GenResolventOptions& opts) {
    return MetricResolvent(U, A, opts).solve(r);
}

MetricResolvent::MetricResolvent(MetricOperator U, MonotoneOracle A, GenResolventOptions opts)
    : U_(std::move(U)), A_(std::move(A)), opts_(opts) {
    if (U_.dim() != A_.dim())
        throw DimError("metric resolvent: metric dim " + std::to_string(U_.dim()) +
                       " vs oracle dim " + std::to_string(A_.dim()));
    if (A_.has_linear_form()) {
        path_ = Path::DenseSolve;
        Eigen::MatrixXd M = U_.matrix() + A_.linear_T();
        // U + T must be invertible; its symmetric part is U + sym(T)
        const double sym_min = min_eigenvalue_sym(M);
        if (sym_min <= 1e-12 * (1.0 + M.cwiseAbs().maxCoeff()))
            throw MetricNotPositive("U + T has nonpositive symmetric part", sym_min);
        lu_ = std::make_shared<Eigen::PartialPivLU<Eigen::MatrixXd>>(std::move(M));
        return;
    }
    double s = 0.0;
    if (U_.is_scalar_identity(&s)) {
        if (s <= 0.0) throw MetricNotPositive("scalar metric is nonpositive", s);
        path_ = Path::ScalarMetric;
        rho_ = s;
        return;
    }
    auto [lmin, lmax] = require_positive_definite(U_, "metric resolvent");
    (void)lmin;
    path_ = Path::FixedPoint;
    rho_ = lmax;
}

Vector MetricResolvent::solve(const Vector& r) const {
    if (r.size() != U_.dim()) throw DimError("metric resolvent solve");
    switch (path_) {
        case Path::DenseSolve:
            return lu_->solve(r - A_.linear_offset());
        case Path::ScalarMetric:
            return A_.resolvent(1.0 / rho_, r / rho_);
        case Path::FixedPoint:
            return fixed_point_solve(U_, A_, r, rho_, opts_);
    }
    throw InvalidInput("metric resolvent: unknown path");
}

}  // namespace splitmono
