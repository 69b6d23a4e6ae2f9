#include "splitmono/prox.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

namespace splitmono {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double soft_threshold(double v, double t) {
    if (v > t) return v - t;
    if (v < -t) return v + t;
    return 0.0;
}

}  // namespace

struct ProxFunction::Impl {
    Kind kind;
    Eigen::Index dim = 0;
    double scalar = 0.0;           // weight / gamma / factor
    Vector lo, hi;                 // box
    Eigen::MatrixXd Q;             // quadratic
    Vector q;
    std::shared_ptr<const Impl> inner;  // conjugate / translated / scaled
    Vector shift;

    double min_eig_Q = 0.0;  // quadratic strong convexity

    // cache of (Id + gamma Q) factorizations, keyed by gamma
    mutable std::mutex lu_mutex;
    mutable std::map<double, std::shared_ptr<Eigen::LLT<Eigen::MatrixXd>>> lu_cache;

    std::shared_ptr<Eigen::LLT<Eigen::MatrixXd>> quad_solver(double gamma) const {
        std::lock_guard<std::mutex> lock(lu_mutex);
        auto it = lu_cache.find(gamma);
        if (it != lu_cache.end()) return it->second;
        auto llt = std::make_shared<Eigen::LLT<Eigen::MatrixXd>>(
            Eigen::MatrixXd(Eigen::MatrixXd::Identity(dim, dim) + gamma * Q));
        if (lu_cache.size() > 32) lu_cache.clear();
        lu_cache.emplace(gamma, llt);
        return llt;
    }
};

ProxFunction ProxFunction::l1(Eigen::Index dim) {
    if (dim < 1) throw InvalidInput("l1: dim must be positive");
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::L1;
    impl->dim = dim;
    return ProxFunction(std::move(impl));
}

ProxFunction ProxFunction::squared_l2(Eigen::Index dim, double weight) {
    if (dim < 1) throw InvalidInput("squared_l2: dim must be positive");
    if (!(weight >= 0.0) || !std::isfinite(weight))
        throw InvalidInput("squared_l2: weight must be nonnegative");
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::SquaredL2;
    impl->dim = dim;
    impl->scalar = weight;
    return ProxFunction(std::move(impl));
}

ProxFunction ProxFunction::box(Vector lo, Vector hi) {
    if (lo.size() != hi.size() || lo.size() < 1) throw InvalidInput("box: bound dims disagree");
    if (((hi - lo).array() < 0.0).any()) throw InvalidInput("box: needs lo <= hi");
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::BoxIndicator;
    impl->dim = lo.size();
    impl->lo = std::move(lo);
    impl->hi = std::move(hi);
    return ProxFunction(std::move(impl));
}

ProxFunction ProxFunction::box(Eigen::Index dim, double lo, double hi) {
    return box(Vector::Constant(dim, lo), Vector::Constant(dim, hi));
}

ProxFunction ProxFunction::quadratic(Eigen::MatrixXd Q, Vector q) {
    if (Q.rows() != Q.cols() || Q.rows() != q.size())
        throw InvalidInput("quadratic: Q must be square and match q");
    require_finite(Q, "quadratic Q");
    require_finite(q, "quadratic q");
    const double asym = (Q - Q.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-10 * (1.0 + Q.cwiseAbs().maxCoeff()))
        throw InvalidInput("quadratic: Q not symmetric");
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::Quadratic;
    impl->dim = q.size();
    impl->Q = 0.5 * (Q + Q.transpose());
    impl->q = std::move(q);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(impl->Q, Eigen::EigenvaluesOnly);
    impl->min_eig_Q = es.eigenvalues().minCoeff();
    if (impl->min_eig_Q < -1e-10 * (1.0 + es.eigenvalues().cwiseAbs().maxCoeff()))
        throw InvalidInput("quadratic: Q not positive semidefinite");
    return ProxFunction(std::move(impl));
}

ProxFunction ProxFunction::elastic_net(Eigen::Index dim, double gamma) {
    if (dim < 1) throw InvalidInput("elastic_net: dim must be positive");
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
        throw InvalidInput("elastic_net: gamma must be nonnegative");
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::ElasticNet;
    impl->dim = dim;
    impl->scalar = gamma;
    return ProxFunction(std::move(impl));
}

ProxFunction ProxFunction::conjugate(ProxFunction inner) {
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::Conjugate;
    impl->dim = inner.dim();
    impl->inner = inner.impl_;
    return ProxFunction(std::move(impl));
}

ProxFunction ProxFunction::translated(ProxFunction inner, Vector shift) {
    if (shift.size() != inner.dim()) throw InvalidInput("translated: shift dim mismatch");
    require_finite(shift, "translated shift");
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::Translated;
    impl->dim = inner.dim();
    impl->inner = inner.impl_;
    impl->shift = std::move(shift);
    return ProxFunction(std::move(impl));
}

ProxFunction ProxFunction::scaled(ProxFunction inner, double factor) {
    if (!(factor > 0.0) || !std::isfinite(factor))
        throw InvalidInput("scaled: factor must be positive");
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::Scaled;
    impl->dim = inner.dim();
    impl->inner = inner.impl_;
    impl->scalar = factor;
    return ProxFunction(std::move(impl));
}

ProxFunction::Kind ProxFunction::kind() const { return impl_->kind; }
Eigen::Index ProxFunction::dim() const { return impl_->dim; }
double ProxFunction::scalar_param() const { return impl_->scalar; }
const Vector& ProxFunction::lo() const { return impl_->lo; }
const Vector& ProxFunction::hi() const { return impl_->hi; }
const Eigen::MatrixXd& ProxFunction::quad_matrix() const { return impl_->Q; }
const Vector& ProxFunction::quad_linear() const { return impl_->q; }
ProxFunction ProxFunction::inner() const {
    if (!impl_->inner) throw InvalidInput("inner: function is not a wrapper kind");
    return ProxFunction(impl_->inner);
}
const Vector& ProxFunction::shift() const { return impl_->shift; }

Vector ProxFunction::prox(double gamma, const Vector& x) const {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidInput("prox: gamma must be positive");
    if (x.size() != impl_->dim)
        throw DimError("prox: x has dim " + std::to_string(x.size()) + ", f expects " +
                       std::to_string(impl_->dim));
    switch (impl_->kind) {
        case Kind::L1: {
            Vector p(x.size());
            for (Eigen::Index i = 0; i < x.size(); ++i) p[i] = soft_threshold(x[i], gamma);
            return p;
        }
        case Kind::SquaredL2:
            return x / (1.0 + gamma * impl_->scalar);
        case Kind::BoxIndicator:
            return x.cwiseMax(impl_->lo).cwiseMin(impl_->hi);
        case Kind::Quadratic: {
            auto solver = impl_->quad_solver(gamma);
            return solver->solve(x - gamma * impl_->q);
        }
        case Kind::ElasticNet: {
            Vector p(x.size());
            const double shrink = 1.0 + gamma * impl_->scalar;
            for (Eigen::Index i = 0; i < x.size(); ++i)
                p[i] = soft_threshold(x[i], gamma) / shrink;
            return p;
        }
        case Kind::Conjugate:
            return conjugate_prox(ProxFunction(impl_->inner), gamma, x);
        case Kind::Translated:
            return impl_->shift + ProxFunction(impl_->inner).prox(gamma, x - impl_->shift);
        case Kind::Scaled:
            return ProxFunction(impl_->inner).prox(gamma * impl_->scalar, x);
    }
    throw InvalidInput("prox: unknown kind");
}

double ProxFunction::value(const Vector& x) const {
    if (x.size() != impl_->dim) throw DimError("value: dim mismatch");
    switch (impl_->kind) {
        case Kind::L1:
            return x.lpNorm<1>();
        case Kind::SquaredL2:
            return 0.5 * impl_->scalar * x.squaredNorm();
        case Kind::BoxIndicator: {
            const double slack = 1e-12 * (1.0 + x.cwiseAbs().maxCoeff());
            if (((x - impl_->hi).array() > slack).any() || ((impl_->lo - x).array() > slack).any())
                return kInf;
            return 0.0;
        }
        case Kind::Quadratic:
            return 0.5 * x.dot(impl_->Q * x) + impl_->q.dot(x);
        case Kind::ElasticNet:
            return x.lpNorm<1>() + 0.5 * impl_->scalar * x.squaredNorm();
        case Kind::Conjugate: {
            auto v = ProxFunction(impl_->inner).conjugate_value(x);
            if (!v) throw InvalidInput("value: conjugate has no closed form for this inner kind");
            return *v;
        }
        case Kind::Translated:
            return ProxFunction(impl_->inner).value(x - impl_->shift);
        case Kind::Scaled:
            return impl_->scalar * ProxFunction(impl_->inner).value(x);
    }
    throw InvalidInput("value: unknown kind");
}

std::optional<double> ProxFunction::conjugate_value(const Vector& u) const {
    if (u.size() != impl_->dim) throw DimError("conjugate_value: dim mismatch");
    switch (impl_->kind) {
        case Kind::L1: {
            // indicator of the unit sup-norm ball
            const double slack = 1e-10 * (1.0 + u.cwiseAbs().maxCoeff());
            return u.cwiseAbs().maxCoeff() <= 1.0 + slack ? 0.0 : kInf;
        }
        case Kind::SquaredL2:
            if (impl_->scalar <= 0.0) return std::nullopt;
            return 0.5 / impl_->scalar * u.squaredNorm();
        case Kind::BoxIndicator: {
            // support function of the box
            double s = 0.0;
            for (Eigen::Index i = 0; i < u.size(); ++i)
                s += std::max(impl_->lo[i] * u[i], impl_->hi[i] * u[i]);
            return s;
        }
        case Kind::Quadratic: {
            if (impl_->min_eig_Q <= 1e-12) return std::nullopt;
            Vector w = u - impl_->q;
            Eigen::LLT<Eigen::MatrixXd> llt(impl_->Q);
            return 0.5 * w.dot(llt.solve(w));
        }
        case Kind::ElasticNet: {
            if (impl_->scalar <= 0.0) {
                const double slack = 1e-10 * (1.0 + u.cwiseAbs().maxCoeff());
                return u.cwiseAbs().maxCoeff() <= 1.0 + slack ? 0.0 : kInf;
            }
            double s = 0.0;
            for (Eigen::Index i = 0; i < u.size(); ++i) {
                const double e = std::max(std::abs(u[i]) - 1.0, 0.0);
                s += e * e;
            }
            return 0.5 * s / impl_->scalar;
        }
        case Kind::Conjugate:
            // f** = f on this catalog
            return ProxFunction(impl_->inner).value(u);
        case Kind::Translated: {
            auto v = ProxFunction(impl_->inner).conjugate_value(u);
            if (!v) return std::nullopt;
            return *v + impl_->shift.dot(u);
        }
        case Kind::Scaled: {
            auto v = ProxFunction(impl_->inner).conjugate_value(u / impl_->scalar);
            if (!v) return std::nullopt;
            return impl_->scalar * *v;
        }
    }
    return std::nullopt;
}

double ProxFunction::strong_convexity() const {
    switch (impl_->kind) {
        case Kind::SquaredL2:
            return impl_->scalar;
        case Kind::Quadratic:
            return std::max(impl_->min_eig_Q, 0.0);
        case Kind::ElasticNet:
            return impl_->scalar;
        case Kind::Translated:
            return ProxFunction(impl_->inner).strong_convexity();
        case Kind::Scaled:
            return impl_->scalar * ProxFunction(impl_->inner).strong_convexity();
        default:
            return 0.0;
    }
}

Vector conjugate_prox(const ProxFunction& f, double gamma, const Vector& x) {
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw InvalidInput("conjugate_prox: gamma must be positive");
    return x - gamma * f.prox(1.0 / gamma, x / gamma);
}

}  // namespace splitmono
