#include "splitmono/hilbert.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <mutex>

namespace splitmono {

bool is_finite(const Vector& v) { return v.allFinite(); }
bool is_finite(const Eigen::MatrixXd& m) { return m.allFinite(); }

void require_finite(const Vector& v, const char* what) {
    if (!v.allFinite()) throw InvalidInput(std::string(what) + ": non-finite entries");
}

void require_finite(const Eigen::MatrixXd& m, const char* what) {
    if (!m.allFinite()) throw InvalidInput(std::string(what) + ": non-finite entries");
}

DenseLinearMap::DenseLinearMap(Eigen::MatrixXd coefficients) : mat_(std::move(coefficients)) {
    if (mat_.rows() < 1 || mat_.cols() < 1) throw InvalidInput("linear map: empty shape");
    require_finite(mat_, "linear map");
}

DenseLinearMap DenseLinearMap::identity(Eigen::Index n) {
    return DenseLinearMap(Eigen::MatrixXd::Identity(n, n));
}

Vector DenseLinearMap::apply(const Vector& x) const {
    if (x.size() != mat_.cols())
        throw DimError("apply: x has dim " + std::to_string(x.size()) + ", map expects " +
                       std::to_string(mat_.cols()));
    return mat_ * x;
}

Vector DenseLinearMap::adjoint_apply(const Vector& y) const {
    if (y.size() != mat_.rows())
        throw DimError("adjoint_apply: y has dim " + std::to_string(y.size()) +
                       ", map expects " + std::to_string(mat_.rows()));
    return mat_.transpose() * y;
}

double operator_norm(const DenseLinearMap& L) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(L.matrix());
    return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
}

struct MetricOperator::Impl {
    Eigen::MatrixXd mat;
    mutable std::once_flag eig_once;
    mutable double min_eig = 0.0;
    mutable double max_eig = 0.0;

    void ensure_eigs() const {
        std::call_once(eig_once, [this] {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mat, Eigen::EigenvaluesOnly);
            min_eig = es.eigenvalues().minCoeff();
            max_eig = es.eigenvalues().maxCoeff();
        });
    }
};

MetricOperator::MetricOperator(Eigen::MatrixXd coefficients) {
    if (coefficients.rows() != coefficients.cols() || coefficients.rows() < 1)
        throw InvalidInput("metric: must be square and nonempty");
    require_finite(coefficients, "metric");
    const double scale = coefficients.cwiseAbs().maxCoeff();
    const double asym = (coefficients - coefficients.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * (1.0 + scale))
        throw InvalidInput("metric: not symmetric (asymmetry " + std::to_string(asym) + ")");
    // Symmetrize exactly so downstream eigensolves see a symmetric matrix.
    auto impl = std::make_shared<Impl>();
    impl->mat = 0.5 * (coefficients + coefficients.transpose());
    impl_ = std::move(impl);
}

MetricOperator MetricOperator::identity(Eigen::Index n) {
    return MetricOperator(Eigen::MatrixXd::Identity(n, n));
}

MetricOperator MetricOperator::zero(Eigen::Index n) {
    return MetricOperator(Eigen::MatrixXd::Zero(n, n));
}

MetricOperator MetricOperator::scaled_identity(Eigen::Index n, double s) {
    return MetricOperator(s * Eigen::MatrixXd::Identity(n, n));
}

MetricOperator MetricOperator::diagonal(const Vector& d) {
    return MetricOperator(Eigen::MatrixXd(d.asDiagonal()));
}

Eigen::Index MetricOperator::dim() const { return impl_->mat.rows(); }
const Eigen::MatrixXd& MetricOperator::matrix() const { return impl_->mat; }

Vector MetricOperator::apply(const Vector& x) const {
    if (x.size() != dim())
        throw DimError("metric apply: x has dim " + std::to_string(x.size()) +
                       ", metric has dim " + std::to_string(dim()));
    return impl_->mat * x;
}

double MetricOperator::seminorm_sq(const Vector& x) const { return x.dot(apply(x)); }

double MetricOperator::min_eigenvalue() const {
    impl_->ensure_eigs();
    return impl_->min_eig;
}

double MetricOperator::max_eigenvalue() const {
    impl_->ensure_eigs();
    return impl_->max_eig;
}

double MetricOperator::spectral_radius() const {
    impl_->ensure_eigs();
    return std::max(std::abs(impl_->min_eig), std::abs(impl_->max_eig));
}

bool MetricOperator::is_psd(double tol) const {
    return min_eigenvalue() >= -tol * (1.0 + spectral_radius());
}

bool MetricOperator::is_scalar_identity(double* scale) const {
    const Eigen::MatrixXd& m = impl_->mat;
    const double s = m.diagonal().mean();
    const double tol = 1e-12 * (1.0 + std::abs(s));
    Eigen::MatrixXd dev = m - s * Eigen::MatrixXd::Identity(m.rows(), m.cols());
    if (dev.cwiseAbs().maxCoeff() > tol) return false;
    if (scale) *scale = s;
    return true;
}

MetricOperator gram(const DenseLinearMap& L) {
    return MetricOperator(L.matrix().transpose() * L.matrix());
}

MetricOperator cogram(const DenseLinearMap& L) {
    return MetricOperator(L.matrix() * L.matrix().transpose());
}

double seminorm_sq(const MetricOperator& U, const Vector& x) { return U.seminorm_sq(x); }

double min_eigenvalue_sym(const Eigen::MatrixXd& m) {
    Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

bool loewner_geq(const MetricOperator& U1, const MetricOperator& U2, double tol) {
    if (U1.dim() != U2.dim())
        throw DimError("loewner_geq: dims " + std::to_string(U1.dim()) + " vs " +
                       std::to_string(U2.dim()));
    return min_eigenvalue_sym(U1.matrix() - U2.matrix()) >= -tol;
}

bool in_P_alpha(const MetricOperator& U, double alpha, double tol) {
    if (alpha <= 0.0) throw InvalidInput("in_P_alpha: alpha must be positive");
    return U.min_eigenvalue() >= alpha - tol;
}

double loewner_tolerance(const MetricOperator& U, double base) {
    return base * (1.0 + U.spectral_radius());
}

MetricOperator metric_sum(const MetricOperator& a, const MetricOperator& b) {
    if (a.dim() != b.dim()) throw DimError("metric_sum");
    return MetricOperator(a.matrix() + b.matrix());
}

MetricOperator metric_diff(const MetricOperator& a, const MetricOperator& b) {
    if (a.dim() != b.dim()) throw DimError("metric_diff");
    return MetricOperator(a.matrix() - b.matrix());
}

MetricOperator metric_scale(const MetricOperator& a, double s) {
    return MetricOperator(s * a.matrix());
}

MetricOperator metric_add_scaled_identity(const MetricOperator& a, double s) {
    return MetricOperator(a.matrix() + s * Eigen::MatrixXd::Identity(a.dim(), a.dim()));
}

}  // namespace splitmono
