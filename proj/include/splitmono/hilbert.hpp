#pragma once

// Finite-dimensional stand-in for the Hilbert-space layer: vectors, dense
// linear maps with adjoints, self-adjoint metrics with semi-norms, and the
// partial-order predicates used by the convergence certificates.

#include <Eigen/Dense>
#include <memory>

#include "splitmono/errors.hpp"

namespace splitmono {

using Vector = Eigen::VectorXd;

bool is_finite(const Vector& v);
bool is_finite(const Eigen::MatrixXd& m);
void require_finite(const Vector& v, const char* what);
void require_finite(const Eigen::MatrixXd& m, const char* what);

// Dense m x n real matrix acting H -> G, with its adjoint.
class DenseLinearMap {
public:
    explicit DenseLinearMap(Eigen::MatrixXd coefficients);

    static DenseLinearMap identity(Eigen::Index n);

    Eigen::Index rows() const { return mat_.rows(); }
    Eigen::Index cols() const { return mat_.cols(); }
    const Eigen::MatrixXd& matrix() const { return mat_; }

    Vector apply(const Vector& x) const;
    Vector adjoint_apply(const Vector& y) const;

    DenseLinearMap adjoint() const { return DenseLinearMap(mat_.transpose()); }
    DenseLinearMap negated() const { return DenseLinearMap(-mat_); }

private:
    Eigen::MatrixXd mat_;
};

// Largest singular value, computed by dense SVD.
double operator_norm(const DenseLinearMap& L);

// Symmetric matrix with lazily cached extreme eigenvalues. Instances are
// immutable values; copies share the cache.
class MetricOperator {
public:
    explicit MetricOperator(Eigen::MatrixXd coefficients);

    static MetricOperator identity(Eigen::Index n);
    static MetricOperator zero(Eigen::Index n);
    static MetricOperator scaled_identity(Eigen::Index n, double s);
    static MetricOperator diagonal(const Vector& d);

    Eigen::Index dim() const;
    const Eigen::MatrixXd& matrix() const;

    Vector apply(const Vector& x) const;
    double seminorm_sq(const Vector& x) const;

    double min_eigenvalue() const;
    double max_eigenvalue() const;
    double spectral_radius() const;

    bool is_psd(double tol = 1e-10) const;
    // True when the matrix is s*Id to within an absolute 1e-12 scale test.
    bool is_scalar_identity(double* scale = nullptr) const;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

// L^T L (n x n) and L L^T (m x m); symmetric PSD by construction.
MetricOperator gram(const DenseLinearMap& L);
MetricOperator cogram(const DenseLinearMap& L);

double seminorm_sq(const MetricOperator& U, const Vector& x);

// Minimum eigenvalue of the symmetric part of an arbitrary square matrix.
double min_eigenvalue_sym(const Eigen::MatrixXd& m);

// U1 >= U2 in the Loewner order: min eigenvalue of U1 - U2 >= -tol.
bool loewner_geq(const MetricOperator& U1, const MetricOperator& U2, double tol = 1e-9);

// U >= alpha * Id: min eigenvalue of U >= alpha - tol. Requires alpha > 0.
bool in_P_alpha(const MetricOperator& U, double alpha, double tol = 1e-9);

// Default comparison tolerance, scaled by the operand's spectral radius.
double loewner_tolerance(const MetricOperator& U, double base = 1e-9);

MetricOperator metric_sum(const MetricOperator& a, const MetricOperator& b);
MetricOperator metric_diff(const MetricOperator& a, const MetricOperator& b);
MetricOperator metric_scale(const MetricOperator& a, double s);
MetricOperator metric_add_scaled_identity(const MetricOperator& a, double s);

}  // namespace splitmono
