#pragma once

// Synthetic problem instances min f(x) + h(x) + g(Lx) with certified reference
// solutions: dense optimality-system solves for all-quadratic pieces, long
// solver runs validated by independent fixed-point residuals otherwise.

#include <cstdint>
#include <optional>

#include "splitmono/accelerated.hpp"
#include "splitmono/unified_admm.hpp"

namespace splitmono {

// (1/2) x^T P x + p^T x + c0 with P symmetric PSD.
struct QuadraticForm {
    Eigen::MatrixXd P;
    Vector p;
    double c0 = 0.0;

    double value(const Vector& x) const { return 0.5 * x.dot(P * x) + p.dot(x) + c0; }
    Vector grad(const Vector& x) const { return P * x + p; }
};

struct CompositeProblem {
    ProxFunction f;                    // on H, strong convexity gamma_f >= 0
    ProxFunction g;                    // on G
    std::optional<QuadraticForm> h;    // smooth part; nullopt means h = 0
    DenseLinearMap L;
    double gamma_f = 0.0;

    CompositeProblem(ProxFunction f_, ProxFunction g_, std::optional<QuadraticForm> h_,
                     DenseLinearMap L_, double gamma_f_);

    Eigen::Index dim_h() const { return L.cols(); }
    Eigen::Index dim_g() const { return L.rows(); }

    CocoerciveMap smooth_map() const;  // gradient of h (zero map when h = 0)
    double smooth_lipschitz() const;   // lambda_max of h's matrix (0 when h = 0)

    InclusionProblem to_inclusion() const;
    // strong-monotonicity modulus gamma_f + lambda_min(h); must be positive
    AccProblem to_acc() const;
    double acc_modulus() const;

    double primal_objective(const Vector& x) const;
    // -(f+h)*(-L^T v) - g*(v) where closed forms exist (quadratic f/g/h, or
    // h = 0 with conjugable f); nullopt otherwise
    std::optional<double> dual_objective(const Vector& v) const;
};

struct SolutionCertificate {
    enum class Provenance { DenseKktSolve, LongRunSolver };
    Vector x_star;
    Vector v_star;
    double kkt_primal = 0.0;
    double kkt_dual = 0.0;
    Provenance provenance = Provenance::DenseKktSolve;
};

struct GeneratedProblem {
    CompositeProblem problem;
    SolutionCertificate certificate;
    std::uint64_t seed = 0;
    std::string name;
};

// Fixed-point residuals of the optimality system at (x, v) through unit
// resolvents; (0,0) exactly at primal-dual solutions.
std::pair<double, double> kkt_residual(const CompositeProblem& p, const Vector& x, const Vector& v);

// All-quadratic instance: f = (1/2)x^T Q x + q^T x with Q >= gamma_f Id,
// quadratic g, optional quadratic h, Gaussian L (full column rank when
// dim_g >= dim_h). Reference solution by one dense solve of the optimality
// system, validated to 1e-10.
GeneratedProblem gen_quadratic(Eigen::Index dim_h, Eigen::Index dim_g, std::uint64_t seed,
                               double gamma_f, bool with_h = true);

// f = ||.||_1 + (gamma_f/2)||.||^2, g = ||.||_1 composed with the first
// difference map stacked on sqrt(eps) Id rows (full column rank),
// h = (1/2)||Dx - b||^2. Reference solution by a long hypothesis-satisfying
// solver run, validated to 1e-8.
GeneratedProblem gen_elastic_net_tv(Eigen::Index n, std::uint64_t seed, double gamma_f);

// b = 0 variant whose solution is exactly the origin.
GeneratedProblem gen_elastic_net_tv_zero(Eigen::Index n, double gamma_f);

// Minimum over sampled graph pairs of <dx, du> - gamma ||dx||^2 for A + C;
// nonnegative (up to tolerance) when the claimed modulus is honest.
double strong_monotonicity_deficit(const AccProblem& p, int samples, std::uint64_t seed);

}  // namespace splitmono
