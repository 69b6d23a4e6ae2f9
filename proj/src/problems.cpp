#include "splitmono/problems.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "splitmono/rng.hpp"

namespace splitmono {

CompositeProblem::CompositeProblem(ProxFunction f_, ProxFunction g_,
                                   std::optional<QuadraticForm> h_, DenseLinearMap L_,
                                   double gamma_f_)
    : f(std::move(f_)), g(std::move(g_)), h(std::move(h_)), L(std::move(L_)), gamma_f(gamma_f_) {
    if (f.dim() != L.cols()) throw DimError("composite: f dim vs L cols");
    if (g.dim() != L.rows()) throw DimError("composite: g dim vs L rows");
    if (h && (h->P.rows() != L.cols() || h->p.size() != L.cols()))
        throw DimError("composite: h dims vs L cols");
}

CocoerciveMap CompositeProblem::smooth_map() const {
    if (!h) return CocoerciveMap::zero(dim_h());
    return CocoerciveMap::affine(h->P, h->p);
}

double CompositeProblem::smooth_lipschitz() const {
    if (!h) return 0.0;
    return MetricOperator(h->P).max_eigenvalue();
}

InclusionProblem CompositeProblem::to_inclusion() const {
    return InclusionProblem(MonotoneOracle::subdifferential(f), MonotoneOracle::subdifferential(g),
                            smooth_map(), L);
}

double CompositeProblem::acc_modulus() const {
    double m = gamma_f;
    if (h) m += std::max(MetricOperator(h->P).min_eigenvalue(), 0.0);
    return m;
}

AccProblem CompositeProblem::to_acc() const {
    const double m = acc_modulus();
    if (!(m > 0.0))
        throw InvalidInput("composite: not admissible for the accelerated engine (modulus 0)");
    return AccProblem(MonotoneOracle::subdifferential(f), MonotoneOracle::subdifferential(g),
                      smooth_map(), L, m);
}

double CompositeProblem::primal_objective(const Vector& x) const {
    double v = f.value(x) + g.value(L.apply(x));
    if (h) v += h->value(x);
    return v;
}

std::optional<double> CompositeProblem::dual_objective(const Vector& v) const {
    const Vector w = -L.adjoint_apply(v);
    std::optional<double> fh_conj;
    if (!h) {
        fh_conj = f.conjugate_value(w);
    } else if (f.kind() == ProxFunction::Kind::Quadratic) {
        // (f + h)* in closed form when f + h is a positive definite quadratic
        Eigen::MatrixXd P = f.quad_matrix() + h->P;
        Vector p = f.quad_linear() + h->p;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() <= 1e-12) return std::nullopt;
        Eigen::LLT<Eigen::MatrixXd> llt(P);
        const Vector d = w - p;
        fh_conj = 0.5 * d.dot(llt.solve(d)) - h->c0;
    }
    if (!fh_conj || !std::isfinite(*fh_conj)) return std::nullopt;
    const auto g_conj = g.conjugate_value(v);
    if (!g_conj) return std::nullopt;
    return -*fh_conj - *g_conj;
}

std::pair<double, double> kkt_residual(const CompositeProblem& p, const Vector& x,
                                       const Vector& v) {
    return inclusion_kkt_residual(p.to_inclusion(), x, v);
}

namespace {

// random SPD matrix with smallest eigenvalue >= floor
Eigen::MatrixXd random_spd(Rng& rng, Eigen::Index n, double floor_eig) {
    Eigen::MatrixXd A = rng.gaussian_matrix(n, n);
    Eigen::MatrixXd S = A.transpose() * A / static_cast<double>(n);
    return S + floor_eig * Eigen::MatrixXd::Identity(n, n);
}

SolutionCertificate validate_certificate(const CompositeProblem& prob, Vector x_star,
                                         Vector v_star, SolutionCertificate::Provenance prov,
                                         double tol) {
    auto [rp, rd] = kkt_residual(prob, x_star, v_star);
    if (rp > tol || rd > tol)
        throw SolutionInvalid("generated certificate residuals " + std::to_string(rp) + ", " +
                                  std::to_string(rd) + " exceed " + std::to_string(tol),
                              rp, rd);
    SolutionCertificate cert;
    cert.x_star = std::move(x_star);
    cert.v_star = std::move(v_star);
    cert.kkt_primal = rp;
    cert.kkt_dual = rd;
    cert.provenance = prov;
    return cert;
}

}  // namespace

GeneratedProblem gen_quadratic(Eigen::Index dim_h, Eigen::Index dim_g, std::uint64_t seed,
                               double gamma_f, bool with_h) {
    if (dim_h < 1 || dim_h > 500 || dim_g < 1 || dim_g > 500)
        throw InvalidInput("gen_quadratic: dims must lie in [1, 500]");
    if (!(gamma_f >= 0.0)) throw InvalidInput("gen_quadratic: gamma_f must be nonnegative");
    Rng rng(seed ^ 0x9e3779b97f4a7c15ull);

    Eigen::MatrixXd Q = random_spd(rng, dim_h, gamma_f);
    Vector q = rng.gaussian_vector(dim_h);
    Eigen::MatrixXd R = random_spd(rng, dim_g, 0.5);
    Vector r = rng.gaussian_vector(dim_g);
    Eigen::MatrixXd Lmat = rng.gaussian_matrix(dim_g, dim_h) / std::sqrt(static_cast<double>(dim_g));

    std::optional<QuadraticForm> hform;
    if (with_h) {
        Eigen::MatrixXd D = rng.gaussian_matrix(dim_h, dim_h) / std::sqrt(static_cast<double>(dim_h));
        Vector d = rng.gaussian_vector(dim_h);
        hform = QuadraticForm{D.transpose() * D, -D.transpose() * d, 0.5 * d.squaredNorm()};
    }

    CompositeProblem prob(ProxFunction::quadratic(Q, q), ProxFunction::quadratic(R, r), hform,
                          DenseLinearMap(Lmat), gamma_f);

    // stationarity: (Q + P_h + L^T R L) x = -(q + p_h + L^T r), v = R L x + r
    Eigen::MatrixXd K = Q + Lmat.transpose() * R * Lmat;
    Vector rhs = -(q + Lmat.transpose() * r);
    if (hform) {
        K += hform->P;
        rhs -= hform->p;
    }
    Vector x_star = K.ldlt().solve(rhs);
    Vector v_star = R * (Lmat * x_star) + r;

    SolutionCertificate cert =
        validate_certificate(prob, std::move(x_star), std::move(v_star),
                             SolutionCertificate::Provenance::DenseKktSolve, 1e-10);
    return GeneratedProblem{std::move(prob), std::move(cert), seed,
                            "quadratic_" + std::to_string(dim_h) + "x" + std::to_string(dim_g) +
                                "_s" + std::to_string(seed)};
}

namespace {

// first differences stacked on sqrt(eps) Id; full column rank for eps > 0
Eigen::MatrixXd difference_stack(Eigen::Index n, double eps) {
    Eigen::MatrixXd Lmat = Eigen::MatrixXd::Zero(2 * n - 1, n);
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        Lmat(i, i) = -1.0;
        Lmat(i, i + 1) = 1.0;
    }
    for (Eigen::Index i = 0; i < n; ++i) Lmat(n - 1 + i, i) = std::sqrt(eps);
    return Lmat;
}

CompositeProblem make_en_tv(Eigen::Index n, double gamma_f, const Eigen::MatrixXd& D,
                            const Vector& b) {
    Eigen::MatrixXd Lmat = difference_stack(n, 0.25);
    QuadraticForm hform{D.transpose() * D, -D.transpose() * b, 0.5 * b.squaredNorm()};
    return CompositeProblem(ProxFunction::elastic_net(n, gamma_f),
                            ProxFunction::l1(2 * n - 1), hform, DenseLinearMap(Lmat), gamma_f);
}

SolutionCertificate long_run_certificate(const CompositeProblem& prob) {
    const InclusionProblem inc = prob.to_inclusion();
    const double c = 1.0;
    const double L_norm = operator_norm(prob.L);
    const double eta = 1.0 / std::max(prob.smooth_lipschitz(), 1e-12);
    // step size satisfying the cocoercive uniform-positivity hypothesis with margin 1
    const double inv_tau = c * L_norm * L_norm + 0.5 / eta + 1.0;
    const Eigen::Index nh = prob.dim_h();
    AdmmConfig cfg;
    cfg.c = c;
    cfg.M1 = MetricSchedule::constant(
        MetricOperator(inv_tau * Eigen::MatrixXd::Identity(nh, nh) -
                       c * prob.L.matrix().transpose() * prob.L.matrix()));
    cfg.M2 = MetricSchedule::zero(prob.dim_g());
    cfg.max_iters = 1000000;
    cfg.stop_tol = 1e-13;
    RunResult res = UnifiedEngine(inc, cfg).run(Vector::Zero(nh), Vector::Zero(prob.dim_g()),
                                                Vector::Zero(prob.dim_g()), nullptr,
                                                /*keep_trace=*/false);
    return validate_certificate(prob, res.final_state.x, res.final_state.y,
                                SolutionCertificate::Provenance::LongRunSolver, 1e-8);
}

}  // namespace

GeneratedProblem gen_elastic_net_tv(Eigen::Index n, std::uint64_t seed, double gamma_f) {
    if (n < 2 || n > 300) throw InvalidInput("gen_elastic_net_tv: n must lie in [2, 300]");
    if (!(gamma_f >= 0.0)) throw InvalidInput("gen_elastic_net_tv: gamma_f must be nonnegative");
    Rng rng(seed ^ 0xd1b54a32d192ed03ull);
    Eigen::MatrixXd D = rng.gaussian_matrix(n, n) / std::sqrt(static_cast<double>(n));
    // piecewise-constant target signal plus noise
    Vector signal(n);
    double level = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (i % (n / 4 + 1) == 0) level = 2.0 * rng.gaussian();
        signal[i] = level;
    }
    Vector b = D * signal + 0.1 * rng.gaussian_vector(n);
    CompositeProblem prob = make_en_tv(n, gamma_f, D, b);
    SolutionCertificate cert = long_run_certificate(prob);
    return GeneratedProblem{std::move(prob), std::move(cert), seed,
                            "elastic_net_tv_" + std::to_string(n) + "_s" + std::to_string(seed)};
}

GeneratedProblem gen_elastic_net_tv_zero(Eigen::Index n, double gamma_f) {
    if (n < 2 || n > 300) throw InvalidInput("gen_elastic_net_tv_zero: n must lie in [2, 300]");
    Eigen::MatrixXd D = Eigen::MatrixXd::Identity(n, n);
    Vector b = Vector::Zero(n);
    CompositeProblem prob = make_en_tv(n, gamma_f, D, b);
    SolutionCertificate cert = validate_certificate(
        prob, Vector::Zero(n), Vector::Zero(2 * n - 1),
        SolutionCertificate::Provenance::DenseKktSolve, 1e-12);
    return GeneratedProblem{std::move(prob), std::move(cert), 0,
                            "elastic_net_tv_zero_" + std::to_string(n)};
}

double strong_monotonicity_deficit(const AccProblem& p, int samples, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Vector> xs, us;
    for (int i = 0; i < samples; ++i) {
        const Vector w = 3.0 * rng.gaussian_vector(p.dim_h());
        Vector x = p.A.resolvent(1.0, w);
        Vector u = (w - x) + p.C.apply(x);  // u in (A + C)(x)
        xs.push_back(std::move(x));
        us.push_back(std::move(u));
    }
    double deficit = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = i + 1; j < xs.size(); ++j) {
            const Vector dx = xs[i] - xs[j];
            const Vector du = us[i] - us[j];
            deficit = std::min(deficit, dx.dot(du) - p.gamma * dx.squaredNorm());
        }
    return deficit;
}

}  // namespace splitmono
