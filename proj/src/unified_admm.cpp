#include "splitmono/unified_admm.hpp"

#include <cmath>
#include <limits>

namespace splitmono {

InclusionProblem::InclusionProblem(MonotoneOracle a, MonotoneOracle b, CocoerciveMap c,
                                   DenseLinearMap l)
    : A(std::move(a)), B(std::move(b)), C(std::move(c)), L(std::move(l)) {
    if (A.dim() != L.cols())
        throw DimError("problem: A dim " + std::to_string(A.dim()) + " vs L cols " +
                       std::to_string(L.cols()));
    if (C.dim() != L.cols())
        throw DimError("problem: C dim " + std::to_string(C.dim()) + " vs L cols " +
                       std::to_string(L.cols()));
    if (B.dim() != L.rows())
        throw DimError("problem: B dim " + std::to_string(B.dim()) + " vs L rows " +
                       std::to_string(L.rows()));
}

MetricSchedule MetricSchedule::constant(MetricOperator M) {
    MetricSchedule s;
    s.dim_ = M.dim();
    s.constant_ = std::move(M);
    return s;
}

MetricSchedule MetricSchedule::zero(Eigen::Index dim) {
    return constant(MetricOperator::zero(dim));
}

MetricSchedule MetricSchedule::generator(Eigen::Index dim,
                                         std::function<Eigen::MatrixXd(long)> gen) {
    if (!gen) throw InvalidInput("metric schedule: null generator");
    MetricSchedule s;
    s.dim_ = dim;
    s.gen_ = std::move(gen);
    return s;
}

MetricOperator MetricSchedule::at(long k) const {
    if (constant_) return *constant_;
    if (!gen_) throw InvalidInput("metric schedule: empty");
    return MetricOperator(gen_(k));
}

double state_distance(const AdmmState& a, const AdmmState& b) {
    return std::sqrt((a.x - b.x).squaredNorm() + (a.z - b.z).squaredNorm() +
                     (a.y - b.y).squaredNorm());
}

namespace {
double state_norm(const AdmmState& s) {
    return std::sqrt(s.x.squaredNorm() + s.z.squaredNorm() + s.y.squaredNorm());
}
}  // namespace

std::pair<double, double> inclusion_kkt_residual(const InclusionProblem& p, const Vector& x,
                                                 const Vector& v) {
    if (x.size() != p.dim_h() || v.size() != p.dim_g())
        throw DimError("kkt residual: point dims do not match the problem");
    const Vector primal_arg = x - p.L.adjoint_apply(v) - p.C.apply(x);
    const double r_primal = (x - p.A.resolvent(1.0, primal_arg)).norm();
    const Vector dual_arg = v + p.L.apply(x);
    const double r_dual = (v - p.B.inverse_resolvent(1.0, dual_arg)).norm();
    return {r_primal, r_dual};
}

UnifiedEngine::UnifiedEngine(InclusionProblem problem, AdmmConfig config)
    : problem_(std::move(problem)), config_(std::move(config)) {
    if (!(config_.c > 0.0) || !std::isfinite(config_.c))
        throw InvalidInput("engine: c must be positive");
    if (config_.M1.dim() != problem_.dim_h())
        throw DimError("engine: M1 dim vs problem H dim");
    if (config_.M2.dim() != problem_.dim_g())
        throw DimError("engine: M2 dim vs problem G dim");
    cLtL_ = config_.c * (problem_.L.matrix().transpose() * problem_.L.matrix());
    if (config_.M1.is_constant()) {
        MetricOperator U1(cLtL_ + config_.M1.at(0).matrix());
        x_solver_.emplace(std::move(U1), problem_.A, config_.inner);
    }
    if (config_.M2.is_constant()) {
        MetricOperator U2 = metric_add_scaled_identity(config_.M2.at(0), config_.c);
        z_solver_.emplace(std::move(U2), problem_.B, config_.inner);
    }
}

AdmmState UnifiedEngine::step(const AdmmState& s) const {
    const double c = config_.c;
    const MetricOperator M1k = config_.M1.at(s.k);
    const MetricOperator M2k = config_.M2.at(s.k);

    const Vector rx = problem_.L.adjoint_apply(c * s.z - s.y) + M1k.apply(s.x) -
                      problem_.C.apply(s.x);
    Vector x1;
    if (x_solver_) {
        x1 = x_solver_->solve(rx);
    } else {
        MetricOperator U1(cLtL_ + M1k.matrix());
        x1 = MetricResolvent(std::move(U1), problem_.A, config_.inner).solve(rx);
    }

    const Vector Lx1 = problem_.L.apply(x1);
    const Vector rz = c * Lx1 + s.y + M2k.apply(s.z);
    Vector z1;
    if (z_solver_) {
        z1 = z_solver_->solve(rz);
    } else {
        MetricOperator U2 = metric_add_scaled_identity(M2k, c);
        z1 = MetricResolvent(std::move(U2), problem_.B, config_.inner).solve(rz);
    }

    Vector y1 = s.y + c * (Lx1 - z1);
    return AdmmState{s.k + 1, std::move(x1), std::move(z1), std::move(y1)};
}

RunResult UnifiedEngine::run(const Vector& x0, const Vector& z0, const Vector& y0,
                             const StepMonitor& monitor, bool keep_trace) const {
    require_finite(x0, "run x0");
    require_finite(z0, "run z0");
    require_finite(y0, "run y0");
    RunResult result;
    AdmmState state{0, x0, z0, y0};
    if (keep_trace) result.trace.push_back(state);
    for (long k = 0; k < config_.max_iters; ++k) {
        AdmmState next = step(state);
        if (monitor) monitor(next);
        if (keep_trace) result.trace.push_back(next);
        const double change = state_distance(next, state);
        bool stop = change <= config_.stop_tol * (1.0 + state_norm(state));
        if (!stop && config_.kkt_stop_tol) {
            auto [rp, rd] = inclusion_kkt_residual(problem_, next.x, next.y);
            stop = std::max(rp, rd) <= *config_.kkt_stop_tol;
        }
        state = std::move(next);
        if (stop) {
            result.converged = true;
            result.iterations = k + 1;
            result.final_state = std::move(state);
            return result;
        }
    }
    result.converged = false;
    result.iterations = config_.max_iters;
    result.final_state = std::move(state);
    return result;
}

AdmmState admm_step(const InclusionProblem& p, const AdmmConfig& cfg, const AdmmState& s) {
    return UnifiedEngine(p, cfg).step(s);
}

RunResult run(const InclusionProblem& p, const AdmmConfig& cfg, const Vector& x0, const Vector& z0,
              const Vector& y0, const UnifiedEngine::StepMonitor& monitor) {
    return UnifiedEngine(p, cfg).run(x0, z0, y0, monitor);
}

RunResult run_checked(const InclusionProblem& p, const AdmmConfig& cfg, const Vector& x0,
                      const Vector& z0, const Vector& y0) {
    RunResult r = UnifiedEngine(p, cfg).run(x0, z0, y0);
    if (!r.converged) {
        double last_change = 0.0;
        if (r.trace.size() >= 2)
            last_change = state_distance(r.trace[r.trace.size() - 1], r.trace[r.trace.size() - 2]);
        throw RunNoConvergence(last_change, std::move(r));
    }
    return r;
}

// ---- hypothesis checkers ----------------------------------------------------

const ConditionVerdict* HypothesisReport::find(const std::string& name) const {
    for (const auto& c : conditions)
        if (c.name == name) return &c;
    return nullptr;
}

namespace {

// Sweep min eigenvalue of a per-k symmetric matrix over k <= horizon.
// Constant schedules are evaluated once.
ConditionVerdict sweep_condition(const std::string& name, long horizon, bool constant,
                                 const std::function<Eigen::MatrixXd(long)>& mat, double tol) {
    ConditionVerdict v;
    v.name = name;
    v.witness = std::numeric_limits<double>::infinity();
    v.holds = true;
    const long last = constant ? 0 : horizon;
    for (long k = 0; k <= last; ++k) {
        const double lmin = min_eigenvalue_sym(mat(k));
        if (lmin < v.witness) v.witness = lmin;
        if (lmin < -tol && v.first_violation_k < 0) {
            v.holds = false;
            v.first_violation_k = k;
        }
    }
    return v;
}

double scale_tol(const MetricOperator& M) { return loewner_tolerance(M); }

}  // namespace

HypothesisReport check_hypotheses_thm_cocoercive(const InclusionProblem& p, const AdmmConfig& cfg,
                                                 long horizon) {
    if (p.C.is_zero() || !(p.C.eta() > 0.0) || std::isinf(p.C.eta()))
        throw InvalidInput("cocoercive checker: C must have a finite positive modulus");
    const double inv2eta = 1.0 / (2.0 * p.C.eta());
    const bool c1 = cfg.M1.is_constant();
    const bool c2 = cfg.M2.is_constant();
    const double tol1 = scale_tol(cfg.M1.at(0));
    const double tol2 = scale_tol(cfg.M2.at(0));
    HypothesisReport rep;

    const Eigen::Index n = cfg.M1.dim();
    auto shifted = [&](long k) {
        return Eigen::MatrixXd(cfg.M1.at(k).matrix() - inv2eta * Eigen::MatrixXd::Identity(n, n));
    };
    rep.conditions.push_back(sweep_condition("M1_shifted_psd", horizon, c1, shifted, tol1));
    rep.conditions.push_back(sweep_condition(
        "M1_monotone", horizon, c1,
        [&](long k) { return Eigen::MatrixXd(cfg.M1.at(k).matrix() - cfg.M1.at(k + 1).matrix()); },
        tol1));
    rep.conditions.push_back(sweep_condition(
        "M2_psd", horizon, c2, [&](long k) { return cfg.M2.at(k).matrix(); }, tol2));
    rep.conditions.push_back(sweep_condition(
        "M2_monotone", horizon, c2,
        [&](long k) { return Eigen::MatrixXd(cfg.M2.at(k).matrix() - cfg.M2.at(k + 1).matrix()); },
        tol2));

    // (I): the shifted family stays uniformly positive definite
    ConditionVerdict aI = *rep.find("M1_shifted_psd");
    aI.name = "I_M1_shifted_P_alpha";
    aI.holds = aI.witness > tol1;
    rep.conditions.push_back(aI);

    // (II): L^T L positive definite and M2 uniformly positive definite
    ConditionVerdict lcol;
    lcol.name = "II_LtL_P_alpha";
    lcol.witness = gram(p.L).min_eigenvalue();
    lcol.holds = lcol.witness > 1e-12 * (1.0 + gram(p.L).spectral_radius());
    rep.conditions.push_back(lcol);
    ConditionVerdict m2p = *rep.find("M2_psd");
    m2p.name = "II_M2_P_alpha2";
    m2p.holds = m2p.witness > tol2;
    rep.conditions.push_back(m2p);

    rep.base_ok = rep.find("M1_shifted_psd")->holds && rep.find("M1_monotone")->holds &&
                  rep.find("M2_psd")->holds && rep.find("M2_monotone")->holds;
    rep.assumption_I = rep.find("I_M1_shifted_P_alpha")->holds;
    rep.assumption_II = rep.find("II_LtL_P_alpha")->holds && rep.find("II_M2_P_alpha2")->holds;
    return rep;
}

HypothesisReport check_hypotheses_thm_C0(const InclusionProblem& p, const AdmmConfig& cfg,
                                         long horizon) {
    if (!p.C.is_zero()) throw InvalidInput("C0 checker: C must be the zero map");
    const bool c1 = cfg.M1.is_constant();
    const bool c2 = cfg.M2.is_constant();
    const double tol1 = scale_tol(cfg.M1.at(0));
    const double tol2 = scale_tol(cfg.M2.at(0));
    HypothesisReport rep;

    rep.conditions.push_back(sweep_condition(
        "M1_psd", horizon, c1, [&](long k) { return cfg.M1.at(k).matrix(); }, tol1));
    rep.conditions.push_back(sweep_condition(
        "M1_monotone", horizon, c1,
        [&](long k) { return Eigen::MatrixXd(cfg.M1.at(k).matrix() - cfg.M1.at(k + 1).matrix()); },
        tol1));
    rep.conditions.push_back(sweep_condition(
        "M2_psd", horizon, c2, [&](long k) { return cfg.M2.at(k).matrix(); }, tol2));
    rep.conditions.push_back(sweep_condition(
        "M2_monotone", horizon, c2,
        [&](long k) { return Eigen::MatrixXd(cfg.M2.at(k).matrix() - cfg.M2.at(k + 1).matrix()); },
        tol2));
    rep.conditions.push_back(sweep_condition(
        "III_M2_doubling", horizon, c2,
        [&](long k) {
            return Eigen::MatrixXd(2.0 * cfg.M2.at(k + 1).matrix() - cfg.M2.at(k).matrix());
        },
        tol2));

    ConditionVerdict aI = *rep.find("M1_psd");
    aI.name = "I_M1_P_alpha";
    aI.holds = aI.witness > tol1;
    rep.conditions.push_back(aI);

    ConditionVerdict lcol;
    lcol.name = "II_LtL_P_alpha";
    lcol.witness = gram(p.L).min_eigenvalue();
    lcol.holds = lcol.witness > 1e-12 * (1.0 + gram(p.L).spectral_radius());
    rep.conditions.push_back(lcol);
    ConditionVerdict m2p = *rep.find("M2_psd");
    m2p.name = "II_M2_P_alpha2";
    m2p.holds = m2p.witness > tol2;
    rep.conditions.push_back(m2p);

    rep.base_ok = rep.find("M1_psd")->holds && rep.find("M1_monotone")->holds &&
                  rep.find("M2_psd")->holds && rep.find("M2_monotone")->holds;
    rep.assumption_I = rep.find("I_M1_P_alpha")->holds;
    rep.assumption_II = rep.find("II_LtL_P_alpha")->holds && rep.find("II_M2_P_alpha2")->holds;
    rep.assumption_III = rep.find("II_LtL_P_alpha")->holds && rep.find("III_M2_doubling")->holds &&
                         rep.find("M2_monotone")->holds;
    return rep;
}

// ---- descent certificates ----------------------------------------------------

ReferenceSolution make_reference(const InclusionProblem& p, const Vector& x_star,
                                 const Vector& y_star, double tol) {
    auto [rp, rd] = inclusion_kkt_residual(p, x_star, y_star);
    if (rp > tol || rd > tol)
        throw SolutionInvalid("residuals " + std::to_string(rp) + ", " + std::to_string(rd) +
                                  " exceed " + std::to_string(tol),
                              rp, rd);
    return ReferenceSolution{x_star, y_star, rp, rd};
}

double lyapunov_value(const InclusionProblem& p, const AdmmConfig& cfg, const AdmmState& s,
                      const ReferenceSolution& ref) {
    const Vector Lx_star = p.L.apply(ref.x_star);
    const MetricOperator M1k = cfg.M1.at(s.k);
    const MetricOperator M2k = cfg.M2.at(s.k);
    return 0.5 * M1k.seminorm_sq(s.x - ref.x_star) +
           0.5 * metric_add_scaled_identity(M2k, cfg.c).seminorm_sq(s.z - Lx_star) +
           0.5 / cfg.c * (s.y - ref.y_star).squaredNorm();
}

FejerCertificate fejer_certificate(const InclusionProblem& p, const AdmmConfig& cfg,
                                   const AdmmState& s_k, const AdmmState& s_k1,
                                   const ReferenceSolution& ref, FejerMode mode,
                                   const AdmmState* s_km1) {
    if (s_k1.k != s_k.k + 1) throw InvalidInput("certificate: states are not consecutive");
    FejerCertificate cert;
    cert.k = s_k.k;
    cert.mode = mode;
    const double c = cfg.c;
    const Vector Lx_star = p.L.apply(ref.x_star);
    const MetricOperator M1k = cfg.M1.at(s_k.k);
    const MetricOperator M2k = cfg.M2.at(s_k.k);

    if (mode == FejerMode::CZeroIII) {
        if (s_k.k < 1 || s_km1 == nullptr)
            throw InvalidInput("certificate: the C=0 (III) inequality needs the previous state");
        if (s_km1->k != s_k.k - 1) throw InvalidInput("certificate: previous state index mismatch");
        const MetricOperator M2km1 = cfg.M2.at(s_k.k - 1);
        cert.lhs = lyapunov_value(p, cfg, s_k1, ref) + 0.5 * M2k.seminorm_sq(s_k1.z - s_k.z);
        const double head =
            lyapunov_value(p, cfg, s_k, ref) + 0.5 * M2km1.seminorm_sq(s_k.z - s_km1->z);
        cert.term_dx = 0.5 * M1k.seminorm_sq(s_k1.x - s_k.x);
        cert.term_z_vs_lx = 0.5 * c * (s_k1.z - s_k.z).squaredNorm();
        cert.term_dz = 0.5 / c * (s_k1.y - s_k.y).squaredNorm();
        cert.rhs = head - cert.term_dx - cert.term_z_vs_lx - cert.term_dz;
        cert.slack = cert.rhs - cert.lhs;
        return cert;
    }

    cert.lhs = lyapunov_value(p, cfg, s_k1, ref);
    const double head = lyapunov_value(p, cfg, s_k, ref);
    const Vector dx = s_k.x - s_k1.x;
    cert.term_z_vs_lx = 0.5 * c * (s_k.z - p.L.apply(s_k1.x)).squaredNorm();
    cert.term_dz = 0.5 * M2k.seminorm_sq(s_k.z - s_k1.z);
    if (mode == FejerMode::Cocoercive) {
        const double eta = p.C.eta();
        if (!(eta > 0.0) || std::isinf(eta))
            throw InvalidInput("certificate: cocoercive mode needs finite positive eta");
        cert.term_dx =
            0.5 * metric_add_scaled_identity(M1k, -0.5 / eta).seminorm_sq(dx);
        const Vector cres = eta * (p.C.apply(ref.x_star) - p.C.apply(s_k.x)) + 0.5 * dx;
        cert.term_cocoercive = cres.squaredNorm() / eta;
    } else {
        cert.term_dx = 0.5 * M1k.seminorm_sq(dx);
        cert.term_cocoercive = 0.0;
    }
    cert.rhs = head - cert.term_z_vs_lx - cert.term_dx - cert.term_dz - cert.term_cocoercive;
    cert.slack = cert.rhs - cert.lhs;
    return cert;
}

FejerCertificate fejer_certificate(const InclusionProblem& p, const AdmmConfig& cfg,
                                   const AdmmState& s_k, const AdmmState& s_k1, const Vector& x_star,
                                   const Vector& y_star, FejerMode mode, const AdmmState* s_km1) {
    return fejer_certificate(p, cfg, s_k, s_k1, make_reference(p, x_star, y_star), mode, s_km1);
}

std::vector<FejerCertificate> certify_trace(const InclusionProblem& p, const AdmmConfig& cfg,
                                            const std::vector<AdmmState>& trace,
                                            const ReferenceSolution& ref, FejerMode mode) {
    std::vector<FejerCertificate> certs;
    if (trace.size() < 2) return certs;
    const std::size_t start = (mode == FejerMode::CZeroIII) ? 1 : 0;
    for (std::size_t i = start; i + 1 < trace.size(); ++i) {
        const AdmmState* prev = (mode == FejerMode::CZeroIII) ? &trace[i - 1] : nullptr;
        certs.push_back(fejer_certificate(p, cfg, trace[i], trace[i + 1], ref, mode, prev));
    }
    return certs;
}

FejerMode default_fejer_mode(const InclusionProblem& p) {
    return p.C.is_zero() ? FejerMode::CZero : FejerMode::Cocoercive;
}

}  // namespace splitmono
