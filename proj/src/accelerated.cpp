#include "splitmono/accelerated.hpp"

#include <cmath>
#include <limits>

namespace splitmono {

AccProblem::AccProblem(MonotoneOracle a, MonotoneOracle b, CocoerciveMap c, DenseLinearMap l,
                       double gamma_)
    : A(std::move(a)), B(std::move(b)), C(std::move(c)), L(std::move(l)), gamma(gamma_) {
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw InvalidInput("acc problem: gamma must be positive");
    if (A.dim() != L.cols() || C.dim() != L.cols() || B.dim() != L.rows())
        throw DimError("acc problem: operator dims do not match L");
}

// ---- schedule ----------------------------------------------------------------

namespace {
double theta_of(double tau_next, double gamma, double mu, double lambda) {
    return 1.0 / std::sqrt(1.0 + tau_next * (2.0 * gamma - mu * tau_next) / lambda);
}
}  // namespace

ParamSchedule schedule_init(double gamma, double mu, double lambda, double tau1, double sigma0,
                            double L_norm) {
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw InvalidInput("schedule: gamma must be positive");
    if (!(mu >= 0.0) || !std::isfinite(mu)) throw InvalidInput("schedule: mu must be nonnegative");
    if (!(tau1 > 0.0) || !std::isfinite(tau1))
        throw InvalidInput("schedule: tau1 must be positive");
    if (!(sigma0 > 0.0) || !std::isfinite(sigma0))
        throw InvalidInput("schedule: sigma0 must be positive");
    if (!(L_norm >= 0.0) || !std::isfinite(L_norm))
        throw InvalidInput("schedule: L_norm must be nonnegative");
    if (!(mu * tau1 < 2.0 * gamma))
        throw ConstraintViolated("mu*tau1 < 2*gamma", "mu*tau1 = " + std::to_string(mu * tau1) +
                                                          ", 2*gamma = " + std::to_string(2.0 * gamma));
    if (!(lambda >= mu + 1.0))
        throw ConstraintViolated("lambda >= mu + 1", "lambda = " + std::to_string(lambda) +
                                                         ", mu + 1 = " + std::to_string(mu + 1.0));
    if (!(sigma0 * tau1 * L_norm * L_norm <= 1.0))
        throw ConstraintViolated("sigma0*tau1*||L||^2 <= 1",
                                 "value = " + std::to_string(sigma0 * tau1 * L_norm * L_norm));
    ParamSchedule s;
    s.gamma_ = gamma;
    s.mu_ = mu;
    s.lambda_ = lambda;
    s.sigma0_ = sigma0;
    s.L_norm_ = L_norm;
    const double theta0 = theta_of(tau1, gamma, mu, lambda);
    s.theta_ = {theta0};
    s.tau_ = {tau1 / theta0, tau1, theta0 * tau1};
    return s;
}

ParamSchedule ParamSchedule::constant(double tau, double lambda) {
    if (!(tau > 0.0)) throw InvalidInput("schedule: tau must be positive");
    ParamSchedule s;
    s.degenerate_ = true;
    s.gamma_ = 0.0;
    s.mu_ = 0.0;
    s.lambda_ = lambda;
    s.sigma0_ = 1.0 / tau;
    s.L_norm_ = 0.0;
    s.theta_ = {1.0};
    s.tau_ = {tau, tau, tau};
    return s;
}

void ParamSchedule::extend_to(long k) const {
    if (k < 0) throw InvalidInput("schedule: negative index");
    if (tau_.empty()) throw InvalidInput("schedule: not seeded");
    while (static_cast<long>(tau_.size()) <= k) {
        if (degenerate_) {
            theta_.push_back(1.0);
            tau_.push_back(tau_.back());
            continue;
        }
        // have tau up to index m; append tau_{m+1} = theta_{m-1} tau_m
        const long m = static_cast<long>(tau_.size()) - 1;
        const double th = theta_of(tau_[m], gamma_, mu_, lambda_);
        theta_.push_back(th);  // theta_{m-1}
        tau_.push_back(th * tau_[m]);
    }
}

double ParamSchedule::tau(long k) const {
    if (k < 0) throw InvalidInput("schedule: negative index");
    extend_to(k);
    return tau_[k];
}

double ParamSchedule::theta(long k) const {
    if (k < 0) throw InvalidInput("schedule: negative index");
    extend_to(k + 2);  // theta_k is derived from tau_{k+1}
    return theta_[k];
}

double ParamSchedule::sigma(long k) const {
    if (k < 0) throw InvalidInput("schedule: negative index");
    const double t = tau(k + 1);
    return sigma0_ * tau_[1] / t;
}

ScheduleStep schedule_step(const ParamSchedule& sched, long k) {
    return ScheduleStep{sched.theta(k), sched.tau(k + 2), sched.sigma(k + 1)};
}

double tau_asymptote(const ParamSchedule& sched, long n_max) {
    if (n_max < 1000) throw InvalidInput("tau_asymptote: n_max must be at least 1000");
    double t = sched.tau1();  // tau_n for n = 1
    for (long n = 1; n < n_max; ++n)
        t = t / std::sqrt(1.0 + t * (2.0 * sched.gamma() - sched.mu() * t) / sched.lambda());
    return static_cast<double>(n_max) * t;
}

// ---- metric families ----------------------------------------------------------

AccMetricFamily AccMetricFamily::choice_pd() {
    AccMetricFamily f;
    f.kind_ = Kind::ChoicePD;
    return f;
}
AccMetricFamily AccMetricFamily::inv_sigma_id() {
    AccMetricFamily f;
    f.kind_ = Kind::InvSigmaId;
    return f;
}
AccMetricFamily AccMetricFamily::zero() {
    AccMetricFamily f;
    f.kind_ = Kind::Zero;
    return f;
}
AccMetricFamily AccMetricFamily::tau_id() {
    AccMetricFamily f;
    f.kind_ = Kind::TauId;
    return f;
}
AccMetricFamily AccMetricFamily::custom(
    std::function<Eigen::MatrixXd(long, const ParamSchedule&, const Eigen::MatrixXd&)> gen) {
    if (!gen) throw InvalidInput("metric family: null generator");
    AccMetricFamily f;
    f.kind_ = Kind::Custom;
    f.gen_ = std::move(gen);
    return f;
}

Eigen::MatrixXd AccMetricFamily::matrix(long k, const ParamSchedule& sched,
                                        const Eigen::MatrixXd& LLt) const {
    const Eigen::Index m = LLt.rows();
    switch (kind_) {
        case Kind::ChoicePD:
            return Eigen::MatrixXd(Eigen::MatrixXd::Identity(m, m) / sched.sigma(k) -
                                   sched.tau(k) * LLt);
        case Kind::InvSigmaId:
            return Eigen::MatrixXd(Eigen::MatrixXd::Identity(m, m) / sched.sigma(k));
        case Kind::Zero:
            return Eigen::MatrixXd::Zero(m, m);
        case Kind::TauId:
            return Eigen::MatrixXd(sched.tau(k) * Eigen::MatrixXd::Identity(m, m));
        case Kind::Custom:
            return gen_(k, sched, LLt);
    }
    throw InvalidInput("metric family: unknown kind");
}

std::string AccMetricFamily::name() const {
    switch (kind_) {
        case Kind::ChoicePD:
            return "choice_pd";
        case Kind::InvSigmaId:
            return "inv_sigma_id";
        case Kind::Zero:
            return "zero";
        case Kind::TauId:
            return "tau_id";
        case Kind::Custom:
            return "custom";
    }
    return "?";
}

// ---- engine -------------------------------------------------------------------

AccEngine::AccEngine(AccProblem problem, ParamSchedule sched, AccMetricFamily family,
                     GenResolventOptions inner)
    : problem_(std::move(problem)),
      sched_(std::move(sched)),
      family_(std::move(family)),
      inner_(inner),
      LLt_(problem_.L.matrix() * problem_.L.matrix().transpose()),
      B_inv_(problem_.B.inverse()),
      A_inv_(problem_.A.inverse()) {}

AdmmState AccEngine::step(const AdmmState& s) const {
    const long k = s.k;
    const double tau_k = sched_.tau(k);
    const double tau_k1 = sched_.tau(k + 1);
    const double theta_k = sched_.theta(k);
    const double lambda = sched_.lambda();

    const Eigen::MatrixXd M2k = family_.matrix(k, sched_, LLt_);
    MetricOperator Uy(tau_k * LLt_ + M2k);
    double scalar = 0.0;
    if (Uy.is_scalar_identity(&scalar)) {
        if (scalar <= 0.0)
            throw MetricNotPositive("dual metric tau_k LL* + M2^k at k=" + std::to_string(k),
                                    scalar);
    } else if (Uy.min_eigenvalue() <= 1e-12 * (1.0 + Uy.spectral_radius())) {
        throw MetricNotPositive("dual metric tau_k LL* + M2^k at k=" + std::to_string(k),
                                Uy.min_eigenvalue());
    }
    const Vector ry = problem_.L.apply(s.x - tau_k * s.z) + M2k * s.y;
    const Vector y1 = MetricResolvent(Uy, B_inv_, inner_).solve(ry);

    const Vector Lty1 = problem_.L.adjoint_apply(y1);
    const Vector Cx = problem_.C.apply(s.x);
    const double gamma_prime = lambda / tau_k1;
    const Vector w = -Lty1 + gamma_prime * s.x - Cx;
    const Vector j = problem_.A.inverse_resolvent(gamma_prime, w);
    const Vector z1 = (theta_k / lambda - 1.0) * Lty1 + (theta_k / lambda) * Cx +
                      (theta_k / lambda) * j;

    Vector x1 = s.x + (tau_k1 / theta_k) * (-Lty1 - z1);
    return AdmmState{k + 1, std::move(x1), Vector(z1), Vector(y1)};
}

RunResult AccEngine::run(const Vector& x0, const Vector& z0, const Vector& y0, long iters,
                         bool keep_trace) const {
    require_finite(x0, "acc run x0");
    require_finite(z0, "acc run z0");
    require_finite(y0, "acc run y0");
    RunResult result;
    AdmmState state{0, x0, z0, y0};
    if (keep_trace) result.trace.push_back(state);
    for (long k = 0; k < iters; ++k) {
        state = step(state);
        if (keep_trace) result.trace.push_back(state);
    }
    result.converged = true;
    result.iterations = iters;
    result.final_state = std::move(state);
    return result;
}

AdmmState acc_step(const AccProblem& p, const ParamSchedule& sched, const AccMetricFamily& family,
                   const AdmmState& s) {
    return AccEngine(p, sched, family).step(s);
}

// ---- metric-family certification ----------------------------------------------

const ConditionVerdict* MetricFamilyReport::find(const std::string& name) const {
    for (const auto& c : conditions)
        if (c.name == name) return &c;
    return nullptr;
}

MetricFamilyReport check_metric_family(const AccMetricFamily& family, const ParamSchedule& sched,
                                       const DenseLinearMap& L, long horizon) {
    sched.extend_to(horizon + 2);
    const Eigen::MatrixXd LLt = L.matrix() * L.matrix().transpose();
    const Eigen::Index m = LLt.rows();
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(m, m);
    MetricFamilyReport rep;

    ConditionVerdict mon1;
    mon1.name = "mon1";
    mon1.witness = std::numeric_limits<double>::infinity();
    mon1.holds = true;
    ConditionVerdict mon2;
    mon2.name = "mon2";
    mon2.witness = std::numeric_limits<double>::infinity();
    mon2.holds = true;
    const double tol = 1e-9 * (1.0 + LLt.cwiseAbs().maxCoeff());

    for (long k = 0; k <= horizon; ++k) {
        const Eigen::MatrixXd M2k = family.matrix(k, sched, LLt);
        const Eigen::MatrixXd M2k1 = family.matrix(k + 1, sched, LLt);
        const double tk = sched.tau(k), tk1 = sched.tau(k + 1), tk2 = sched.tau(k + 2);
        const double l1 = min_eigenvalue_sym(tk * LLt + M2k - I / sched.sigma(k));
        if (l1 < mon1.witness) mon1.witness = l1;
        if (l1 < -tol && mon1.first_violation_k < 0) {
            mon1.holds = false;
            mon1.first_violation_k = k;
        }
        const Eigen::MatrixXd lhs = (tk / tk1) * LLt + M2k / tk1;
        const Eigen::MatrixXd rhs = (tk1 / tk2) * LLt + M2k1 / tk2;
        const double l2 = min_eigenvalue_sym(lhs - rhs);
        if (l2 < mon2.witness) mon2.witness = l2;
        if (l2 < -tol && mon2.first_violation_k < 0) {
            mon2.holds = false;
            mon2.first_violation_k = k;
        }
    }
    rep.conditions.push_back(mon1);
    rep.conditions.push_back(mon2);
    rep.mon1 = mon1.holds;
    rep.mon2 = mon2.holds;

    // preset sufficient conditions
    const double s0t1 = sched.sigma0() * sched.tau1();
    const double lmin_LLt = MetricOperator(LLt).min_eigenvalue();
    const double L_norm_sq = MetricOperator(LLt).max_eigenvalue();
    switch (family.kind()) {
        case AccMetricFamily::Kind::InvSigmaId: {
            rep.preset_condition_name = "mu*tau1 < gamma";
            rep.preset_condition = sched.tau1_stronger();
            break;
        }
        case AccMetricFamily::Kind::Zero: {
            rep.preset_condition_name = "LL* in P_{1/(sigma0*tau1)} and sigma0*tau1*||L||^2 = 1";
            const bool p_alpha = lmin_LLt >= 1.0 / s0t1 - tol;
            const bool tightness = std::abs(s0t1 * L_norm_sq - 1.0) <= 1e-9 * (1.0 + L_norm_sq);
            rep.preset_condition = p_alpha && tightness;
            break;
        }
        case AccMetricFamily::Kind::TauId: {
            rep.preset_condition_name =
                "sigma0*tau1 >= 1 or LL* in P_{(1-sigma0*tau1)/(sigma0*tau1)}";
            rep.preset_condition = (s0t1 >= 1.0 - 1e-12) ||
                                   (lmin_LLt >= (1.0 - s0t1) / s0t1 - tol);
            break;
        }
        default:
            rep.preset_condition_name = "none";
            rep.preset_condition = true;
            break;
    }
    if (family.kind() == AccMetricFamily::Kind::InvSigmaId ||
        family.kind() == AccMetricFamily::Kind::Zero ||
        family.kind() == AccMetricFamily::Kind::TauId) {
        // the presets' step-compatibility argument needs theta nondecreasing
        ConditionVerdict th;
        th.name = "theta_nondecreasing(mu*tau1 < gamma)";
        th.holds = sched.tau1_stronger();
        th.witness = sched.gamma() - sched.mu() * sched.tau1();
        rep.conditions.push_back(th);
    }
    return rep;
}

// ---- rate certificate -----------------------------------------------------------

RateCertificate rate_certificate(const AccProblem& p, const ParamSchedule& sched,
                                 const AccMetricFamily& family,
                                 const std::vector<AdmmState>& trace, const Vector& x_star,
                                 const Vector& v_star, double tol) {
    if (trace.size() < 3) throw InvalidInput("rate certificate: trace must hold states 0..n, n >= 2");
    // reference pair must satisfy the inclusion
    make_reference(p.to_inclusion(), x_star, v_star);

    const double lambda = sched.lambda();
    const double tau1 = sched.tau(1), tau2 = sched.tau(2);
    const Eigen::MatrixXd LLt = p.L.matrix() * p.L.matrix().transpose();
    const MetricOperator M2_tilde_1(tau1 * LLt + family.matrix(1, sched, LLt));

    const Vector& x0 = trace[0].x;
    const Vector& x1 = trace[1].x;
    const Vector& y1 = trace[1].y;
    const double L_norm_sq = MetricOperator(LLt).max_eigenvalue();

    RateCertificate cert;
    cert.rhs = lambda * (x1 - x_star).squaredNorm() / (tau2 * tau2) +
               M2_tilde_1.seminorm_sq(y1 - v_star) / tau2 +
               (x1 - x0).squaredNorm() / (tau1 * tau1) +
               2.0 / tau1 * p.L.apply(x1 - x0).dot(y1 - v_star);

    // y-coefficient (1 - sigma0 tau1 ||L||^2) / (sigma0 tau1); clamped at 0
    // against rounding when the product sits exactly on the constraint boundary
    const double s0t1 = sched.sigma0() * sched.tau1();
    const double coef_y = std::max((1.0 - s0t1 * L_norm_sq) / s0t1, 0.0);

    cert.min_slack = std::numeric_limits<double>::infinity();
    cert.holds = true;
    for (std::size_t n = 2; n < trace.size(); ++n) {
        const double lhs = lambda * (trace[n].x - x_star).squaredNorm() /
                               (sched.tau(static_cast<long>(n) + 1) * sched.tau(static_cast<long>(n) + 1)) +
                           coef_y * (trace[n].y - v_star).squaredNorm();
        cert.lhs.push_back(lhs);
        const double slack = cert.rhs - lhs;
        if (slack < cert.min_slack) {
            cert.min_slack = slack;
            cert.argmin_slack = static_cast<long>(n);
        }
        if (slack < -tol * (1.0 + std::abs(cert.rhs))) cert.holds = false;
    }
    cert.envelope_constant = std::sqrt(std::max(cert.rhs, 0.0) / lambda);
    return cert;
}

}  // namespace splitmono
