#include "splitmono/reductions.hpp"

#include <cmath>

namespace splitmono {

std::string reduction_name(ReductionKind k) {
    switch (k) {
        case ReductionKind::VuCondat:
            return "vu_condat";
        case ReductionKind::BCH:
            return "bch";
        case ReductionKind::ChambollePock:
            return "chambolle_pock";
        case ReductionKind::ClassicalADMM:
            return "classical_admm";
        case ReductionKind::VariableMetricADMM:
            return "variable_metric_admm";
        case ReductionKind::AccChambollePock:
            return "acc_chambolle_pock";
        case ReductionKind::AccClassicalADMM:
            return "acc_classical_admm";
    }
    return "?";
}

TrajectoryFn unified_trajectory(const InclusionProblem& p, const AdmmConfig& cfg) {
    return [p, cfg](const AdmmState& start, long n) {
        UnifiedEngine engine(p, cfg);
        Trace trace;
        trace.reserve(n + 1);
        trace.push_back(start);
        AdmmState s = start;
        for (long k = 0; k < n; ++k) {
            s = engine.step(s);
            trace.push_back(s);
        }
        return trace;
    };
}

TrajectoryFn accelerated_trajectory(const AccProblem& p, const ParamSchedule& sched,
                                    const AccMetricFamily& family) {
    return [p, sched, family](const AdmmState& start, long n) {
        AccEngine engine(p, sched, family);
        Trace trace;
        trace.reserve(n + 1);
        trace.push_back(start);
        AdmmState s = start;
        for (long k = 0; k < n; ++k) {
            s = engine.step(s);
            trace.push_back(s);
        }
        return trace;
    };
}

namespace {

AdmmConfig step_metric_config(const InclusionProblem& p, double tau, double c) {
    AdmmConfig cfg;
    cfg.c = c;
    const Eigen::Index n = p.dim_h();
    cfg.M1 = MetricSchedule::constant(
        MetricOperator(Eigen::MatrixXd::Identity(n, n) / tau -
                       c * p.L.matrix().transpose() * p.L.matrix()));
    cfg.M2 = MetricSchedule::zero(p.dim_g());
    return cfg;
}

// Shared direct loop for the resolvent-form primal-dual scheme. Emits states
// aligned with the engine's (x^k, z^k, y^k) indexing; z is recovered from the
// multiplier update.
Trace resolvent_primal_dual_trace(const InclusionProblem& p, double tau, double c,
                                  const AdmmState& start, long n) {
    Trace trace;
    trace.reserve(n + 1);
    trace.push_back(start);
    if (n == 0) return trace;
    // warm-up step equals the engine's first update with these metrics
    Vector x_cur = p.A.resolvent(
        tau, start.x - tau * p.C.apply(start.x) -
                 tau * p.L.adjoint_apply(start.y + c * (p.L.apply(start.x) - start.z)));
    Vector y_prev = start.y;
    for (long k = 1; k <= n; ++k) {
        Vector y_cur = p.B.inverse_resolvent(c, y_prev + c * p.L.apply(x_cur));
        Vector z_cur = p.L.apply(x_cur) - (y_cur - y_prev) / c;
        trace.push_back(AdmmState{k, x_cur, std::move(z_cur), y_cur});
        if (k < n) {
            Vector x_next = p.A.resolvent(
                tau, x_cur - tau * p.C.apply(x_cur) -
                         tau * p.L.adjoint_apply(2.0 * y_cur - y_prev));
            x_cur = std::move(x_next);
        }
        y_prev = std::move(y_cur);
    }
    return trace;
}

}  // namespace

Reduction build_vu_condat(const InclusionProblem& p, double tau, double c) {
    if (!(tau > 0.0) || !(c > 0.0)) throw InvalidInput("vu_condat: tau, c must be positive");
    const double eta = p.C.eta();
    if (p.C.is_zero() || !(eta > 0.0) || std::isinf(eta))
        throw InvalidInput("vu_condat: C must be cocoercive with finite positive eta");
    const double L2 = operator_norm(p.L) * operator_norm(p.L);
    const double lhs = 1.0 / tau - c * L2;
    const double rhs = 0.5 / eta;
    if (!(lhs > rhs))
        throw ConstraintViolated("1/tau - c*||L||^2 > 1/(2*eta)",
                                 "lhs = " + std::to_string(lhs) + ", rhs = " + std::to_string(rhs));
    Reduction red;
    red.kind = ReductionKind::VuCondat;
    red.config = step_metric_config(p, tau, c);
    red.engine = unified_trajectory(p, red.config);
    red.direct = [p, tau, c](const AdmmState& start, long n) {
        return resolvent_primal_dual_trace(p, tau, c, start, n);
    };
    return red;
}

Reduction build_bch(const InclusionProblem& p, double tau, double c) {
    if (!(tau > 0.0) || !(c > 0.0)) throw InvalidInput("bch: tau, c must be positive");
    if (!p.C.is_zero()) throw InvalidInput("bch: C must be the zero map");
    const double L2 = operator_norm(p.L) * operator_norm(p.L);
    if (!(c * tau * L2 < 1.0))
        throw ConstraintViolated("c*tau*||L||^2 < 1",
                                 "c*tau*||L||^2 = " + std::to_string(c * tau * L2));
    Reduction red;
    red.kind = ReductionKind::BCH;
    red.config = step_metric_config(p, tau, c);
    red.engine = unified_trajectory(p, red.config);
    red.direct = [p, tau, c](const AdmmState& start, long n) {
        return resolvent_primal_dual_trace(p, tau, c, start, n);
    };
    return red;
}

Reduction build_chambolle_pock(const CompositeProblem& comp, double tau, double c) {
    if (comp.h) throw InvalidInput("chambolle_pock: needs h = 0");
    if (!(tau > 0.0) || !(c > 0.0)) throw InvalidInput("chambolle_pock: tau, c must be positive");
    const double L2 = operator_norm(comp.L) * operator_norm(comp.L);
    if (!(c * tau * L2 < 1.0))
        throw ConstraintViolated("c*tau*||L||^2 < 1",
                                 "c*tau*||L||^2 = " + std::to_string(c * tau * L2));
    const InclusionProblem inc = comp.to_inclusion();
    Reduction red;
    red.kind = ReductionKind::ChambollePock;
    red.config = step_metric_config(inc, tau, c);
    red.engine = unified_trajectory(inc, red.config);
    const ProxFunction f = comp.f;
    const ProxFunction g = comp.g;
    const DenseLinearMap L = comp.L;
    red.direct = [f, g, L, tau, c](const AdmmState& start, long n) {
        Trace trace;
        trace.reserve(n + 1);
        trace.push_back(start);
        if (n == 0) return trace;
        Vector x_cur = f.prox(
            tau, start.x - tau * L.adjoint_apply(start.y + c * (L.apply(start.x) - start.z)));
        Vector y_prev = start.y;
        for (long k = 1; k <= n; ++k) {
            Vector y_cur = conjugate_prox(g, c, y_prev + c * L.apply(x_cur));
            Vector z_cur = L.apply(x_cur) - (y_cur - y_prev) / c;
            trace.push_back(AdmmState{k, x_cur, std::move(z_cur), y_cur});
            if (k < n)
                x_cur = f.prox(tau, x_cur - tau * L.adjoint_apply(2.0 * y_cur - y_prev));
            y_prev = std::move(y_cur);
        }
        return trace;
    };
    return red;
}

Reduction build_classical_admm(const CompositeProblem& comp, double c) {
    if (comp.h) throw InvalidInput("classical_admm: needs h = 0");
    if (!(c > 0.0)) throw InvalidInput("classical_admm: c must be positive");
    const InclusionProblem inc = comp.to_inclusion();
    Reduction red;
    red.kind = ReductionKind::ClassicalADMM;
    red.config.c = c;
    red.config.M1 = MetricSchedule::zero(comp.dim_h());
    red.config.M2 = MetricSchedule::zero(comp.dim_g());
    red.engine = unified_trajectory(inc, red.config);
    const ProxFunction f = comp.f;
    const ProxFunction g = comp.g;
    const DenseLinearMap L = comp.L;
    red.direct = [f, g, L, c](const AdmmState& start, long n) {
        if (f.kind() != ProxFunction::Kind::Quadratic)
            throw InvalidInput(
                "classical_admm direct path: x-subproblem needs quadratic f for a dense solve");
        Eigen::LDLT<Eigen::MatrixXd> xsolve(
            Eigen::MatrixXd(f.quad_matrix() + c * L.matrix().transpose() * L.matrix()));
        Trace trace;
        trace.reserve(n + 1);
        trace.push_back(start);
        AdmmState s = start;
        for (long k = 1; k <= n; ++k) {
            // argmin_x f(x) + (c/2)||Lx - z + y/c||^2
            Vector x1 = xsolve.solve(c * L.adjoint_apply(s.z - s.y / c) - f.quad_linear());
            // argmin_z g(z) + (c/2)||Lx1 - z + y/c||^2
            Vector z1 = g.prox(1.0 / c, L.apply(x1) + s.y / c);
            Vector y1 = s.y + c * (L.apply(x1) - z1);
            s = AdmmState{k, std::move(x1), std::move(z1), std::move(y1)};
            trace.push_back(s);
        }
        return trace;
    };
    return red;
}

AdmmConfig build_variable_metric_admm(const CompositeProblem& comp, double c, MetricSchedule M1,
                                      MetricSchedule M2) {
    if (M1.dim() != comp.dim_h() || M2.dim() != comp.dim_g())
        throw DimError("variable_metric_admm: metric dims");
    AdmmConfig cfg;
    cfg.c = c;
    cfg.M1 = std::move(M1);
    cfg.M2 = std::move(M2);
    return cfg;
}

AccReduction build_acc_chambolle_pock(const AccProblem& p, const ParamSchedule& sched) {
    AccReduction red;
    red.kind = ReductionKind::AccChambollePock;
    red.sched = sched;
    red.engine = accelerated_trajectory(p, sched, AccMetricFamily::choice_pd());
    red.direct = [p, sched](const AdmmState& start, long n) {
        Trace trace;
        trace.reserve(n + 1);
        trace.push_back(start);
        if (n == 0) return trace;
        const double lambda = sched.lambda();
        const double tau0 = sched.tau(0);
        const double sigma0 = sched.sigma(0);
        // first dual update from the raw value of the combined metric step
        Vector y_cur = p.B.inverse_resolvent(
            sigma0,
            start.y + sigma0 * p.L.apply(start.x - tau0 * (start.z + p.L.adjoint_apply(start.y))));
        Vector x_prev = start.x;
        for (long k = 0; k < n; ++k) {
            const double tau_k1 = sched.tau(k + 1);
            const double theta_k = sched.theta(k);
            Vector x_cur = p.A.resolvent(
                tau_k1 / lambda,
                x_prev + (tau_k1 / lambda) * (-p.L.adjoint_apply(y_cur) - p.C.apply(x_prev)));
            Vector z_cur =
                -p.L.adjoint_apply(y_cur) - (theta_k / tau_k1) * (x_cur - x_prev);
            trace.push_back(AdmmState{k + 1, x_cur, std::move(z_cur), y_cur});
            if (k + 1 < n) {
                const double sigma_k1 = sched.sigma(k + 1);
                Vector y_next = p.B.inverse_resolvent(
                    sigma_k1, y_cur + sigma_k1 * p.L.apply(x_cur + theta_k * (x_cur - x_prev)));
                y_cur = std::move(y_next);
            }
            x_prev = std::move(x_cur);
        }
        return trace;
    };
    return red;
}

AccAdmmReduction build_acc_classical_admm(const AccProblem& p, const ParamSchedule& sched,
                                          bool tau_id_variant, long horizon) {
    if (!p.C.is_zero()) throw InvalidInput("acc_classical_admm: C must be the zero map");
    if (std::abs(sched.lambda() - 1.0) > 1e-14)
        throw InvalidInput("acc_classical_admm: requires lambda = 1");
    AccAdmmReduction red;
    red.family = tau_id_variant ? AccMetricFamily::tau_id() : AccMetricFamily::zero();
    red.report = check_metric_family(red.family, sched, p.L, horizon);
    if (!red.report.preset_condition)
        throw ConstraintViolated(red.report.preset_condition_name,
                                 "metric family " + red.family.name());
    return red;
}

double equivalence_check(const TrajectoryFn& a, const TrajectoryFn& b, const AdmmState& start,
                         long n) {
    const Trace ta = a(start, n);
    const Trace tb = b(start, n);
    if (ta.size() != tb.size()) throw InvalidInput("equivalence: trajectory lengths differ");
    double dev = 0.0;
    for (std::size_t k = 0; k < ta.size(); ++k)
        dev = std::max(dev, state_distance(ta[k], tb[k]));
    return dev;
}

}  // namespace splitmono
