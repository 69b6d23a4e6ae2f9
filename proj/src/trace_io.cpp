#include "splitmono/trace_io.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace splitmono {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& rows, bool rate_columns) {
    os << "k,err_x,err_z,err_y,lyapunov,fejer_slack,kkt_primal,kkt_dual,wall_ns";
    if (rate_columns) os << ",lhs_rate,rhs_rate";
    os << "\n";
    for (const auto& r : rows) {
        os << r.k << ',' << format_g17(r.err_x) << ',' << format_g17(r.err_z) << ','
           << format_g17(r.err_y) << ',' << format_g17(r.lyapunov) << ','
           << format_g17(r.fejer_slack) << ',' << format_g17(r.kkt_primal) << ','
           << format_g17(r.kkt_dual) << ',' << r.wall_ns;
        if (rate_columns) {
            os << ',' << (r.lhs_rate ? format_g17(*r.lhs_rate) : "nan") << ','
               << (r.rhs_rate ? format_g17(*r.rhs_rate) : "nan");
        }
        os << "\n";
    }
}

std::vector<TraceRow> build_trace_rows(const InclusionProblem& p, const AdmmConfig& cfg,
                                       const std::vector<AdmmState>& trace,
                                       const ReferenceSolution& ref, FejerMode mode,
                                       const std::vector<long>& wall_ns) {
    std::vector<TraceRow> rows;
    rows.reserve(trace.size());
    const Vector Lx_star = p.L.apply(ref.x_star);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < trace.size(); ++i) {
        TraceRow r;
        r.k = trace[i].k;
        r.err_x = (trace[i].x - ref.x_star).norm();
        r.err_z = (trace[i].z - Lx_star).norm();
        r.err_y = (trace[i].y - ref.y_star).norm();
        r.lyapunov = lyapunov_value(p, cfg, trace[i], ref);
        r.fejer_slack = nan;
        if (i >= 1) {
            const bool needs_prev = (mode == FejerMode::CZeroIII);
            if (!needs_prev || i >= 2) {
                const AdmmState* prev = needs_prev ? &trace[i - 2] : nullptr;
                r.fejer_slack =
                    fejer_certificate(p, cfg, trace[i - 1], trace[i], ref, mode, prev).slack;
            }
        }
        auto [rp, rd] = inclusion_kkt_residual(p, trace[i].x, trace[i].y);
        r.kkt_primal = rp;
        r.kkt_dual = rd;
        r.wall_ns = i < wall_ns.size() ? wall_ns[i] : 0;
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<TraceRow> build_acc_trace_rows(const AccProblem& p, const ParamSchedule& sched,
                                           const AccMetricFamily& family,
                                           const std::vector<AdmmState>& trace,
                                           const Vector& x_star, const Vector& v_star,
                                           const std::vector<long>& wall_ns) {
    std::vector<TraceRow> rows;
    rows.reserve(trace.size());
    const InclusionProblem inc = p.to_inclusion();
    const Vector Lx_star = p.L.apply(x_star);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::optional<RateCertificate> rate;
    if (trace.size() >= 3) {
        try {
            rate = rate_certificate(p, sched, family, trace, x_star, v_star);
        } catch (const Error&) {
            rate = std::nullopt;  // reference pair not tight enough for the rate bound
        }
    }
    for (std::size_t i = 0; i < trace.size(); ++i) {
        TraceRow r;
        r.k = trace[i].k;
        r.err_x = (trace[i].x - x_star).norm();
        r.err_z = (trace[i].z - Lx_star).norm();
        r.err_y = (trace[i].y - v_star).norm();
        r.lyapunov = nan;
        r.fejer_slack = nan;
        auto [rp, rd] = inclusion_kkt_residual(inc, trace[i].x, trace[i].y);
        r.kkt_primal = rp;
        r.kkt_dual = rd;
        r.wall_ns = i < wall_ns.size() ? wall_ns[i] : 0;
        if (rate && i >= 2) {
            r.lhs_rate = rate->lhs[i - 2];
            r.rhs_rate = rate->rhs;
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_schedule_csv(std::ostream& os, const ParamSchedule& sched, long n) {
    os << "k,tau_k,sigma_k,theta_k,n_tau_n\n";
    sched.extend_to(n + 2);
    for (long k = 0; k <= n; ++k) {
        os << k << ',' << format_g17(sched.tau(k)) << ',' << format_g17(sched.sigma(k)) << ','
           << format_g17(sched.theta(k)) << ',' << format_g17(static_cast<double>(k) * sched.tau(k))
           << "\n";
    }
}

void write_deviation_csv(std::ostream& os, const std::vector<DeviationRow>& rows) {
    os << "reduction,problem,start,max_deviation,tol,pass\n";
    for (const auto& r : rows) {
        os << r.reduction << ',' << r.problem << ',' << r.start << ','
           << format_g17(r.max_deviation) << ',' << format_g17(r.tol) << ','
           << (r.pass ? "1" : "0") << "\n";
    }
}

}  // namespace splitmono
