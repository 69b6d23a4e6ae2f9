#pragma once

// CSV writers for solver traces, step-size schedules and reduction batteries.
// Floats are printed with 17 significant digits so parsing them back is exact.

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "splitmono/accelerated.hpp"
#include "splitmono/problems.hpp"

namespace splitmono {

std::string format_g17(double v);

struct TraceRow {
    long k = 0;
    double err_x = 0.0;       // ||x^k - x*||
    double err_z = 0.0;       // ||z^k - L x*||
    double err_y = 0.0;       // ||y^k - y*||
    double lyapunov = 0.0;
    double fejer_slack = 0.0;  // slack of the transition arriving at k (nan at k = 0)
    double kkt_primal = 0.0;
    double kkt_dual = 0.0;
    long wall_ns = 0;
    std::optional<double> lhs_rate;  // accelerated runs only
    std::optional<double> rhs_rate;
};

// header: k,err_x,err_z,err_y,lyapunov,fejer_slack,kkt_primal,kkt_dual,wall_ns[,lhs_rate,rhs_rate]
void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& rows, bool rate_columns);

std::vector<TraceRow> build_trace_rows(const InclusionProblem& p, const AdmmConfig& cfg,
                                       const std::vector<AdmmState>& trace,
                                       const ReferenceSolution& ref, FejerMode mode,
                                       const std::vector<long>& wall_ns = {});

std::vector<TraceRow> build_acc_trace_rows(const AccProblem& p, const ParamSchedule& sched,
                                           const AccMetricFamily& family,
                                           const std::vector<AdmmState>& trace,
                                           const Vector& x_star, const Vector& v_star,
                                           const std::vector<long>& wall_ns = {});

// header: k,tau_k,sigma_k,theta_k,n_tau_n
void write_schedule_csv(std::ostream& os, const ParamSchedule& sched, long n);

struct DeviationRow {
    std::string reduction;
    std::string problem;
    std::string start;
    double max_deviation = 0.0;
    double tol = 0.0;
    bool pass = false;
};

// header: reduction,problem,start,max_deviation,tol,pass
void write_deviation_csv(std::ostream& os, const std::vector<DeviationRow>& rows);

}  // namespace splitmono
