#pragma once

// Dynamic-step-size splitting for strongly monotone A + C: the coupled
// (theta, tau, sigma) recursions, the admissible dual-metric families, the
// solver itself, and the O(1/n) rate certificate.

#include <functional>
#include <string>
#include <vector>

#include "splitmono/unified_admm.hpp"

namespace splitmono {

struct AccProblem {
    MonotoneOracle A;  // on H
    MonotoneOracle B;  // on G
    CocoerciveMap C;   // monotone, mu-Lipschitz (possibly zero)
    DenseLinearMap L;  // H -> G
    double gamma;      // strong-monotonicity modulus of A + C, > 0

    AccProblem(MonotoneOracle a, MonotoneOracle b, CocoerciveMap c, DenseLinearMap l, double gamma_);
    Eigen::Index dim_h() const { return L.cols(); }
    Eigen::Index dim_g() const { return L.rows(); }
    InclusionProblem to_inclusion() const { return InclusionProblem(A, B, C, L); }
};

// Scalar step-size ledger. Seeded from (gamma, mu, lambda, tau_1, sigma_0) and
// extended by
//   theta_k   = 1 / sqrt(1 + tau_{k+1} (2 gamma - mu tau_{k+1}) / lambda)
//   tau_{k+2} = theta_k tau_{k+1}
//   sigma_k   = sigma_0 tau_1 / tau_{k+1}   (keeps tau_{k+1} sigma_k constant)
// Index origin: tau_1 is the seed; tau_0 := tau_1 / theta_0 (equivalently
// theta_{-1} := theta_0) so tau_{k+1} = theta_{k-1} tau_k holds for every
// k >= 0, which the k = 0 metric conditions rely on.
class ParamSchedule {
public:
    double gamma() const { return gamma_; }
    double mu() const { return mu_; }
    double lambda() const { return lambda_; }
    double tau1() const { return tau(1); }
    double sigma0() const { return sigma0_; }
    double L_norm() const { return L_norm_; }

    double tau(long k) const;
    double sigma(long k) const;
    double theta(long k) const;
    void extend_to(long k) const;  // make tau(0..k) available

    // mu tau_1 < gamma, the stronger seed condition making theta nondecreasing
    bool tau1_stronger() const { return mu_ * tau_[1] < gamma_; }

    // Degenerate ledger with theta = 1, tau = sigma^{-1} = constant; used for
    // structural cross-checks, bypasses the seed constraints.
    static ParamSchedule constant(double tau, double lambda = 1.0);

    ParamSchedule() = default;  // empty; throws on use until seeded

private:
    friend ParamSchedule schedule_init(double, double, double, double, double, double);
    double gamma_ = 0.0, mu_ = 0.0, lambda_ = 1.0, sigma0_ = 1.0, L_norm_ = 0.0;
    bool degenerate_ = false;
    mutable std::vector<double> tau_;    // tau_[k], k >= 0
    mutable std::vector<double> theta_;  // theta_[k], k >= 0
};

// Validates the seed constraints, naming the violated inequality:
//   "mu*tau1 < 2*gamma", "lambda >= mu + 1", "sigma0*tau1*||L||^2 <= 1".
ParamSchedule schedule_init(double gamma, double mu, double lambda, double tau1, double sigma0,
                            double L_norm);

struct ScheduleStep {
    double theta_k;
    double tau_k2;    // tau_{k+2}
    double sigma_k1;  // sigma_{k+1}
};

// Extends the ledger by one index and returns (theta_k, tau_{k+2}, sigma_{k+1}).
ScheduleStep schedule_step(const ParamSchedule& sched, long k);

// n_max * tau_{n_max}, evaluated by streaming the scalar recursion; the limit
// of n tau_n is lambda / gamma.
double tau_asymptote(const ParamSchedule& sched, long n_max);

// Dual-metric family M2^k on G. ChoicePD enforces tau_k L L^* + M2^k =
// sigma_k^{-1} Id; the presets InvSigmaId / Zero / TauId are sigma_k^{-1} Id,
// 0 and tau_k Id. M2^k need only be self-adjoint, not PSD.
class AccMetricFamily {
public:
    enum class Kind { ChoicePD, InvSigmaId, Zero, TauId, Custom };

    static AccMetricFamily choice_pd();
    static AccMetricFamily inv_sigma_id();
    static AccMetricFamily zero();
    static AccMetricFamily tau_id();
    static AccMetricFamily custom(
        std::function<Eigen::MatrixXd(long k, const ParamSchedule&, const Eigen::MatrixXd& LLt)> gen);

    Kind kind() const { return kind_; }
    Eigen::MatrixXd matrix(long k, const ParamSchedule& sched, const Eigen::MatrixXd& LLt) const;
    std::string name() const;

private:
    Kind kind_ = Kind::ChoicePD;
    std::function<Eigen::MatrixXd(long, const ParamSchedule&, const Eigen::MatrixXd&)> gen_;
};

class AccEngine {
public:
    AccEngine(AccProblem problem, ParamSchedule sched, AccMetricFamily family,
              GenResolventOptions inner = {});

    AdmmState step(const AdmmState& s) const;
    RunResult run(const Vector& x0, const Vector& z0, const Vector& y0, long iters,
                  bool keep_trace = true) const;

    const AccProblem& problem() const { return problem_; }
    const ParamSchedule& schedule() const { return sched_; }
    const AccMetricFamily& family() const { return family_; }
    const Eigen::MatrixXd& LLt() const { return LLt_; }

private:
    AccProblem problem_;
    ParamSchedule sched_;
    AccMetricFamily family_;
    GenResolventOptions inner_;
    Eigen::MatrixXd LLt_;
    MonotoneOracle B_inv_, A_inv_;
};

AdmmState acc_step(const AccProblem& p, const ParamSchedule& sched, const AccMetricFamily& family,
                   const AdmmState& s);

// ---- metric-family certification --------------------------------------------

struct MetricFamilyReport {
    std::vector<ConditionVerdict> conditions;  // per-family compatibility witnesses
    bool mon1 = false;   // tau_k L L^* + M2^k >= sigma_k^{-1} Id over the horizon
    bool mon2 = false;   // scaled one-step monotonicity of the combined metric
    bool preset_condition = true;  // the preset's sufficient condition, when one applies
    std::string preset_condition_name;
    bool ok() const { return mon1 && mon2 && preset_condition; }
    const ConditionVerdict* find(const std::string& name) const;
};

MetricFamilyReport check_metric_family(const AccMetricFamily& family, const ParamSchedule& sched,
                                       const DenseLinearMap& L, long horizon);

// ---- rate certificate --------------------------------------------------------

struct RateCertificate {
    double rhs = 0.0;              // constant right-hand side built from n = 0,1 states
    double min_slack = 0.0;        // min over n of rhs - lhs_n
    long argmin_slack = -1;
    bool holds = false;            // slack >= -1e-8 (1 + |rhs|) for all n
    std::vector<double> lhs;       // lhs_n for n = 2 .. N (index 0 <-> n = 2)
    double envelope_constant = 0.0;  // sqrt(rhs / lambda): ||x^n - x|| <= const * tau_{n+1}
};

// Evaluates the rate inequality along a trace produced by AccEngine::run (the
// trace must contain states 0..N with N >= 2 and x^1,y^1 generated by the
// engine itself).
RateCertificate rate_certificate(const AccProblem& p, const ParamSchedule& sched,
                                 const AccMetricFamily& family,
                                 const std::vector<AdmmState>& trace, const Vector& x_star,
                                 const Vector& v_star, double tol = 1e-8);

}  // namespace splitmono
