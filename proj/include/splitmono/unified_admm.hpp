#pragma once

// Variable-metric ADMM engine for the primal-dual pair of monotone inclusions
//   0 in A x + L^* B L x + C x     /     -L^* v in (A+C)x, v in B(Lx),
// plus the per-iteration descent certificates and the eigenvalue checkers for
// the two convergence theorems' hypotheses.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "splitmono/operators.hpp"

namespace splitmono {

struct InclusionProblem {
    MonotoneOracle A;   // on H
    MonotoneOracle B;   // on G
    CocoerciveMap C;    // on H (eta > 0) or the zero map
    DenseLinearMap L;   // H -> G

    InclusionProblem(MonotoneOracle a, MonotoneOracle b, CocoerciveMap c, DenseLinearMap l);
    Eigen::Index dim_h() const { return L.cols(); }
    Eigen::Index dim_g() const { return L.rows(); }
};

// k -> symmetric metric. Constant families share one MetricOperator (and its
// cached eigendecomposition); generated families build one per k.
class MetricSchedule {
public:
    static MetricSchedule constant(MetricOperator M);
    static MetricSchedule zero(Eigen::Index dim);
    static MetricSchedule generator(Eigen::Index dim, std::function<Eigen::MatrixXd(long)> gen);

    MetricOperator at(long k) const;
    bool is_constant() const { return constant_.has_value(); }
    Eigen::Index dim() const { return dim_; }

private:
    Eigen::Index dim_ = 0;
    std::optional<MetricOperator> constant_;
    std::function<Eigen::MatrixXd(long)> gen_;
};

struct AdmmState {
    long k = 0;
    Vector x, z, y;
};

double state_distance(const AdmmState& a, const AdmmState& b);

struct AdmmConfig {
    double c = 1.0;
    MetricSchedule M1, M2;
    long max_iters = 10000;
    double stop_tol = 1e-10;                  // relative successive-change threshold
    std::optional<double> kkt_stop_tol;       // optional additional stopping rule
    GenResolventOptions inner;
};

struct RunResult {
    std::vector<AdmmState> trace;   // empty when keep_trace = false
    AdmmState final_state;
    bool converged = false;
    long iterations = 0;
};

// residuals of the primal-dual inclusion at (x, v):
//   primal ||x - J_A(x - L^* v - C x)||, dual ||v - J_{B^{-1}}(v + L x)||
std::pair<double, double> inclusion_kkt_residual(const InclusionProblem& p, const Vector& x,
                                                 const Vector& v);

class UnifiedEngine {
public:
    UnifiedEngine(InclusionProblem problem, AdmmConfig config);

    AdmmState step(const AdmmState& s) const;

    using StepMonitor = std::function<void(const AdmmState& next)>;
    RunResult run(const Vector& x0, const Vector& z0, const Vector& y0,
                  const StepMonitor& monitor = nullptr, bool keep_trace = true) const;

    const InclusionProblem& problem() const { return problem_; }
    const AdmmConfig& config() const { return config_; }

private:
    InclusionProblem problem_;
    AdmmConfig config_;
    Eigen::MatrixXd cLtL_;
    std::optional<MetricResolvent> x_solver_, z_solver_;  // prebuilt for constant metrics
};

struct RunNoConvergence : NoConvergence {
    RunNoConvergence(double last_change, RunResult r)
        : NoConvergence("solver run hit max_iters", last_change, r.iterations),
          result(std::move(r)) {}
    RunResult result;
};

AdmmState admm_step(const InclusionProblem& p, const AdmmConfig& cfg, const AdmmState& s);

RunResult run(const InclusionProblem& p, const AdmmConfig& cfg, const Vector& x0, const Vector& z0,
              const Vector& y0, const UnifiedEngine::StepMonitor& monitor = nullptr);

// Variant that throws NoConvergence (carrying the partial result) when the
// stopping rule is not met within max_iters.
RunResult run_checked(const InclusionProblem& p, const AdmmConfig& cfg, const Vector& x0,
                      const Vector& z0, const Vector& y0);

// ---- theorem hypothesis checkers ------------------------------------------

struct ConditionVerdict {
    std::string name;
    bool holds = false;
    double witness = 0.0;        // minimal eigenvalue observed over the horizon
    long first_violation_k = -1;
};

struct HypothesisReport {
    std::vector<ConditionVerdict> conditions;
    bool base_ok = false;       // S_+ membership and Loewner monotonicity of the families
    bool assumption_I = false;
    bool assumption_II = false;
    bool assumption_III = false;  // only populated by the C = 0 checker
    bool applicable() const { return base_ok && (assumption_I || assumption_II || assumption_III); }
    const ConditionVerdict* find(const std::string& name) const;
};

// C eta-cocoercive case. Checks, over k <= horizon: M1^k - (2 eta)^{-1} Id in
// S_+, both families Loewner-nonincreasing, and assumptions (I)/(II).
HypothesisReport check_hypotheses_thm_cocoercive(const InclusionProblem& p, const AdmmConfig& cfg,
                                                 long horizon);

// C = 0 case with assumptions (I)/(II)/(III).
HypothesisReport check_hypotheses_thm_C0(const InclusionProblem& p, const AdmmConfig& cfg,
                                         long horizon);

// ---- descent certificates ---------------------------------------------------

enum class FejerMode { Cocoercive, CZero, CZeroIII };

struct FejerCertificate {
    long k = 0;
    FejerMode mode = FejerMode::CZero;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;  // rhs - lhs, nonnegative under the theorem hypotheses
    // residual terms subtracted on the right-hand side
    double term_z_vs_lx = 0.0;   // (c/2) ||z^k - L x^{k+1}||^2
    double term_dx = 0.0;        // (1/2) ||x^k - x^{k+1}||^2 in the applicable metric
    double term_dz = 0.0;        // (1/2) ||z^k - z^{k+1}||^2_{M2^k}
    double term_cocoercive = 0.0;
};

struct ReferenceSolution {
    Vector x_star;
    Vector y_star;
    double kkt_primal = 0.0;
    double kkt_dual = 0.0;
};

// Validates (x*, y*) against the inclusion to 1e-8; throws SolutionInvalid.
ReferenceSolution make_reference(const InclusionProblem& p, const Vector& x_star,
                                 const Vector& y_star, double tol = 1e-8);

// Lyapunov value (1/2)||x-x*||^2_{M1^k} + (1/2)||z-Lx*||^2_{M2^k+cId} + (2c)^{-1}||y-y*||^2.
double lyapunov_value(const InclusionProblem& p, const AdmmConfig& cfg, const AdmmState& s,
                      const ReferenceSolution& ref);

// Both sides of the applicable descent inequality for the transition s_k ->
// s_k1. Mode CZeroIII additionally needs the state before s_k (for k >= 1).
FejerCertificate fejer_certificate(const InclusionProblem& p, const AdmmConfig& cfg,
                                   const AdmmState& s_k, const AdmmState& s_k1,
                                   const ReferenceSolution& ref, FejerMode mode,
                                   const AdmmState* s_km1 = nullptr);

FejerCertificate fejer_certificate(const InclusionProblem& p, const AdmmConfig& cfg,
                                   const AdmmState& s_k, const AdmmState& s_k1, const Vector& x_star,
                                   const Vector& y_star, FejerMode mode,
                                   const AdmmState* s_km1 = nullptr);

// Certificates along a whole trace (k = 0 .. n-1 transitions; the III variant
// starts at k = 1).
std::vector<FejerCertificate> certify_trace(const InclusionProblem& p, const AdmmConfig& cfg,
                                            const std::vector<AdmmState>& trace,
                                            const ReferenceSolution& ref, FejerMode mode);

FejerMode default_fejer_mode(const InclusionProblem& p);

}  // namespace splitmono
