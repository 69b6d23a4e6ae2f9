#pragma once

// Builders that realize the named splitting algorithms from the literature in
// two independent ways: the published update formulas ("direct") and a
// configuration of one of the two engines. The pair must produce identical
// trajectories; equivalence_check measures the gap.

#include "splitmono/accelerated.hpp"
#include "splitmono/problems.hpp"
#include "splitmono/unified_admm.hpp"

namespace splitmono {

using Trace = std::vector<AdmmState>;
using TrajectoryFn = std::function<Trace(const AdmmState& start, long n)>;

enum class ReductionKind {
    VuCondat,
    BCH,
    ChambollePock,
    ClassicalADMM,
    VariableMetricADMM,
    AccChambollePock,
    AccClassicalADMM
};

std::string reduction_name(ReductionKind k);

struct Reduction {
    ReductionKind kind;
    TrajectoryFn direct;
    TrajectoryFn engine;
    AdmmConfig config;  // the unified-engine configuration realizing the scheme
};

// Forward-backward primal-dual scheme with resolvent steps on A and B^{-1};
// requires 1/tau - c ||L||^2 > 1/(2 eta).
Reduction build_vu_condat(const InclusionProblem& p, double tau, double c);

// Same scheme with C = 0; requires c tau ||L||^2 < 1.
Reduction build_bch(const InclusionProblem& p, double tau, double c);

// Variational case of the above via proximal maps; needs h = 0.
Reduction build_chambolle_pock(const CompositeProblem& p, double tau, double c);

// Zero metrics; the direct path is alternating minimization, available for
// quadratic f (dense subproblem solves). Needs h = 0.
Reduction build_classical_admm(const CompositeProblem& p, double c);

// Unified engine with caller-supplied metric families; the direct path solves
// the two subproblems by construction of the engine itself, so only the
// config is produced. (The subproblem characterization is covered by tests.)
AdmmConfig build_variable_metric_admm(const CompositeProblem& p, double c, MetricSchedule M1,
                                      MetricSchedule M2);

struct AccReduction {
    ReductionKind kind;
    TrajectoryFn direct;
    TrajectoryFn engine;
    ParamSchedule sched;
};

// Dynamic-step primal-dual scheme with extrapolated dual updates; engine side
// runs the ChoicePD family.
AccReduction build_acc_chambolle_pock(const AccProblem& p, const ParamSchedule& sched);

struct AccAdmmReduction {
    AccMetricFamily family;
    MetricFamilyReport report;
};

// Accelerated variant with the Zero / TauId dual-metric families; requires
// C = 0 and lambda = 1, and certifies the family's sufficient condition.
AccAdmmReduction build_acc_classical_admm(const AccProblem& p, const ParamSchedule& sched,
                                          bool tau_id_variant, long horizon);

// Max over k <= n of the state distance between the two trajectories.
double equivalence_check(const TrajectoryFn& a, const TrajectoryFn& b, const AdmmState& start,
                         long n);

TrajectoryFn unified_trajectory(const InclusionProblem& p, const AdmmConfig& cfg);
TrajectoryFn accelerated_trajectory(const AccProblem& p, const ParamSchedule& sched,
                                    const AccMetricFamily& family);

}  // namespace splitmono
