#pragma once

#include <stdexcept>
#include <string>

namespace splitmono {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed argument: non-finite data, nonpositive step size, bad parameter.
struct InvalidInput : Error {
    using Error::Error;
};

// Operand dimensions do not agree.
struct DimError : Error {
    explicit DimError(const std::string& msg) : Error("dimension mismatch: " + msg) {}
};

// A metric required to be positive definite is not.
struct MetricNotPositive : Error {
    explicit MetricNotPositive(const std::string& msg, double min_eigenvalue = 0.0)
        : Error("metric not positive definite: " + msg), min_eig(min_eigenvalue) {}
    double min_eig;
};

// An iterative solve ran out of budget; carries the last residual seen.
struct NoConvergence : Error {
    NoConvergence(const std::string& msg, double last_residual, long iterations)
        : Error("no convergence: " + msg), residual(last_residual), iters(iterations) {}
    double residual;
    long iters;
};

// A named scalar constraint failed; `constraint` holds the violated inequality.
struct ConstraintViolated : Error {
    ConstraintViolated(const std::string& constraint_name, const std::string& detail)
        : Error("constraint violated: " + constraint_name + " (" + detail + ")"),
          constraint(constraint_name) {}
    std::string constraint;
};

// A reference primal-dual pair failed its optimality-residual validation.
struct SolutionInvalid : Error {
    SolutionInvalid(const std::string& msg, double primal_residual, double dual_residual)
        : Error("reference solution invalid: " + msg),
          kkt_primal(primal_residual), kkt_dual(dual_residual) {}
    double kkt_primal;
    double kkt_dual;
};

}  // namespace splitmono
