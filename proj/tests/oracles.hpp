#pragma once

// Test-only numeric oracles, independent of the library's closed forms:
//  - coordinate-wise golden-section minimization of the prox objective for
//    separable functions;
//  - an accelerated proximal-gradient minimizer for composite subproblems
//    f(u) + (1/2) u^T P u + p^T u.

#include <splitmono/prox.hpp>

namespace splitmono::testing {

// argmin_y f(y) + ||y - x||^2 / (2 gamma) for coordinate-separable f,
// accurate to roughly 1e-7 per coordinate.
Vector numeric_prox_separable(const ProxFunction& f, double gamma, const Vector& x);

// argmin_u f(u) + (1/2) u^T P u + p^T u, P symmetric positive definite on the
// relevant subspace; stops when the prox-gradient fixed-point residual drops
// below tol.
Vector prox_grad_minimize(const ProxFunction& f, const Eigen::MatrixXd& P, const Vector& p,
                          double tol = 1e-12, long max_iters = 500000);

// value of f(y) + ||y - x||^2/(2 gamma)
double prox_objective(const ProxFunction& f, double gamma, const Vector& x, const Vector& y);

}  // namespace splitmono::testing
