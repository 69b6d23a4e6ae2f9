#pragma once

// JSON payloads for matrices, vectors, prox functions, affine oracles and
// problem instances. Doubles are written as C hexfloat strings so round-trips
// are bit-exact; plain JSON numbers are accepted on input.

#include <nlohmann/json_fwd.hpp>
#include <string>

#include "splitmono/problems.hpp"

namespace splitmono {

using json = nlohmann::json;

std::string double_to_hex(double v);
double double_from_json(const json& j);

json vector_to_json(const Vector& v);
Vector vector_from_json(const json& j);

// {rows, cols, data: row-major array}
json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const json& j);

json prox_to_json(const ProxFunction& f);
ProxFunction prox_from_json(const json& j);

// tagged kinds: zero / linear / subdifferential / inverse
json oracle_to_json(const MonotoneOracle& a);
MonotoneOracle oracle_from_json(const json& j);

json problem_to_json(const CompositeProblem& p);
CompositeProblem problem_from_json(const json& j);

json certificate_to_json(const SolutionCertificate& c);
SolutionCertificate certificate_from_json(const json& j);

}  // namespace splitmono
