#include "splitmono/serialization.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <cstdlib>

namespace splitmono {

std::string double_to_hex(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

double double_from_json(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (end == s.c_str()) throw InvalidInput("json: unparsable float '" + s + "'");
        return v;
    }
    throw InvalidInput("json: expected a number or float string");
}

json vector_to_json(const Vector& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(double_to_hex(v[i]));
    return arr;
}

Vector vector_from_json(const json& j) {
    if (!j.is_array()) throw InvalidInput("json: vector must be an array");
    Vector v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = double_from_json(j[i]);
    return v;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json data = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j2 = 0; j2 < m.cols(); ++j2) data.push_back(double_to_hex(m(i, j2)));
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Eigen::MatrixXd matrix_from_json(const json& j) {
    if (!j.contains("rows") || !j.contains("cols") || !j.contains("data"))
        throw InvalidInput("json: matrix needs rows/cols/data");
    const Eigen::Index rows = j["rows"].get<Eigen::Index>();
    const Eigen::Index cols = j["cols"].get<Eigen::Index>();
    const json& data = j["data"];
    if (!data.is_array() || static_cast<Eigen::Index>(data.size()) != rows * cols)
        throw InvalidInput("json: matrix data length mismatch");
    Eigen::MatrixXd m(rows, cols);
    std::size_t idx = 0;
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j2 = 0; j2 < cols; ++j2) m(i, j2) = double_from_json(data[idx++]);
    return m;
}

json prox_to_json(const ProxFunction& f) {
    switch (f.kind()) {
        case ProxFunction::Kind::L1:
            return json{{"kind", "l1"}, {"dim", f.dim()}};
        case ProxFunction::Kind::SquaredL2:
            return json{{"kind", "squared_l2"}, {"dim", f.dim()},
                        {"weight", double_to_hex(f.scalar_param())}};
        case ProxFunction::Kind::BoxIndicator:
            return json{{"kind", "box"}, {"lo", vector_to_json(f.lo())},
                        {"hi", vector_to_json(f.hi())}};
        case ProxFunction::Kind::Quadratic:
            return json{{"kind", "quadratic"}, {"Q", matrix_to_json(f.quad_matrix())},
                        {"q", vector_to_json(f.quad_linear())}};
        case ProxFunction::Kind::ElasticNet:
            return json{{"kind", "elastic_net"}, {"dim", f.dim()},
                        {"gamma", double_to_hex(f.scalar_param())}};
        case ProxFunction::Kind::Conjugate:
            return json{{"kind", "conjugate"}, {"inner", prox_to_json(f.inner())}};
        case ProxFunction::Kind::Translated:
            return json{{"kind", "translated"}, {"inner", prox_to_json(f.inner())},
                        {"shift", vector_to_json(f.shift())}};
        case ProxFunction::Kind::Scaled:
            return json{{"kind", "scaled"}, {"inner", prox_to_json(f.inner())},
                        {"factor", double_to_hex(f.scalar_param())}};
    }
    throw InvalidInput("prox_to_json: unknown kind");
}

ProxFunction prox_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "l1") return ProxFunction::l1(j.at("dim").get<Eigen::Index>());
    if (kind == "squared_l2")
        return ProxFunction::squared_l2(j.at("dim").get<Eigen::Index>(),
                                        double_from_json(j.at("weight")));
    if (kind == "box")
        return ProxFunction::box(vector_from_json(j.at("lo")), vector_from_json(j.at("hi")));
    if (kind == "quadratic")
        return ProxFunction::quadratic(matrix_from_json(j.at("Q")), vector_from_json(j.at("q")));
    if (kind == "elastic_net")
        return ProxFunction::elastic_net(j.at("dim").get<Eigen::Index>(),
                                         double_from_json(j.at("gamma")));
    if (kind == "conjugate") return ProxFunction::conjugate(prox_from_json(j.at("inner")));
    if (kind == "translated")
        return ProxFunction::translated(prox_from_json(j.at("inner")),
                                        vector_from_json(j.at("shift")));
    if (kind == "scaled")
        return ProxFunction::scaled(prox_from_json(j.at("inner")), double_from_json(j.at("factor")));
    throw InvalidInput("prox_from_json: unknown kind '" + kind + "'");
}

json oracle_to_json(const MonotoneOracle& a) {
    switch (a.kind()) {
        case MonotoneOracle::Kind::Zero:
            return json{{"kind", "zero"}, {"dim", a.dim()}};
        case MonotoneOracle::Kind::Linear:
            return json{{"kind", "linear"}, {"T", matrix_to_json(a.linear_T())},
                        {"offset", vector_to_json(a.linear_offset())}};
        case MonotoneOracle::Kind::Subdifferential:
            return json{{"kind", "subdifferential"}, {"f", prox_to_json(*a.prox_function())}};
        case MonotoneOracle::Kind::Inverse:
            return json{{"kind", "inverse"}, {"inner", oracle_to_json(*a.inverse_inner())}};
    }
    throw InvalidInput("oracle_to_json: unknown kind");
}

MonotoneOracle oracle_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "zero") return MonotoneOracle::zero(j.at("dim").get<Eigen::Index>());
    if (kind == "linear")
        return MonotoneOracle::linear(matrix_from_json(j.at("T")),
                                      vector_from_json(j.at("offset")));
    if (kind == "subdifferential")
        return MonotoneOracle::subdifferential(prox_from_json(j.at("f")));
    if (kind == "inverse") return oracle_from_json(j.at("inner")).inverse();
    throw InvalidInput("oracle_from_json: unknown kind '" + kind + "'");
}

json problem_to_json(const CompositeProblem& p) {
    json j{{"f", prox_to_json(p.f)},
           {"g", prox_to_json(p.g)},
           {"L", matrix_to_json(p.L.matrix())},
           {"gamma_f", double_to_hex(p.gamma_f)}};
    if (p.h) {
        j["h"] = json{{"P", matrix_to_json(p.h->P)},
                      {"p", vector_to_json(p.h->p)},
                      {"c0", double_to_hex(p.h->c0)}};
    }
    return j;
}

CompositeProblem problem_from_json(const json& j) {
    std::optional<QuadraticForm> h;
    if (j.contains("h") && !j["h"].is_null()) {
        h = QuadraticForm{matrix_from_json(j["h"].at("P")), vector_from_json(j["h"].at("p")),
                          double_from_json(j["h"].at("c0"))};
    }
    return CompositeProblem(prox_from_json(j.at("f")), prox_from_json(j.at("g")), std::move(h),
                            DenseLinearMap(matrix_from_json(j.at("L"))),
                            double_from_json(j.at("gamma_f")));
}

json certificate_to_json(const SolutionCertificate& c) {
    return json{{"x_star", vector_to_json(c.x_star)},
                {"v_star", vector_to_json(c.v_star)},
                {"kkt_primal", c.kkt_primal},
                {"kkt_dual", c.kkt_dual},
                {"provenance", c.provenance == SolutionCertificate::Provenance::DenseKktSolve
                                   ? "dense_kkt_solve"
                                   : "long_run_solver"}};
}

SolutionCertificate certificate_from_json(const json& j) {
    SolutionCertificate c;
    c.x_star = vector_from_json(j.at("x_star"));
    c.v_star = vector_from_json(j.at("v_star"));
    c.kkt_primal = j.value("kkt_primal", 0.0);
    c.kkt_dual = j.value("kkt_dual", 0.0);
    c.provenance = j.value("provenance", std::string("dense_kkt_solve")) == "long_run_solver"
                       ? SolutionCertificate::Provenance::LongRunSolver
                       : SolutionCertificate::Provenance::DenseKktSolve;
    return c;
}

}  // namespace splitmono
