#include <doctest.h>

#include <splitmono/hilbert.hpp>
#include <splitmono/rng.hpp>

using namespace splitmono;

TEST_CASE("operator norm on catalog maps") {
    Eigen::MatrixXd diag(2, 2);
    diag << 3, 0, 0, 4;
    CHECK(operator_norm(DenseLinearMap(diag)) == doctest::Approx(4.0).epsilon(1e-12));

    CHECK(operator_norm(DenseLinearMap(Eigen::MatrixXd::Zero(2, 3))) == doctest::Approx(0.0));

    // largest singular value of [[1,1],[0,1]] is the golden ratio
    Eigen::MatrixXd shear(2, 2);
    shear << 1, 1, 0, 1;
    CHECK(operator_norm(DenseLinearMap(shear)) ==
          doctest::Approx(1.6180339887498949).epsilon(1e-10));
}

TEST_CASE("operator norm rejects non-finite input") {
    Eigen::MatrixXd bad(1, 1);
    bad << std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(DenseLinearMap{bad}, InvalidInput);
}

TEST_CASE("gram and cogram") {
    Eigen::MatrixXd col(2, 1);
    col << 1, 2;
    CHECK(gram(DenseLinearMap(col)).matrix()(0, 0) == doctest::Approx(5.0));

    DenseLinearMap id = DenseLinearMap::identity(3);
    CHECK(gram(id).matrix().isApprox(Eigen::MatrixXd::Identity(3, 3)));

    Eigen::MatrixXd shear(2, 2);
    shear << 1, 1, 0, 1;
    Eigen::MatrixXd expect(2, 2);
    expect << 1, 1, 1, 2;
    CHECK(gram(DenseLinearMap(shear)).matrix().isApprox(expect));
    Eigen::MatrixXd expect_co(2, 2);
    expect_co << 2, 1, 1, 1;
    CHECK(cogram(DenseLinearMap(shear)).matrix().isApprox(expect_co));
}

TEST_CASE("seminorm_sq") {
    MetricOperator id = MetricOperator::identity(2);
    Vector x(2);
    x << 3, 4;
    CHECK(seminorm_sq(id, x) == doctest::Approx(25.0));

    CHECK(seminorm_sq(MetricOperator::zero(2), x) == doctest::Approx(0.0));

    Vector d(2);
    d << 2, 1;
    Vector v(2);
    v << 1, 2;
    CHECK(seminorm_sq(MetricOperator::diagonal(d), v) == doctest::Approx(6.0));

    CHECK_THROWS_AS(seminorm_sq(id, Vector::Zero(3)), DimError);
}

TEST_CASE("loewner order predicates") {
    MetricOperator id = MetricOperator::identity(2);
    CHECK(loewner_geq(id, MetricOperator::zero(2)));
    CHECK(loewner_geq(id, id));  // reflexive

    Vector d1(2), d2(2);
    d1 << 1, 1;
    d2 << 2, 0;
    CHECK_FALSE(loewner_geq(MetricOperator::diagonal(d1), MetricOperator::diagonal(d2)));

    CHECK_THROWS_AS(loewner_geq(id, MetricOperator::zero(3)), DimError);
}

TEST_CASE("in_P_alpha") {
    CHECK(in_P_alpha(MetricOperator::identity(2), 1.0));
    Vector d(2);
    d << 0.5, 2.0;
    CHECK_FALSE(in_P_alpha(MetricOperator::diagonal(d), 1.0));
    CHECK(in_P_alpha(MetricOperator::scaled_identity(2, 2.0), 1.0));
    CHECK_THROWS_AS(in_P_alpha(MetricOperator::identity(2), 0.0), InvalidInput);
    CHECK_THROWS_AS(in_P_alpha(MetricOperator::identity(2), -1.0), InvalidInput);
}

TEST_CASE("metric constructor rejects asymmetry") {
    Eigen::MatrixXd m(2, 2);
    m << 1, 0.5, 0.0, 1;
    CHECK_THROWS_AS(MetricOperator{m}, InvalidInput);
}

TEST_CASE("adjoint consistency on random maps") {
    Rng rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        const Eigen::Index m = 2 + trial % 5, n = 3 + trial % 4;
        DenseLinearMap L(rng.gaussian_matrix(m, n));
        const double Lnorm = operator_norm(L);
        for (int i = 0; i < 10; ++i) {
            Vector x = rng.gaussian_vector(n);
            Vector y = rng.gaussian_vector(m);
            const double lhs = L.adjoint_apply(y).dot(x);
            const double rhs = y.dot(L.apply(x));
            CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + x.norm() * y.norm() * Lnorm));
        }
    }
}

TEST_CASE("operator norm squared equals top eigenvalue of the gram matrix") {
    Rng rng(11);
    for (int trial = 0; trial < 8; ++trial) {
        DenseLinearMap L(rng.gaussian_matrix(4 + trial, 3 + trial % 3));
        const double n2 = operator_norm(L) * operator_norm(L);
        const double lmax = gram(L).max_eigenvalue();
        CHECK(n2 == doctest::Approx(lmax).epsilon(1e-8));
    }
}

TEST_CASE("loewner order is a partial order on sampled triples") {
    Rng rng(13);
    const double tol = 1e-9;
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::MatrixXd A = rng.gaussian_matrix(3, 3);
        Eigen::MatrixXd B = rng.gaussian_matrix(3, 3);
        MetricOperator U(Eigen::MatrixXd(A.transpose() * A));
        MetricOperator V(Eigen::MatrixXd(B.transpose() * B));
        MetricOperator W = metric_sum(U, V);  // W >= U and W >= V by construction
        CHECK(loewner_geq(U, U, tol));
        CHECK(loewner_geq(W, U, tol));
        CHECK(loewner_geq(W, V, tol));
        // antisymmetry within tolerance: U >= W and W >= U forces near-equality
        if (loewner_geq(U, W, tol)) {
            CHECK((U.matrix() - W.matrix()).cwiseAbs().maxCoeff() <= 1e-6);
        }
        // transitivity: W >= U >= 0 gives W >= 0
        CHECK(loewner_geq(W, MetricOperator::zero(3), tol));
    }
}

TEST_CASE("in_P_alpha implies the quadratic lower bound") {
    Rng rng(17);
    const double alpha = 0.7, tol = 1e-9;
    Eigen::MatrixXd A = rng.gaussian_matrix(4, 4);
    MetricOperator U(Eigen::MatrixXd(A.transpose() * A + alpha * Eigen::MatrixXd::Identity(4, 4)));
    REQUIRE(in_P_alpha(U, alpha, tol));
    for (int i = 0; i < 50; ++i) {
        Vector x = rng.gaussian_vector(4);
        CHECK(seminorm_sq(U, x) >= (alpha - tol) * x.squaredNorm() - 1e-12);
    }
}

TEST_CASE("scalar identity detection") {
    double s = 0.0;
    CHECK(MetricOperator::scaled_identity(4, 2.5).is_scalar_identity(&s));
    CHECK(s == doctest::Approx(2.5));
    Vector d(2);
    d << 1.0, 1.0 + 1e-6;
    CHECK_FALSE(MetricOperator::diagonal(d).is_scalar_identity());
}
