#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "aro/probgen.hpp"
#include "aro/rng.hpp"
#include "aro/uncertainty.hpp"
#include "oracles.hpp"

using namespace aro;

namespace {

Eigen::MatrixXd two_point_data() {
    // mean 5, sample variance (N-1 convention) 4 with N = 3
    Eigen::MatrixXd d(3, 1);
    d << 3.0, 5.0, 7.0;
    return d;
}

}  // namespace

TEST_CASE("fit_classical_set computes moments and box bounds") {
    Eigen::MatrixXd d(4, 2);
    d << 1.0, 10.0, 3.0, 20.0, 5.0, 30.0, 7.0, 40.0;
    const ClassicalSet box = fit_classical_set(SetKind::Box, d);
    CHECK(box.min_vals(0) == 1.0);
    CHECK(box.max_vals(0) == 7.0);
    CHECK(box.min_vals(1) == 10.0);
    CHECK(box.max_vals(1) == 40.0);

    const ClassicalSet budget = fit_classical_set(SetKind::Budget, d);
    CHECK(budget.mean(0) == doctest::Approx(4.0));
    CHECK(budget.mean(1) == doctest::Approx(25.0));
    // N-1 sample covariance
    CHECK(budget.cov(0, 0) == doctest::Approx(20.0 / 3.0));
    CHECK_FALSE(budget.gamma.has_value());
}

TEST_CASE("budget radius is the variance-scaled L1 distance") {
    const ClassicalSet set = fit_classical_set(SetKind::Budget, two_point_data());
    Eigen::VectorXd xi(1);
    xi << 7.0;
    // |7 - 5| / 4 = 0.5
    CHECK(set_radius(set, xi) == doctest::Approx(0.5));
    xi << 5.0;
    CHECK(set_radius(set, xi) == doctest::Approx(0.0));
}

TEST_CASE("ellipsoid radius is the squared Mahalanobis distance") {
    const ClassicalSet set = fit_classical_set(SetKind::Ellipsoid, two_point_data());
    Eigen::VectorXd xi(1);
    xi << 7.0;
    // (7 - 5)^2 / 4 = 1
    CHECK(set_radius(set, xi) == doctest::Approx(1.0));
    xi << 9.0;
    CHECK(set_radius(set, xi) == doctest::Approx(4.0));
}

TEST_CASE("ellipsoid radius matches a direct inverse in 2-D") {
    RngStream rng(5);
    Eigen::MatrixXd d(40, 2);
    for (Eigen::Index r = 0; r < d.rows(); ++r) {
        d(r, 0) = rng.normal();
        d(r, 1) = 0.5 * d(r, 0) + rng.normal();
    }
    const ClassicalSet set = fit_classical_set(SetKind::Ellipsoid, d);
    const Eigen::VectorXd xi = Eigen::Vector2d(1.3, -0.4);
    const Eigen::VectorXd c = xi - set.mean;
    const double direct = c.dot(set.cov.inverse() * c);
    CHECK(set_radius(set, xi) == doctest::Approx(direct).epsilon(1e-9));
}

TEST_CASE("singular covariance rejects the ellipsoid fit") {
    Eigen::MatrixXd d(5, 2);
    for (Eigen::Index r = 0; r < 5; ++r) {
        d(r, 0) = static_cast<double>(r);
        d(r, 1) = 2.0 * static_cast<double>(r);  // perfectly collinear
    }
    CHECK_THROWS(fit_classical_set(SetKind::Ellipsoid, d));
}

TEST_CASE("minimum calibration sample count") {
    // smallest N1 with alpha^N1 <= delta
    CHECK(min_calibration_samples(0.95, 0.05) == 59);
    CHECK(min_calibration_samples(0.9, 0.05) == 29);
    CHECK(min_calibration_samples(0.99, 0.01) == 459);
}

TEST_CASE("calibration index against the binomial tail oracle") {
    using aro::testing::binomial_cdf;
    for (int n1 : {59, 100, 500, 1000}) {
        const int ell = calibration_index(n1, 0.95, 0.05);
        CHECK(ell >= 1);
        CHECK(ell <= n1);
        // smallest j with P(Bin(n1, 0.95) <= j - 1) >= 0.95
        CHECK(binomial_cdf(ell - 1, n1, 0.95) >= 0.95);
        if (ell > 1) CHECK(binomial_cdf(ell - 2, n1, 0.95) < 0.95);
    }
    CHECK(calibration_index(59, 0.95, 0.05) == 59);
    CHECK(calibration_index(100, 0.95, 0.05) == 99);
    CHECK(calibration_index(500, 0.95, 0.05) == 484);
}

TEST_CASE("calibration index is monotone in the sample count") {
    int prev = calibration_index(59, 0.95, 0.05);
    for (int n1 = 60; n1 <= 300; ++n1) {
        const int ell = calibration_index(n1, 0.95, 0.05);
        CHECK(ell >= prev);
        CHECK(ell <= prev + 1);
        prev = ell;
    }
}

TEST_CASE("calibrate_gamma picks the ell-th smallest radius") {
    Eigen::VectorXd radii(100);
    for (int i = 0; i < 100; ++i) radii(i) = static_cast<double>(100 - i);  // 100..1
    const CalibrationResult res = calibrate_gamma(radii, 0.95, 0.05);
    CHECK(res.n1 == 100);
    CHECK(res.ell == 99);
    CHECK(res.gamma == 99.0);
    CHECK(res.alpha == 0.95);
    CHECK(res.delta == 0.05);
}

TEST_CASE("calibrate_gamma rejects undersized samples") {
    Eigen::VectorXd radii = Eigen::VectorXd::LinSpaced(58, 1.0, 58.0);
    CHECK_THROWS(calibrate_gamma(radii, 0.95, 0.05));
    Eigen::VectorXd enough = Eigen::VectorXd::LinSpaced(59, 1.0, 59.0);
    const CalibrationResult res = calibrate_gamma(enough, 0.95, 0.05);
    CHECK(res.ell == 59);
    CHECK(res.gamma == 59.0);
}

TEST_CASE("calibrated sets achieve the target coverage out of sample") {
    RngStream rng(31);
    const Eigen::Index d = 3;
    Eigen::MatrixXd calib(500, d);
    for (Eigen::Index r = 0; r < calib.rows(); ++r)
        calib.row(r) = rng.normal_vector(d).transpose();

    for (SetKind kind : {SetKind::Budget, SetKind::Ellipsoid}) {
        const ClassicalSet set = fit_and_calibrate(kind, calib, 0.95, 0.05);
        REQUIRE(set.gamma.has_value());
        int covered = 0;
        const int n_test = 20000;
        for (int s = 0; s < n_test; ++s)
            if (membership(set, rng.normal_vector(d))) ++covered;
        const double cov = static_cast<double>(covered) / n_test;
        // the rule guarantees >= alpha with probability 1 - delta and tends
        // to overcover slightly at finite N1
        CHECK(cov >= 0.93);
        CHECK(cov <= 1.0);
    }
}

TEST_CASE("membership agrees with the radius threshold") {
    RngStream rng(8);
    Eigen::MatrixXd calib(200, 2);
    for (Eigen::Index r = 0; r < calib.rows(); ++r)
        calib.row(r) = rng.normal_vector(2).transpose();
    const ClassicalSet set = fit_and_calibrate(SetKind::Budget, calib, 0.95, 0.05);
    for (int s = 0; s < 200; ++s) {
        const Eigen::VectorXd xi = 2.0 * rng.normal_vector(2);
        CHECK(membership(set, xi) == (set_radius(set, xi) <= *set.gamma + 1e-12));
    }
}

TEST_CASE("box membership uses the fitted bounds directly") {
    Eigen::MatrixXd d(4, 2);
    d << 0.0, 0.0, 1.0, 2.0, 0.5, 1.0, 0.2, 1.5;
    const ClassicalSet set = fit_classical_set(SetKind::Box, d);
    CHECK(membership(set, Eigen::Vector2d(0.5, 1.0)));
    CHECK(membership(set, Eigen::Vector2d(0.0, 2.0)));
    CHECK_FALSE(membership(set, Eigen::Vector2d(1.1, 1.0)));
    CHECK_FALSE(membership(set, Eigen::Vector2d(0.5, -0.1)));
}

TEST_CASE("radius functions are invariant to coordinate permutation") {
    RngStream rng(44);
    Eigen::MatrixXd data(120, 3);
    for (Eigen::Index r = 0; r < data.rows(); ++r)
        data.row(r) = rng.normal_vector(3).transpose();
    Eigen::MatrixXd perm(120, 3);
    perm.col(0) = data.col(2);
    perm.col(1) = data.col(0);
    perm.col(2) = data.col(1);

    const Eigen::VectorXd xi = Eigen::Vector3d(0.3, -0.7, 1.1);
    const Eigen::VectorXd xi_perm = Eigen::Vector3d(xi(2), xi(0), xi(1));
    for (SetKind kind : {SetKind::Budget, SetKind::Ellipsoid, SetKind::Box}) {
        const ClassicalSet a = fit_classical_set(kind, data);
        const ClassicalSet b = fit_classical_set(kind, perm);
        CHECK(set_radius(a, xi) == doctest::Approx(set_radius(b, xi_perm)).epsilon(1e-10));
    }
}

TEST_CASE("zero-variance coordinate rejects the budget fit") {
    Eigen::MatrixXd d(5, 2);
    for (Eigen::Index r = 0; r < 5; ++r) {
        d(r, 0) = static_cast<double>(r);
        d(r, 1) = 3.0;  // constant column
    }
    CHECK_THROWS(fit_classical_set(SetKind::Budget, d));
}
