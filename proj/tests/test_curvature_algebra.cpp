#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "grasslab/curvature_algebra.hpp"
#include "oracles.hpp"

using namespace grasslab;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> values) {
    Eigen::VectorXd v(static_cast<int>(values.size()));
    int i = 0;
    for (double x : values) v[i++] = x;
    return v;
}

const double kSqrt2 = std::sqrt(2.0);

}  // namespace

TEST_CASE("table storage is symmetric by construction") {
    SffTable t(3, 2, 1, vec({1.0}));
    t.set_h(0, 0, 2, 0.7);
    CHECK(t.h(0, 2, 0) == 0.7);
    t.set_h(1, 2, 1, -0.3);
    CHECK(t.h(1, 1, 2) == -0.3);
    CHECK(t.normal_form(0)(0, 2) == 0.7);
    CHECK(t.norm_b_squared() == doctest::Approx(2 * 0.49 + 2 * 0.09).epsilon(1e-14));
}

TEST_CASE("table shape validation") {
    CHECK_THROWS_AS(SffTable(2, 2, 3, vec({1, 1, 1})), DimensionMismatch);
    CHECK_THROWS_AS(SffTable(3, 2, 2, vec({1.0})), DimensionMismatch);
    CHECK_THROWS_AS(SffTable(3, 2, 2, vec({1.0, 2.0})), PreconditionViolated);  // ascending
    CHECK_THROWS_AS(SffTable(3, 2, 1, vec({-1.0})), PreconditionViolated);
}

TEST_CASE("diagonal-pair form values") {
    CHECK(term_i(vec({1.0, 0.5}), vec({0.0, 0.0})) == 0.0);
    // one slope, lambda = 1, coefficient 1: (2 + 2) * 1
    CHECK(term_i(vec({1.0}), vec({1.0})) == doctest::Approx(4.0));
}

TEST_CASE("diagonal-pair form: completed square and lower bound") {
    Rng rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        const int r = 1 + static_cast<int>(rng.uniform() * 3.0);
        Eigen::VectorXd lam(r), h(r);
        double prod;
        do {
            for (int a = 0; a < r; ++a) lam[a] = rng.uniform(0.0, 2.8);
            std::sort(lam.data(), lam.data() + r, std::greater<double>());
            prod = 1.0;
            for (int a = 0; a < r; ++a) prod *= 1.0 + lam[a] * lam[a];
        } while (lam[r - 1] <= 0.0 || prod > 9.0);
        for (int a = 0; a < r; ++a) h[a] = rng.uniform(-2.0, 2.0);

        const double value = term_i(lam, h);
        CHECK(value == doctest::Approx(oracle::term_i_completed_square(lam, h)).epsilon(1e-12));
        CHECK(value >= 2.0 * h.squaredNorm() - 1e-12);
    }
}

TEST_CASE("pair form values and equality manifold") {
    CHECK(term_ii(1.0, 1.0, 0.0, 0.0) == 0.0);
    // slope product 2 with antisymmetric coefficients collapses the form
    CHECK(std::abs(term_ii(kSqrt2, kSqrt2, 0.7, -0.7)) <= 1e-12);
    // slope product 1.5: 2 + 2 - 3
    CHECK(term_ii(1.5, 1.0, 1.0, -1.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("pair form is nonnegative up to slope product 2") {
    Rng rng(22);
    for (int trial = 0; trial < 500; ++trial) {
        const double product = rng.uniform(0.0, 2.0);
        const double h_ab = rng.uniform(-3.0, 3.0);
        const double h_ba = rng.uniform(-3.0, 3.0);
        CHECK(term_ii(product, 1.0, h_ab, h_ba) >= -1e-12);
    }
    // beyond the product bound the form takes negative values
    CHECK(term_ii(2.0, 1.5, 1.0, -1.0) < 0.0);
}

TEST_CASE("triple form values") {
    CHECK(term_iii(1.0, 0.8, 0.5, 0.0, 0.0, 0.0) == 0.0);
    CHECK(term_iii(1.0, 1.0, 1.0, 1.0, 1.0, 1.0) == doctest::Approx(12.0));
}

TEST_CASE("triple form matrix matches the scalar form") {
    Rng rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        const double a = rng.uniform(0.1, 2.0), b = rng.uniform(0.1, 2.0),
                     c = rng.uniform(0.1, 2.0);
        Eigen::Vector3d x(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
        const double via_matrix = x.dot(term_iii_matrix(a, b, c) * x);
        CHECK(via_matrix ==
              doctest::Approx(term_iii(a, b, c, x[0], x[1], x[2])).epsilon(1e-12));
    }
}

TEST_CASE("triple form at the symmetric constraint point is positive definite") {
    // (1 + a^2)^3 = 9
    const double a = std::sqrt(std::cbrt(9.0) - 1.0);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(term_iii_matrix(a, a, a));
    const double lo = eig.eigenvalues().minCoeff();
    CHECK(lo > 0.0);
    // closed form: smallest eigenvalue of 2I + a^2 (ones - I) is 2 - a^2
    CHECK(lo == doctest::Approx(2.0 - a * a).epsilon(1e-12));
}

TEST_CASE("triple form eigenvalue at a = b = c = 0.5") {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(term_iii_matrix(0.5, 0.5, 0.5));
    // off-diagonal entries are the pairwise products 0.25
    CHECK(eig.eigenvalues().minCoeff() == doctest::Approx(1.75).epsilon(1e-12));
}

TEST_CASE("positivity certificate over the constrained region") {
    const Certificate cert = certify_iii_positive(20000, 42);
    CHECK(cert.pass);
    CHECK(cert.extremal_value > 0.0);
    REQUIRE(cert.extremal_point.size() == 3);
    const double a = cert.extremal_point[0], b = cert.extremal_point[1],
                 c = cert.extremal_point[2];
    CHECK(a >= b);
    CHECK(b >= c);
    CHECK(c > 0.0);
    CHECK((1 + a * a) * (1 + b * b) * (1 + c * c) <= 9.0);
    // the certified minimum is a true eigenvalue bound for the form
    Rng rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::Vector3d x(rng.gaussian(), rng.gaussian(), rng.gaussian());
        x.normalize();
        CHECK(term_iii(a, b, c, x[0], x[1], x[2]) >= cert.extremal_value - 1e-12);
    }
}

TEST_CASE("region function values") {
    CHECK(region_f({4.0, 1.5, 1.5}) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(region_f({3.01, 1.01, 1.01}) ==
          doctest::Approx(-98.99497487437186).epsilon(1e-9));
    CHECK(region_f({3.01, 1.01, 1.01}) < 1.0);
}

TEST_CASE("region membership is enforced") {
    CHECK_THROWS_AS(region_f({2.9, 1.5, 1.5}), RegionViolation);   // u <= 3
    CHECK_THROWS_AS(region_f({4.0, 1.5, 1.6}), RegionViolation);   // v < w
    CHECK_THROWS_AS(region_f({4.0, 1.5, 0.9}), RegionViolation);   // w <= 1
    CHECK_THROWS_AS(region_f({8.0, 1.5, 1.5}), RegionViolation);   // uvw > 9
}

TEST_CASE("region function approaches 5/6 at the corner") {
    // stay inside: u v w <= 9
    const double u = 9.0 - 1e-3;
    const double d = 1e-5;
    const RegionPoint p{u, 1.0 + d, 1.0 + d};
    REQUIRE(p.valid());
    const double f = region_f(p);
    CHECK(f < 5.0 / 6.0);
    CHECK(std::abs(f - 5.0 / 6.0) < 1e-4);
}

TEST_CASE("region scan honors the bound and pins the constraint") {
    const ScanResult fine = scan_region_f(50);
    CHECK(fine.max_found <= 5.0 / 6.0 + 1e-6);
    const double uvw = fine.argmax.u * fine.argmax.v * fine.argmax.w;
    CHECK(std::abs(uvw - 9.0) <= 1e-3);
    // argmax pushes into the corner
    CHECK(fine.argmax.u > 8.9);
    CHECK(fine.argmax.v < 1.1);

    const ScanResult coarse = scan_region_f(10);
    CHECK(coarse.max_found <= fine.max_found + 1e-9);
}

TEST_CASE("diagonal-block form values") {
    CHECK(term_iv(vec({1.0}), 0, vec({0.0}), vec({0.0})) == 0.0);
    // one slope, lambda = 1, h_{a,aa} = 1: 1 + 2
    CHECK(term_iv(vec({1.0}), 0, vec({1.0}), vec({1.0})) == doctest::Approx(3.0));
    // two slopes at sqrt2, only h_{1,11} = 1: 1 + 2 * 2
    CHECK(term_iv(vec({kSqrt2, kSqrt2}), 0, vec({1.0, 0.0}), vec({1.0, 0.0})) ==
          doctest::Approx(5.0));
}

TEST_CASE("diagonal-block ratio at the saturated slopes is positive") {
    const Eigen::VectorXd lam = vec({kSqrt2, kSqrt2});
    const double ratio = term_iv_ratio_min(lam, 0);
    CHECK(ratio > 0.0);

    // generalized eigenvalue oracle: minimize over random unit directions of
    // the 3-variable forms (x0, d, c) with reference weights (1, 1, 2)
    Rng rng(31);
    double best = 1e9;
    for (int trial = 0; trial < 20000; ++trial) {
        const double x0 = rng.gaussian(), dcoef = rng.gaussian(), ccoef = rng.gaussian();
        const double num = term_iv(lam, 0, vec({x0, dcoef}), vec({x0, ccoef}));
        const double den = x0 * x0 + dcoef * dcoef + 2.0 * ccoef * ccoef;
        if (den > 1e-12) best = std::min(best, num / den);
    }
    CHECK(ratio <= best + 1e-12);
    CHECK(ratio >= best - 2e-2);  // sampling gets close to the true minimum
}

TEST_CASE("ratio bound holds across random slopes and coefficients") {
    Rng rng(44);
    for (int trial = 0; trial < 200; ++trial) {
        const int r = 2 + trial % 2;
        Eigen::VectorXd lam(r);
        double prod;
        do {
            for (int a = 0; a < r; ++a) lam[a] = rng.uniform(0.0, 2.8);
            std::sort(lam.data(), lam.data() + r, std::greater<double>());
            prod = 1.0;
            for (int a = 0; a < r; ++a) prod *= 1.0 + lam[a] * lam[a];
        } while (lam[r - 1] <= 0.0 || prod > 9.0);
        const int alpha = trial % r;
        const double ratio = term_iv_ratio_min(lam, alpha);
        CHECK(ratio > 0.0);

        Eigen::VectorXd diag_col(r), cross_col(r);
        for (int b = 0; b < r; ++b) {
            diag_col[b] = rng.uniform(-1.0, 1.0);
            cross_col[b] = rng.uniform(-1.0, 1.0);
        }
        cross_col[alpha] = diag_col[alpha];  // both slots hold h_{a,aa}
        double denom = diag_col[alpha] * diag_col[alpha];
        for (int b = 0; b < r; ++b) {
            if (b == alpha) continue;
            denom += diag_col[b] * diag_col[b] + 2.0 * cross_col[b] * cross_col[b];
        }
        CHECK(term_iv(lam, alpha, diag_col, cross_col) >= ratio * denom - 1e-10);
    }
}

TEST_CASE("ratio infimum estimates") {
    const double r1 = estimate_eps0(1, 16, 500, 3);
    CHECK(r1 >= 1.0);  // single-slope ratio is 1 + 2 lambda^2
    const double r2 = estimate_eps0(2, 16, 500, 3);
    const double r3 = estimate_eps0(3, 10, 500, 3);
    CHECK(r2 > 0.0);
    CHECK(r3 > 0.0);
    // infimum over a larger family cannot exceed the single-slope value
    CHECK(r2 <= r1);
    CHECK(r3 <= r1);
}

TEST_CASE("grouped form vanishes on the zero table") {
    SffTable t(4, 3, 2, vec({1.2, 0.4}));
    CHECK(laplacian_v_quadratic(t) == 0.0);
}

TEST_CASE("grouped form vanishes on the antisymmetric pairing family") {
    for (double tval : {0.25, 0.7, -1.3}) {
        const SffTable t = case_b_table(5, 3, tval);
        CHECK(std::abs(laplacian_v_quadratic(t)) <= 1e-10);
        CHECK(t.norm_b_squared() > 0.0);
    }
}

TEST_CASE("grouping identity against the ungrouped double sum") {
    Rng rng(7);
    const int shapes[][3] = {{3, 2, 1}, {3, 2, 2}, {4, 3, 2}, {4, 3, 3},
                             {5, 4, 3}, {2, 2, 2}, {6, 3, 3}, {5, 2, 1},
                             {2, 3, 2}, {3, 4, 1}};
    for (int trial = 0; trial < 400; ++trial) {
        const auto& s = shapes[trial % 10];
        const SffTable t = sample_table(rng, s[0], s[1], s[2]);
        const double grouped = laplacian_v_quadratic(t);
        const double ungrouped = oracle::ungrouped_laplacian(t);
        const double scale = std::max(1.0, std::abs(ungrouped));
        CHECK(std::abs(grouped - ungrouped) <= 1e-10 * scale);
    }
}

TEST_CASE("grouped form is nonnegative in the admissible slope regime") {
    Rng rng(7);
    const int shapes[][3] = {{3, 2, 1}, {3, 2, 2}, {4, 3, 2}, {4, 3, 3},
                             {5, 4, 3}, {2, 2, 2}};
    double worst = 1e9;
    for (int trial = 0; trial < 2000; ++trial) {
        const auto& s = shapes[trial % 6];
        const SffTable t = sample_table(rng, s[0], s[1], s[2]);
        REQUIRE(t.v_squared() <= 9.0 + 1e-9);
        worst = std::min(worst, laplacian_v_quadratic(t));
    }
    CHECK(worst >= -1e-10);
}

TEST_CASE("classification: zero table") {
    SffTable t(4, 3, 2, vec({1.0, 0.5}));
    const auto cls = classify_equality_case(t, 1e-10);
    CHECK(cls.kind == EqualityCase::CaseA);
}

TEST_CASE("classification: antisymmetric pairing family") {
    const SffTable t = case_b_table(5, 3, 0.5);
    const auto cls = classify_equality_case(t, 1e-10);
    REQUIRE(cls.kind == EqualityCase::CaseB);
    CHECK(cls.theta0 == doctest::Approx(std::atan(kSqrt2)).epsilon(1e-12));
    REQUIRE(cls.s.size() == 3);
    for (int i = 0; i < 3; ++i) CHECK(cls.s[i] == doctest::Approx(-0.5));  // h_{2,i1}
}

TEST_CASE("classification: perturbed family is inconsistent") {
    const double tol = 1e-8;
    SffTable t = case_b_table(5, 3, 0.5);
    t.set_h(2, 3, 3, 10.0 * tol);  // spurious coefficient on a slope-free direction
    const auto cls = classify_equality_case(t, tol);
    CHECK(cls.kind == EqualityCase::Inconsistent);
}

TEST_CASE("classification preconditions") {
    Rng rng(9);
    SffTable t = sample_table(rng, 4, 3, 2);
    while (laplacian_v_quadratic(t) <= 1e-6) t = sample_table(rng, 4, 3, 2);
    CHECK_THROWS_AS(classify_equality_case(t, 1e-10), PreconditionViolated);
}

TEST_CASE("spectral symmetry: zero table is austere but not simple") {
    SffTable t(3, 2, 1, vec({1.0}));
    const auto res = austere_check(t);
    CHECK(res.austere);
    CHECK_FALSE(res.simple);
}

TEST_CASE("spectral symmetry: pairing family is simple austere") {
    const SffTable t = case_b_table(3, 2, 0.8);
    const auto res = austere_check(t);
    CHECK(res.austere);
    REQUIRE(res.simple);
    // the distinguished direction is the last coordinate axis
    REQUIRE(res.v0.size() == 3);
    CHECK(std::abs(std::abs(res.v0[2]) - 1.0) < 1e-10);
}

TEST_CASE("spectral symmetry: asymmetric spectrum fails") {
    SffTable t(3, 2, 1, vec({1.0}));
    t.set_h(0, 0, 0, 1.0);
    t.set_h(0, 1, 1, 1.0);
    t.set_h(0, 2, 2, -1.0);  // eigenvalues (1, 1, -1)
    CHECK_FALSE(austere_check(t).austere);
}

TEST_CASE("sampled tables satisfy their own constraints") {
    Rng rng(12);
    for (int trial = 0; trial < 50; ++trial) {
        const SffTable t = sample_table(rng, 4, 3, 3);
        CHECK(t.v_squared() <= 9.0);
        CHECK(t.lambdas()[0] >= t.lambdas()[1]);
        CHECK(t.lambdas()[1] >= t.lambdas()[2]);
        CHECK(t.lambdas()[2] > 0.0);
        for (int a = 0; a < 3; ++a) {
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) {
                    CHECK(t.h(a, i, j) == t.h(a, j, i));
                    CHECK(std::abs(t.h(a, i, j)) <= 1.0);
                }
        }
    }
}
