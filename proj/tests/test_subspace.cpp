#include <doctest.h>

#include <Eigen/Dense>

#include "grasslab/subspace.hpp"

using namespace grasslab;

namespace {

Eigen::MatrixXd columns(std::initializer_list<std::initializer_list<double>> rows) {
    const int r = static_cast<int>(rows.size());
    const int c = static_cast<int>(rows.begin()->size());
    Eigen::MatrixXd m(r, c);
    int i = 0;
    for (const auto& row : rows) {
        int j = 0;
        for (double v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

}  // namespace

TEST_CASE("orthonormalize keeps an already orthonormal frame") {
    // vectors (1,0,0), (0,1,0) as columns
    const Eigen::MatrixXd raw = columns({{1, 0}, {0, 1}, {0, 0}});
    const Subspace s = Subspace::orthonormalize(raw);
    CHECK(s.orientation() == 1);
    CHECK((s.frame() - raw).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("orthonormalize straightens a skewed frame") {
    // (2,0,0), (1,1,0) -> e1, e2 with positive change of basis
    const Eigen::MatrixXd raw = columns({{2, 1}, {0, 1}, {0, 0}});
    const Subspace s = Subspace::orthonormalize(raw);
    CHECK(s.orientation() == 1);
    CHECK(s.frame()(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.frame()(1, 1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(s.frame()(1, 0)) < 1e-14);
    CHECK(std::abs(s.frame()(0, 1)) < 1e-14);
}

TEST_CASE("orthonormalize of random vectors spans the same subspace") {
    Rng rng(11);
    const Eigen::MatrixXd raw = rng.gaussian_matrix(8, 5);
    const Subspace s = Subspace::orthonormalize(raw);

    const Eigen::MatrixXd gram = s.frame().transpose() * s.frame();
    CHECK((gram - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-12);

    // Mutual projection residuals: each raw column lies in span(frame) and
    // each frame column lies in span(raw).
    for (int j = 0; j < 5; ++j) {
        const Eigen::VectorXd r = raw.col(j);
        CHECK((r - s.project(r)).norm() < 1e-10 * r.norm());
    }
    const Eigen::MatrixXd pinv_proj =
        raw * (raw.transpose() * raw).ldlt().solve(raw.transpose());
    for (int j = 0; j < 5; ++j) {
        const Eigen::VectorXd f = s.frame().col(j);
        CHECK((f - pinv_proj * f).norm() < 1e-10);
    }
}

TEST_CASE("rank deficient input is rejected") {
    Eigen::MatrixXd raw(3, 2);
    raw << 1, 2, 1, 2, 0, 0;
    CHECK_THROWS_AS(Subspace::orthonormalize(raw), RankDeficient);
}

TEST_CASE("project onto a coordinate plane") {
    const Subspace s = Subspace::coordinate(4, 0, 2);
    Eigen::VectorXd x(4);
    x << 1, 2, 3, 4;
    const Eigen::VectorXd p = s.project(x);
    CHECK(p(0) == 1.0);
    CHECK(p(1) == 2.0);
    CHECK(p(2) == 0.0);
    CHECK(p(3) == 0.0);
}

TEST_CASE("projection is idempotent on members and matches the projector") {
    Rng rng(5);
    const Subspace s = Subspace::random(rng, 7, 3);
    const Eigen::VectorXd inside = s.frame() * rng.gaussian_vector(3);
    CHECK((s.project(inside) - inside).norm() < 1e-12 * inside.norm());

    const Eigen::VectorXd x = rng.gaussian_vector(7);
    const Eigen::VectorXd via_matrix = ProjectionOperator::of(s).matrix * x;
    CHECK((s.project(x) - via_matrix).norm() < 1e-12);
    // residual orthogonal to the subspace
    CHECK((s.frame().transpose() * (x - s.project(x))).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("projection operator invariants") {
    Rng rng(7);
    const Subspace s = Subspace::random(rng, 9, 4);
    const ProjectionOperator p = ProjectionOperator::of(s);
    CHECK(p.symmetry_defect() < 1e-12);
    CHECK(p.idempotency_defect() < 1e-10);
    CHECK(p.trace() == doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("project rejects mismatched dimensions") {
    const Subspace s = Subspace::coordinate(4, 0, 2);
    CHECK_THROWS_AS(s.project(Eigen::VectorXd::Zero(3)), DimensionMismatch);
}

TEST_CASE("complement of a coordinate plane") {
    const Subspace s = Subspace::coordinate(4, 0, 2);
    const Subspace c = s.complement();
    CHECK(c.dim() == 2);
    // complement frame orthogonal to s and spanning e3, e4
    CHECK((s.frame().transpose() * c.frame()).cwiseAbs().maxCoeff() < 1e-12);
    Eigen::VectorXd e3 = Eigen::VectorXd::Zero(4);
    e3(2) = 1;
    CHECK(c.contains(e3, 1e-12));
}

TEST_CASE("complement is an involution at span level") {
    Rng rng(3);
    const Subspace s = Subspace::random(rng, 6, 2);
    const Subspace cc = s.complement().complement();
    for (int j = 0; j < s.dim(); ++j) CHECK(cc.contains(s.frame().col(j), 1e-12));
}

TEST_CASE("projector of complement is the complementary projector") {
    Rng rng(17);
    const Subspace s = Subspace::random(rng, 9, 4);
    const Eigen::MatrixXd sum = s.projector() + s.complement().projector();
    CHECK((sum - Eigen::MatrixXd::Identity(9, 9)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("complement of the full space fails") {
    const Subspace s = Subspace::coordinate(3, 0, 3);
    CHECK_THROWS_AS(s.complement(), FullSpace);
}

TEST_CASE("project is linear") {
    Rng rng(23);
    const Subspace s = Subspace::random(rng, 8, 3);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::VectorXd x = rng.gaussian_vector(8);
        const Eigen::VectorXd y = rng.gaussian_vector(8);
        const double a = rng.uniform(-2.0, 2.0);
        const double b = rng.uniform(-2.0, 2.0);
        const Eigen::VectorXd lhs = s.project(a * x + b * y);
        const Eigen::VectorXd rhs = a * s.project(x) + b * s.project(y);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("swapping two frame vectors flips the orientation of the span") {
    Rng rng(29);
    const Subspace s = Subspace::random(rng, 5, 3);
    Eigen::MatrixXd swapped = s.frame();
    swapped.col(0).swap(swapped.col(1));
    const Subspace t = Subspace::orthonormalize(swapped);
    // Relative orientation of two frames of the same span: determinant of
    // the mutual cross-Gram.
    const double rel = (s.frame().transpose() * t.frame()).determinant() *
                       s.orientation() * t.orientation();
    CHECK(rel == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("flipped reverses the orientation sign only") {
    const Subspace s = Subspace::coordinate(4, 1, 2);
    const Subspace f = s.flipped();
    CHECK(f.orientation() == -s.orientation());
    CHECK((f.frame() - s.frame()).cwiseAbs().maxCoeff() == 0.0);
}
