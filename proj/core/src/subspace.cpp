#include "grasslab/subspace.hpp"

#include <Eigen/Dense>
#include <utility>

namespace grasslab {

namespace {

// Householder QR with column signs fixed so diag(R) > 0.  Keeps the
// change-of-basis determinant from the input positive.
Eigen::MatrixXd thin_q_sign_fixed(const Eigen::MatrixXd& a) {
    const auto k = a.cols();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(a.rows(), k);
    const Eigen::MatrixXd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < k; ++j) {
        if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    }
    return q;
}

}  // namespace

Subspace::Subspace(Eigen::MatrixXd frame, int orientation)
    : frame_(std::move(frame)), orientation_(orientation) {
    if (frame_.cols() < 1 || frame_.cols() > frame_.rows()) {
        throw DimensionMismatch("subspace dimension must satisfy 1 <= k <= ambient_dim");
    }
    if (orientation_ != 1 && orientation_ != -1) {
        throw ConfigError("orientation must be +1 or -1");
    }
    const Eigen::MatrixXd gram = frame_.transpose() * frame_;
    const double defect =
        (gram - Eigen::MatrixXd::Identity(frame_.cols(), frame_.cols())).cwiseAbs().maxCoeff();
    if (defect > tol::kFrameOrthonormality) {
        throw RankDeficient("frame is not orthonormal; use Subspace::orthonormalize");
    }
}

Subspace Subspace::orthonormalize(const Eigen::MatrixXd& raw_frame) {
    if (raw_frame.cols() < 1 || raw_frame.cols() > raw_frame.rows()) {
        throw DimensionMismatch("need 1 <= k <= ambient_dim independent vectors");
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> rank_qr(raw_frame);
    rank_qr.setThreshold(tol::kRankRelative);
    if (rank_qr.rank() < raw_frame.cols()) {
        throw RankDeficient("raw frame is numerically rank deficient");
    }
    // Two passes of Householder QR; the second re-orthogonalizes.
    Eigen::MatrixXd q = thin_q_sign_fixed(thin_q_sign_fixed(raw_frame));
    return Subspace(std::move(q), +1, NoCheck{});
}

Subspace Subspace::coordinate(int ambient_dim, int first, int k) {
    if (first < 0 || k < 1 || first + k > ambient_dim) {
        throw DimensionMismatch("coordinate block out of range");
    }
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(ambient_dim, k);
    for (int j = 0; j < k; ++j) f(first + j, j) = 1.0;
    return Subspace(std::move(f), +1, NoCheck{});
}

Subspace Subspace::random(Rng& rng, int ambient_dim, int k) {
    return orthonormalize(rng.gaussian_matrix(ambient_dim, k));
}

Eigen::VectorXd Subspace::project(const Eigen::VectorXd& x) const {
    if (x.size() != frame_.rows()) {
        throw DimensionMismatch("vector dimension does not match ambient dimension");
    }
    return frame_ * (frame_.transpose() * x);
}

Subspace Subspace::complement() const {
    const int d = ambient_dim();
    const int k = dim();
    if (k == d) throw FullSpace("full space has no complement");
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(frame_);
    Eigen::MatrixXd full_q = qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
    return Subspace(full_q.rightCols(d - k), +1, NoCheck{});
}

bool Subspace::contains(const Eigen::VectorXd& x, double eps) const {
    return (x - project(x)).norm() <= eps * std::max(1.0, x.norm());
}

double ProjectionOperator::symmetry_defect() const {
    return (matrix - matrix.transpose()).cwiseAbs().maxCoeff();
}

double ProjectionOperator::idempotency_defect() const {
    return (matrix * matrix - matrix).cwiseAbs().maxCoeff();
}

}  // namespace grasslab
