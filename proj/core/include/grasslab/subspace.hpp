#pragma once

#include <Eigen/Core>

#include "grasslab/errors.hpp"
#include "grasslab/rng.hpp"

namespace grasslab {

namespace tol {
/// Orthonormality of stored frames (max |F^T F - I| entry).
inline constexpr double kFrameOrthonormality = 1e-12;
/// Relative rank cutoff for orthonormalization.
inline constexpr double kRankRelative = 1e-10;
}  // namespace tol

/// Oriented linear subspace of R^d held as an orthonormal frame.  The order
/// of the frame columns together with the orientation sign fixes the
/// orientation; all values are immutable after construction.
class Subspace {
public:
    /// Wraps an already orthonormal frame (d x k, columns are the vectors).
    /// Throws DimensionMismatch on shape problems and RankDeficient if the
    /// columns are not orthonormal to tolerance.
    explicit Subspace(Eigen::MatrixXd frame, int orientation = +1);

    /// Gram-Schmidt replacement: QR with a re-orthogonalization pass.  The
    /// returned frame spans the same subspace as `raw_frame` and is oriented
    /// consistently with it (positive change-of-basis determinant), so the
    /// stored orientation sign is +1.  Throws RankDeficient when the numeric
    /// rank of the input is below its column count.
    static Subspace orthonormalize(const Eigen::MatrixXd& raw_frame);

    /// span(e_{first}, ..., e_{first+k-1}) in R^ambient.
    static Subspace coordinate(int ambient_dim, int first, int k);

    /// Haar-ish random k-plane: orthonormalized Gaussian frame.
    static Subspace random(Rng& rng, int ambient_dim, int k);

    int ambient_dim() const { return static_cast<int>(frame_.rows()); }
    int dim() const { return static_cast<int>(frame_.cols()); }
    const Eigen::MatrixXd& frame() const { return frame_; }
    int orientation() const { return orientation_; }

    /// Same subspace, opposite orientation.
    Subspace flipped() const { return Subspace(frame_, -orientation_, NoCheck{}); }

    /// Orthogonal projection of x onto this subspace.
    Eigen::VectorXd project(const Eigen::VectorXd& x) const;

    /// Dense projector matrix F F^T.
    Eigen::MatrixXd projector() const { return frame_ * frame_.transpose(); }

    /// Orthogonal complement (any orthonormal frame of it, orientation +1).
    /// Throws FullSpace when dim == ambient_dim.
    Subspace complement() const;

    /// True if x lies in the subspace up to `eps` (distance to projection).
    bool contains(const Eigen::VectorXd& x, double eps = 1e-10) const;

private:
    struct NoCheck {};
    Subspace(Eigen::MatrixXd frame, int orientation, NoCheck)
        : frame_(std::move(frame)), orientation_(orientation) {}

    Eigen::MatrixXd frame_;  // d x k, orthonormal columns
    int orientation_;        // +1 or -1
};

/// Symmetric idempotent projector onto a subspace, with its defining checks.
struct ProjectionOperator {
    Eigen::MatrixXd matrix;

    static ProjectionOperator of(const Subspace& s) { return {s.projector()}; }

    double symmetry_defect() const;     // max |M - M^T|
    double idempotency_defect() const;  // max |M^2 - M|
    double trace() const { return matrix.trace(); }
};

}  // namespace grasslab
