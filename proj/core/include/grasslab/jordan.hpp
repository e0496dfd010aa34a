#pragma once

#include <Eigen/Core>
#include <functional>
#include <utility>
#include <vector>

#include "grasslab/subspace.hpp"

namespace grasslab {

namespace tol {
/// Default clustering tolerance on the cos^2(theta) scale.
inline constexpr double kClusterTol = 1e-8;
/// Angles below this are treated as exactly zero (for r, lambda counts).
inline constexpr double kZeroAngle = 1e-9;
/// Guard band for the anti-involution: require sin, cos >= this.
inline constexpr double kAngleGuard = 1e-6;
/// Below this value of sin*cos the projection formula for Phi is replaced by
/// the matched-pair construction.
inline constexpr double kPhiFormulaSwitch = 1e-3;
}  // namespace tol

/// One group of numerically coincident principal angles between a pair of
/// subspaces, with an orthonormal frame of its angle space inside P.
struct AngleCluster {
    double theta = 0.0;      // radians in [0, pi/2]
    int multiplicity = 0;    // dimension of the angle space
    Eigen::MatrixXd frame;   // d x multiplicity, columns in P
};

/// Full principal-angle decomposition of a pair (P, Q0): clustered angles,
/// multiplicities and angle-space frames, sorted by descending theta.
class JordanAngleDecomposition {
public:
    JordanAngleDecomposition(Subspace p, Subspace q0, double cluster_tol,
                             std::vector<AngleCluster> clusters)
        : p_(std::move(p)), q0_(std::move(q0)), cluster_tol_(cluster_tol),
          clusters_(std::move(clusters)) {}

    const Subspace& p() const { return p_; }
    const Subspace& q0() const { return q0_; }
    double cluster_tol() const { return cluster_tol_; }
    const std::vector<AngleCluster>& clusters() const { return clusters_; }

    /// Angles expanded by multiplicity, descending.
    std::vector<double> angles() const;

    /// Total multiplicity of the strictly nonzero angles.
    int nonzero_count() const;

    /// (theta, multiplicity) pairs, descending theta.
    std::vector<std::pair<double, int>> multiset() const;

private:
    Subspace p_, q0_;
    double cluster_tol_;
    std::vector<AngleCluster> clusters_;
};

/// Principal angles of P relative to Q0 via the cross-Gram SVD, with a
/// two-sided sine/cosine evaluation per principal direction so the absolute
/// angle accuracy stays near machine precision over the whole range.
/// Eigenvalues of the restricted composite projection agreeing within
/// `cluster_tol` (on the cos^2 scale) merge into one cluster.
JordanAngleDecomposition jordan_decomposition(const Subspace& p, const Subspace& q0,
                                              double cluster_tol = tol::kClusterTol);

/// The four angle multisets of a pair and its complements.
struct SymmetryReport {
    std::vector<std::pair<double, int>> arg_p_q0;
    std::vector<std::pair<double, int>> arg_q0_p;
    std::vector<std::pair<double, int>> arg_pperp_q0perp;
    std::vector<std::pair<double, int>> arg_q0perp_pperp;
    int r = 0;        // shared count of nonzero angles
    int m0 = 0;       // zero-angle multiplicity of (P, Q0): m - r
    int m0_perp = 0;  // zero-angle multiplicity of the complements: n - r
};

SymmetryReport symmetry_report(const Subspace& p, const Subspace& q0,
                               double cluster_tol = tol::kClusterTol);

/// The anti-involutive automorphism attached to one nonzero, nondegenerate
/// angle theta: an isometry Phi of R_theta = P_theta + P_theta_perp with
/// Phi^2 = -Id that swaps the two angle spaces and satisfies
///   sec(theta) proj_Q0(u) = cos(theta) u - sin(theta) Phi(u)
/// on P_theta (and the complement analogue on P_theta_perp).
class AntiInvolution {
public:
    AntiInvolution(double theta, Subspace domain, Eigen::MatrixXd matrix)
        : theta_(theta), domain_(std::move(domain)), matrix_(std::move(matrix)) {}

    double theta() const { return theta_; }
    /// R_theta with frame [P_theta frame | P_theta_perp frame].
    const Subspace& domain() const { return domain_; }
    /// Matrix of Phi in the stored frame of the domain.
    const Eigen::MatrixXd& matrix() const { return matrix_; }
    int half_dim() const { return domain_.dim() / 2; }

    /// Apply Phi to an ambient vector (must lie in the domain).
    Eigen::VectorXd apply(const Eigen::VectorXd& x) const;

    Eigen::MatrixXd p_theta_frame() const { return domain_.frame().leftCols(half_dim()); }
    Eigen::MatrixXd p_theta_perp_frame() const { return domain_.frame().rightCols(half_dim()); }

private:
    double theta_;
    Subspace domain_;
    Eigen::MatrixXd matrix_;
};

/// Builds the anti-involution for the cluster at `theta_cluster_index` of
/// jordan_decomposition(p, q0) (clusters sorted by descending theta).
/// Throws ClusterOutOfRange / DegenerateAngle (guard band at 0 and pi/2).
AntiInvolution anti_involution(const Subspace& p, const Subspace& q0,
                               int theta_cluster_index,
                               double cluster_tol = tol::kClusterTol);

/// Simultaneous orthonormal bases adapted to a pair with w(P, Q0) > 0:
///   proj_Q0 u_a   = cos(theta_a) eps_a          (1 <= a <= m)
///   proj_Q0 v_i   = -sin(theta_i) eps_i         (1 <= i <= n)
///   v_a           = Phi_{theta_a}(u_a)          (1 <= a <= r)
/// with theta_1 >= ... >= theta_r > 0 = theta_{r+1} = ... and the convention
/// theta_i = 0, eps_i = 0 for m < i <= n.  u spans P and eps spans Q0, both
/// orientation-compatibly.
struct AlignedBases {
    Eigen::MatrixXd eps;         // d x m, basis of Q0
    Eigen::MatrixXd u;           // d x m, basis of P
    Eigen::MatrixXd v;           // d x n, basis of P_perp
    std::vector<double> thetas;  // length n, descending, zero-padded
    int r = 0;                   // number of nonzero angles
};

/// Throws NonPositiveW when w(P, Q0) <= 1e-12.
AlignedBases aligned_bases(const Subspace& p, const Subspace& q0,
                           double cluster_tol = tol::kClusterTol);

/// Discrete continuity diagnostic for clusters along a sampled path of
/// subspaces.  Pointwise decompositions carry no smoothness guarantee; this
/// only reports how the sampled angle lists drift and whether the cluster
/// multiplicity pattern stays constant between consecutive samples.
struct ClusterPathDiagnostic {
    double max_theta_jump = 0.0;
    bool constant_multiplicities = true;
};

ClusterPathDiagnostic cluster_path_diagnostic(
    const std::function<Subspace(double)>& path, const Subspace& q0, double t0,
    double t1, int steps, double cluster_tol = tol::kClusterTol);

}  // namespace grasslab
