#include "grasslab/jordan.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "grasslab/wfunction.hpp"

namespace grasslab {

namespace {

// Angle data for one principal direction u of P relative to Q0.
struct PrincipalColumn {
    double theta = 0.0;
    double cos_theta = 0.0;
    double sin_theta = 0.0;
    Eigen::VectorXd u;       // unit vector in P
    Eigen::VectorXd proj_u;  // projection of u onto Q0
};

// The angle is evaluated from both the cosine side |proj u| and the sine
// side |u - proj u|; atan2 keeps full absolute accuracy at both ends of
// [0, pi/2], where either side alone loses half the digits.
PrincipalColumn analyze_direction(const Subspace& q0, const Eigen::VectorXd& u) {
    PrincipalColumn col;
    col.u = u;
    const Eigen::VectorXd t = q0.frame().transpose() * u;
    col.proj_u = q0.frame() * t;
    col.cos_theta = t.norm();
    col.sin_theta = (u - col.proj_u).norm();
    col.theta = std::atan2(col.sin_theta, col.cos_theta);
    return col;
}

// Principal directions of P relative to Q0, ascending theta.  The SVD of the
// cross-Gram matrix supplies the directions; full V also covers the kernel
// (right-angle directions) when dim P > dim Q0.
std::vector<PrincipalColumn> principal_columns(const Subspace& p, const Subspace& q0) {
    const Eigen::MatrixXd cross = q0.frame().transpose() * p.frame();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(cross, Eigen::ComputeFullV);
    std::vector<PrincipalColumn> cols;
    cols.reserve(p.dim());
    for (int a = 0; a < p.dim(); ++a) {
        cols.push_back(analyze_direction(q0, p.frame() * svd.matrixV().col(a)));
    }
    return cols;
}

// Matched partner of u in the complement of P: the unit vector v with
//   sec(theta) proj_Q0(u) = cos(theta) u - sin(theta) v.
// The direct projection formula  v = -sec csc (proj_Pperp proj_Q0) u  is used
// while sin*cos is well conditioned; otherwise v comes from the matched pair
// (cos u - eps)/sin with eps the aligned unit vector in Q0.
Eigen::VectorXd phi_partner(const Subspace& p, const PrincipalColumn& col) {
    const double c = col.cos_theta;
    const double s = col.sin_theta;
    Eigen::VectorXd v;
    if (s * c >= tol::kPhiFormulaSwitch) {
        Eigen::VectorXd w = col.proj_u - p.frame() * (p.frame().transpose() * col.proj_u);
        v = -w / (c * s);
    } else {
        const Eigen::VectorXd eps = col.proj_u / c;
        v = (c * col.u - eps) / s;
    }
    // Drop the residual P-component and renormalize.
    v -= p.frame() * (p.frame().transpose() * v);
    return v / v.norm();
}

std::vector<std::pair<double, int>> multiset_of(const JordanAngleDecomposition& dec) {
    std::vector<std::pair<double, int>> out;
    out.reserve(dec.clusters().size());
    for (const auto& c : dec.clusters()) out.emplace_back(c.theta, c.multiplicity);
    return out;
}

}  // namespace

std::vector<double> JordanAngleDecomposition::angles() const {
    std::vector<double> out;
    for (const auto& c : clusters_) {
        out.insert(out.end(), c.multiplicity, c.theta);
    }
    return out;
}

int JordanAngleDecomposition::nonzero_count() const {
    int r = 0;
    for (const auto& c : clusters_) {
        if (c.theta > tol::kZeroAngle) r += c.multiplicity;
    }
    return r;
}

std::vector<std::pair<double, int>> JordanAngleDecomposition::multiset() const {
    return multiset_of(*this);
}

JordanAngleDecomposition jordan_decomposition(const Subspace& p, const Subspace& q0,
                                              double cluster_tol) {
    if (p.ambient_dim() != q0.ambient_dim()) {
        throw DimensionMismatch("subspaces live in different ambient spaces");
    }
    if (cluster_tol <= 0.0) throw ConfigError("cluster_tol must be positive");

    const auto cols = principal_columns(p, q0);  // ascending theta

    // Merge eigenvalues of the restricted composite projection (cos^2 theta)
    // that agree within cluster_tol; multiplicity is the summed dimension.
    std::vector<AngleCluster> ascending;
    double prev_mu = 2.0;
    std::vector<int> members;
    auto flush = [&]() {
        if (members.empty()) return;
        AngleCluster c;
        c.multiplicity = static_cast<int>(members.size());
        c.frame.resize(p.ambient_dim(), c.multiplicity);
        double theta_sum = 0.0;
        for (int j = 0; j < c.multiplicity; ++j) {
            c.frame.col(j) = cols[members[j]].u;
            theta_sum += cols[members[j]].theta;
        }
        c.theta = theta_sum / c.multiplicity;
        ascending.push_back(std::move(c));
        members.clear();
    };
    for (int a = 0; a < static_cast<int>(cols.size()); ++a) {
        const double mu = cols[a].cos_theta * cols[a].cos_theta;
        if (!members.empty() && prev_mu - mu > cluster_tol) flush();
        members.push_back(a);
        prev_mu = mu;
    }
    flush();

    std::vector<AngleCluster> descending(ascending.rbegin(), ascending.rend());
    return JordanAngleDecomposition(p, q0, cluster_tol, std::move(descending));
}

SymmetryReport symmetry_report(const Subspace& p, const Subspace& q0, double cluster_tol) {
    if (p.ambient_dim() != q0.ambient_dim()) {
        throw DimensionMismatch("subspaces live in different ambient spaces");
    }
    if (p.dim() != q0.dim()) {
        throw DimensionMismatch("symmetry report needs equal-dimensional subspaces");
    }
    const Subspace pp = p.complement();
    const Subspace qp = q0.complement();

    const auto d_pq = jordan_decomposition(p, q0, cluster_tol);

    SymmetryReport rep;
    rep.arg_p_q0 = d_pq.multiset();
    rep.arg_q0_p = jordan_decomposition(q0, p, cluster_tol).multiset();
    rep.arg_pperp_q0perp = jordan_decomposition(pp, qp, cluster_tol).multiset();
    rep.arg_q0perp_pperp = jordan_decomposition(qp, pp, cluster_tol).multiset();
    rep.r = d_pq.nonzero_count();
    rep.m0 = p.dim() - rep.r;
    rep.m0_perp = (p.ambient_dim() - p.dim()) - rep.r;
    return rep;
}

Eigen::VectorXd AntiInvolution::apply(const Eigen::VectorXd& x) const {
    if (x.size() != domain_.ambient_dim()) {
        throw DimensionMismatch("vector dimension does not match ambient dimension");
    }
    const Eigen::VectorXd coords = domain_.frame().transpose() * x;
    return domain_.frame() * (matrix_ * coords);
}

AntiInvolution anti_involution(const Subspace& p, const Subspace& q0,
                               int theta_cluster_index, double cluster_tol) {
    const auto dec = jordan_decomposition(p, q0, cluster_tol);
    if (theta_cluster_index < 0 ||
        theta_cluster_index >= static_cast<int>(dec.clusters().size())) {
        throw ClusterOutOfRange("no cluster with that index");
    }
    const AngleCluster& cluster = dec.clusters()[theta_cluster_index];
    const double theta = cluster.theta;
    if (std::sin(theta) < tol::kAngleGuard || std::cos(theta) < tol::kAngleGuard) {
        throw DegenerateAngle("angle within the guard band of 0 or pi/2");
    }

    const int k = cluster.multiplicity;
    const int d = p.ambient_dim();
    Eigen::MatrixXd u_frame = cluster.frame;
    Eigen::MatrixXd v_frame(d, k);
    std::vector<PrincipalColumn> cols;
    cols.reserve(k);
    for (int a = 0; a < k; ++a) {
        cols.push_back(analyze_direction(q0, u_frame.col(a)));
        Eigen::VectorXd v = phi_partner(p, cols[a]);
        for (int b = 0; b < a; ++b) v -= v_frame.col(b).dot(v) * v_frame.col(b);
        v_frame.col(a) = v / v.norm();
    }

    Eigen::MatrixXd frame(d, 2 * k);
    frame << u_frame, v_frame;
    Subspace domain(std::move(frame));

    // Phi in the [U | V] frame.  Columns for U are exact by construction of
    // V; columns for V come from the complement-side projection formula, or
    // from the matched pair (-u) in the degenerate regime.
    Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(2 * k, 2 * k);
    for (int a = 0; a < k; ++a) {
        phi(k + a, a) = 1.0;
        const double c = cols[a].cos_theta;
        const double s = cols[a].sin_theta;
        if (s * c >= tol::kPhiFormulaSwitch) {
            const Eigen::VectorXd v = v_frame.col(a);
            const Eigen::VectorXd proj_q0_perp = v - q0.frame() * (q0.frame().transpose() * v);
            const Eigen::VectorXd y =
                -(p.frame() * (p.frame().transpose() * proj_q0_perp)) / (c * s);
            phi.col(k + a) = domain.frame().transpose() * y;
        } else {
            phi(a, k + a) = -1.0;
        }
    }
    return AntiInvolution(theta, std::move(domain), std::move(phi));
}

AlignedBases aligned_bases(const Subspace& p, const Subspace& q0, double cluster_tol) {
    if (detail::w_det(p, q0) <= 1e-12) {
        throw NonPositiveW("aligned bases need w(P, Q0) > 0");
    }
    const int d = p.ambient_dim();
    const int m = p.dim();
    const int n = d - m;

    const auto dec = jordan_decomposition(p, q0, cluster_tol);

    // Principal directions in descending angle order, re-analyzed per column.
    std::vector<PrincipalColumn> cols;
    cols.reserve(m);
    for (const auto& cluster : dec.clusters()) {
        for (int j = 0; j < cluster.multiplicity; ++j) {
            cols.push_back(analyze_direction(q0, cluster.frame.col(j)));
        }
    }

    AlignedBases out;
    out.u.resize(d, m);
    for (int a = 0; a < m; ++a) out.u.col(a) = cols[a].u;

    // Orient the u basis with P; the matched eps basis then inherits the
    // orientation of Q0 because w > 0.
    const double det_change = (p.frame().transpose() * out.u).determinant() * p.orientation();
    if (det_change < 0.0) {
        out.u.col(m - 1) = -out.u.col(m - 1);
        cols[m - 1] = analyze_direction(q0, out.u.col(m - 1));
    }

    out.r = 0;
    out.thetas.assign(std::max(m, n), 0.0);
    for (int a = 0; a < m; ++a) {
        out.thetas[a] = cols[a].theta;
        if (a < n && cols[a].theta > tol::kZeroAngle) out.r = a + 1;
    }

    out.eps.resize(d, m);
    for (int a = 0; a < m; ++a) out.eps.col(a) = cols[a].proj_u / cols[a].cos_theta;

    out.v.resize(d, n);
    for (int a = 0; a < out.r; ++a) {
        Eigen::VectorXd v = phi_partner(p, cols[a]);
        for (int b = 0; b < a; ++b) v -= out.v.col(b).dot(v) * out.v.col(b);
        out.v.col(a) = v / v.norm();
    }

    // Complete with an orthonormal basis of the part of P_perp orthogonal to
    // the matched directions (it lies in Q0_perp as well).
    if (out.r < n) {
        Eigen::MatrixXd g = p.complement().frame();
        if (out.r > 0) {
            const auto head = out.v.leftCols(out.r);
            g -= head * (head.transpose() * g);
        }
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(g);
        Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, n - out.r);
        for (int j = 0; j < n - out.r; ++j) {
            Eigen::VectorXd v = q.col(j);
            for (int b = 0; b < out.r + j; ++b) v -= out.v.col(b).dot(v) * out.v.col(b);
            out.v.col(out.r + j) = v / v.norm();
        }
    }
    return out;
}

ClusterPathDiagnostic cluster_path_diagnostic(
    const std::function<Subspace(double)>& path, const Subspace& q0, double t0,
    double t1, int steps, double cluster_tol) {
    if (steps < 2) throw ConfigError("need at least two samples along the path");
    ClusterPathDiagnostic out;
    std::vector<double> prev_angles;
    std::vector<int> prev_mults;
    for (int k = 0; k <= steps; ++k) {
        const double t = t0 + (t1 - t0) * k / steps;
        const auto dec = jordan_decomposition(path(t), q0, cluster_tol);
        const auto angles = dec.angles();
        std::vector<int> mults;
        for (const auto& c : dec.clusters()) mults.push_back(c.multiplicity);
        if (k > 0) {
            if (mults != prev_mults) out.constant_multiplicities = false;
            if (angles.size() == prev_angles.size()) {
                for (size_t i = 0; i < angles.size(); ++i) {
                    out.max_theta_jump =
                        std::max(out.max_theta_jump, std::abs(angles[i] - prev_angles[i]));
                }
            }
        }
        prev_angles = angles;
        prev_mults = mults;
    }
    return out;
}

}  // namespace grasslab
