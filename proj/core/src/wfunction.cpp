#include "grasslab/wfunction.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "grasslab/jordan.hpp"

namespace grasslab {

namespace detail {

double w_det(const Subspace& p, const Subspace& q0) {
    if (p.ambient_dim() != q0.ambient_dim()) {
        throw DimensionMismatch("subspaces live in different ambient spaces");
    }
    if (p.dim() != q0.dim()) {
        throw DimensionMismatch("w needs equal-dimensional subspaces");
    }
    const Eigen::MatrixXd cross = p.frame().transpose() * q0.frame();
    return Eigen::PartialPivLU<Eigen::MatrixXd>(cross).determinant() *
           p.orientation() * q0.orientation();
}

}  // namespace detail

WValue w_inner(const Subspace& p, const Subspace& q0) {
    WValue out;
    out.w = detail::w_det(p, q0);
    out.m = p.dim();
    out.n = p.ambient_dim() - p.dim();
    out.angle_product = 1.0;
    for (double theta : jordan_decomposition(p, q0).angles()) {
        out.angle_product *= std::cos(theta);
    }
    return out;
}

double v_value(const Subspace& p, const Subspace& q0) {
    const double w = detail::w_det(p, q0);
    if (w <= tol::kPositiveW) {
        throw NonPositiveW("v = 1/w needs w > 1e-12");
    }
    return 1.0 / w;
}

double orientation_flip(const Subspace& p, const Subspace& q0) {
    return detail::w_det(p, q0.flipped());
}

}  // namespace grasslab
