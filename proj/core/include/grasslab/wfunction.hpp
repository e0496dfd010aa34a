#pragma once

#include "grasslab/subspace.hpp"

namespace grasslab {

namespace tol {
/// w values at or below this count as non-positive for v = 1/w.
inline constexpr double kPositiveW = 1e-12;
}  // namespace tol

/// Value of the inner product of two oriented planes of equal dimension
/// (the restriction of the ambient inner product under the exterior-power
/// embedding of the Grassmannian), with the angle-product diagnostic.
struct WValue {
    double w = 0.0;
    int m = 0;               // subspace dimension
    int n = 0;               // codimension
    double angle_product = 0.0;  // product of cos(theta) over the angles
};

/// w(P, Q0) as the determinant of the cross-Gram matrix of oriented
/// orthonormal frames; positive exactly when projection onto Q0 restricted
/// to P preserves orientation.  |w| equals the product of the angle cosines.
WValue w_inner(const Subspace& p, const Subspace& q0);

/// v = 1/w.  Throws NonPositiveW when w <= 1e-12.
double v_value(const Subspace& p, const Subspace& q0);

/// w against the orientation-reversed Q0 (equals -w(P, Q0)).
double orientation_flip(const Subspace& p, const Subspace& q0);

namespace detail {
/// Bare determinant value of w without the angle diagnostic.
double w_det(const Subspace& p, const Subspace& q0);
}  // namespace detail

}  // namespace grasslab
