#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "grasslab/curvature_algebra.hpp"
#include "grasslab/subspace.hpp"

namespace grasslab {

/// Axis-aligned validity box for domain coordinates.
struct Box {
    Eigen::VectorXd lo, hi;
    bool contains(const Eigen::VectorXd& x, double margin = 0.0) const {
        if (x.size() != lo.size()) return false;
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            if (x[i] < lo[i] + margin || x[i] > hi[i] - margin) return false;
        }
        return true;
    }
};

/// Local numerical model of a map from an n-dimensional chart into R^(n+m),
/// with a recommended finite-difference step and a validity box.
class Immersion {
public:
    using Map = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

    Immersion(int domain_dim, int ambient_dim, Map map, Box box,
              double recommended_step = 1e-4)
        : domain_dim_(domain_dim), ambient_dim_(ambient_dim), map_(std::move(map)),
          box_(std::move(box)), recommended_step_(recommended_step) {}

    int domain_dim() const { return domain_dim_; }
    int ambient_dim() const { return ambient_dim_; }
    int codim() const { return ambient_dim_ - domain_dim_; }
    const Box& box() const { return box_; }
    double recommended_step() const { return recommended_step_; }

    Eigen::VectorXd eval(const Eigen::VectorXd& x) const;

private:
    int domain_dim_, ambient_dim_;
    Map map_;
    Box box_;
    double recommended_step_;
};

/// A map f: R^n -> R^m whose graph {(x, f(x))} is the immersion of interest.
class GraphFunction {
public:
    using Map = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

    GraphFunction(int n, int m, Map f, Box box, double recommended_step = 1e-4)
        : n_(n), m_(m), f_(std::move(f)), box_(std::move(box)),
          recommended_step_(recommended_step) {}

    int n() const { return n_; }
    int m() const { return m_; }
    const Box& box() const { return box_; }
    double recommended_step() const { return recommended_step_; }
    Eigen::VectorXd eval(const Eigen::VectorXd& x) const { return f_(x); }

    Immersion as_immersion() const;

private:
    int n_, m_;
    Map f_;
    Box box_;
    double recommended_step_;
};

/// Pointwise first- and second-order data of an immersion: induced metric,
/// orthonormal tangent/normal frames (ambient-orientation compatible),
/// extrinsic curvature coefficients in the tangent frame, and the mean
/// curvature vector.  `error_budget` documents the finite-difference error
/// scale (O(step^2)).
struct ImmersedPatch {
    Eigen::VectorXd base_point;
    Eigen::MatrixXd metric;         // n x n, from the difference Jacobian
    Eigen::MatrixXd tangent_frame;  // d x n orthonormal
    Eigen::MatrixXd normal_frame;   // d x m orthonormal
    std::vector<Eigen::MatrixXd> sff;  // m matrices, n x n, tangent-frame coefficients
    Eigen::VectorXd mean_curvature;    // ambient vector
    double fd_step = 0.0;
    double error_budget = 0.0;

    Subspace normal_space() const { return Subspace(normal_frame); }
    double sff_norm_squared() const;
    /// Trace reconstruction of the mean curvature from the coefficients.
    Eigen::VectorXd mean_curvature_from_sff() const;
};

/// Frames, curvature table and mean curvature at x by central differences.
/// Throws OutOfBox / RankDeficientJacobian.
ImmersedPatch patch_at(const Immersion& im, const Eigen::VectorXd& x, double step);

/// w of the oriented normal plane at the patch against q0.
double gauss_w(const ImmersedPatch& patch, const Subspace& q0);

/// 1 / gauss_w at x, from frames only (no second derivatives).
double gauss_v_at(const Immersion& im, const Subspace& q0, const Eigen::VectorXd& x,
                  double step);

/// sqrt(det(I + Df^T Df)) of a graph by central-difference gradients; the
/// reciprocal of w between the graph normal plane and the coordinate one.
double slope_delta(const GraphFunction& g, const Eigen::VectorXd& x, double step);

/// Degree-one homogeneous map R^4 -> R^3 whose graph is a nonflat minimal
/// cone: (sqrt5 / 2) |x| times the quadratic sphere fibration of x / |x|.
/// Throws AtVertex near the origin.
Eigen::VectorXd lawson_osserman(const Eigen::VectorXd& x);

/// Cone (t, y) -> t * base(y) over an immersion into the unit sphere.
/// Throws NotSpherical when sampled base values leave the sphere by more
/// than 1e-10.
Immersion cone_over(const Immersion& spherical, double t_lo = 0.4, double t_hi = 2.5);

/// Max variation of v = 1/w along sampled rays of a cone immersion (domain
/// coordinate 0 is the ray parameter).  Rounding-level on true cones.
double conelike_check(const Immersion& cone, const Subspace& q0, int ray_samples,
                      double step);

/// Laplace-Beltrami of v = 1/w at x through the coordinate divergence form
/// (1/sqrt g) d_i (sqrt g g^{ij} d_j v), nested central differences.
double laplacian_v_direct(const Immersion& im, const Subspace& q0,
                          const Eigen::VectorXd& x, double step);

/// Max norm of the antisymmetrized covariant derivative of the extrinsic
/// curvature over index triples: zero in flat ambient space, so the value
/// is a pure discretization residual (first order in step or better).
double codazzi_residual(const Immersion& im, const Eigen::VectorXd& x, double step);

/// Curvature table of the patch expressed in the bases aligned with q0
/// (normal directions ordered by descending angle, slopes tan(theta)).
SffTable aligned_sff_table(const ImmersedPatch& patch, const Subspace& q0);

}  // namespace grasslab
