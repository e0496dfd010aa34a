#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "grasslab/certificate.hpp"
#include "grasslab/errors.hpp"
#include "grasslab/rng.hpp"

namespace grasslab {

/// Table of extrinsic curvature coefficients h_{a,ij} in a frame aligned
/// with a reference plane: tangent dimension n, normal dimension m, and the
/// slopes lambda_1 >= ... >= lambda_r > 0 of the nonzero angles.  h is
/// symmetric in (i, j) and stored once (packed upper triangle per normal
/// direction).
class SffTable {
public:
    SffTable(int n, int m, int r, Eigen::VectorXd lambdas);

    int n() const { return n_; }
    int m() const { return m_; }
    int r() const { return r_; }
    const Eigen::VectorXd& lambdas() const { return lambdas_; }

    double h(int alpha, int i, int j) const { return packed_[alpha][pack(i, j)]; }
    void set_h(int alpha, int i, int j, double value) { packed_[alpha][pack(i, j)] = value; }

    /// Dense symmetric matrix of h_{alpha, . .}.
    Eigen::MatrixXd normal_form(int alpha) const;
    /// Quadratic form in the normal direction nu (coefficients in the frame).
    Eigen::MatrixXd normal_form(const Eigen::VectorXd& nu) const;

    /// Squared Frobenius norm of the full tensor (off-diagonals counted twice).
    double norm_b_squared() const;

    /// Product of (1 + lambda^2); the squared reciprocal-w this table encodes.
    double v_squared() const;

private:
    int pack(int i, int j) const;
    int n_, m_, r_;
    Eigen::VectorXd lambdas_;                   // size r, descending positive
    std::vector<std::vector<double>> packed_;   // m tables of n(n+1)/2
};

/// Diagonal-pair form for one tangent index beyond r:
///   sum_a (2 + 2 la_a^2) h_a^2 + sum_{a != b} la_a la_b h_a h_b,
/// where h_a is the column h_{a, i a}.  Always >= 2 sum h_a^2.
double term_i(const Eigen::VectorXd& lambdas, const Eigen::VectorXd& h_col);

/// Off-diagonal pair form 2 h_ab^2 + 2 h_ba^2 + 2 la_a la_b h_ab h_ba.
double term_ii(double lam_a, double lam_b, double h_ab, double h_ba);

/// Cyclic triple form 2x^2+2y^2+2z^2 + 2ab xy + 2bc yz + 2ca zx.
double term_iii(double a, double b, double c, double x, double y, double z);

/// Coefficient matrix of term_iii as a quadratic form in (x, y, z).
Eigen::Matrix3d term_iii_matrix(double a, double b, double c);

/// Samples (a, b, c) with a >= b >= c > 0 and (1+a^2)(1+b^2)(1+c^2) <= 9 and
/// certifies the smallest eigenvalue of the term_iii form matrix over the
/// sample set; extremal_point is the argmin (a, b, c).
Certificate certify_iii_positive(long samples, std::uint64_t seed);

/// A point of the constraint region u > 3 > v >= w > 1, uvw <= 9.
struct RegionPoint {
    double u = 0.0, v = 0.0, w = 0.0;
    bool valid() const { return u > 3.0 && 3.0 > v && v >= w && w > 1.0 && u * v * w <= 9.0; }
};

/// 1/(3-u) + 1/(3-v) + 1/(3-w); throws RegionViolation outside the region.
double region_f(const RegionPoint& p);

struct ScanResult {
    double max_found = 0.0;
    RegionPoint argmax;
};

/// Grid plus local refinement maximization of region_f over the region.
/// Grids at densities d and k*d are nested, so coarser scans never exceed
/// finer ones beyond refinement noise.
ScanResult scan_region_f(int grid_density);

/// Diagonal-block form for normal index alpha (0-based, alpha < r).
/// `diag_col[b]` holds h_{alpha, bb} and `cross_col[b]` holds h_{b, alpha b}
/// for b = 0..r-1; both must carry h_{alpha, alpha alpha} at b = alpha.
double term_iv(const Eigen::VectorXd& lambdas, int alpha,
               const Eigen::VectorXd& diag_col, const Eigen::VectorXd& cross_col);

/// Smallest generalized eigenvalue of term_iv against the reference form
///   h_{a,aa}^2 + sum_{b != a} (h_{a,bb}^2 + 2 h_{b,ab}^2)
/// at fixed slopes; the exact per-lambda infimum of the ratio.
double term_iv_ratio_min(const Eigen::VectorXd& lambdas, int alpha);

/// Infimum of the term_iv ratio over a slope grid with product constraint
/// (1+la^2) <= 9 and over random coefficient samples.  Positive for r <= 3.
double estimate_eps0(int r, int lambda_grid, long h_samples, std::uint64_t seed);

/// The grouped quadratic form giving (1/v) * Laplacian(v) at a point in
/// terms of the table: free-square block plus term_i/ii/iii/iv sums.
/// Nonnegative whenever v^2 = prod(1+lambda^2) <= 9.
double laplacian_v_quadratic(const SffTable& table);

enum class EqualityCase { CaseA, CaseB, Inconsistent };

struct EqualityClassification {
    EqualityCase kind = EqualityCase::Inconsistent;
    double theta0 = 0.0;   // recovered angle (CaseB)
    Eigen::VectorXd s;     // recovered pairing values s_i = h_{2, i 1}, i > 2
};

/// Structure of tables with vanishing laplacian_v_quadratic: either the
/// whole tensor vanishes (CaseA) or r = 2, lambda = (sqrt2, sqrt2) and the
/// only surviving coefficients pair antisymmetrically across the two normal
/// directions (CaseB).  Throws PreconditionViolated when the form value
/// exceeds `tolerance`.
EqualityClassification classify_equality_case(const SffTable& table, double tolerance);

struct AustereResult {
    bool austere = false;
    bool simple = false;
    Eigen::VectorXd v0;  // distinguished direction when simple
};

/// Spectral symmetry scan: austere when the eigenvalues of the quadratic
/// form in every sampled unit normal direction come in opposite-sign pairs;
/// simple additionally needs one direction carrying all the curvature and a
/// >= 2-dimensional span of normal forms.
AustereResult austere_check(const SffTable& table, double tolerance = 1e-8);

/// Seeded random table with v <= 3: slopes rejection-sampled against
/// prod(1+lambda^2) <= 9, coefficients uniform in [-1, 1] symmetrized.
SffTable sample_table(Rng& rng, int n, int m, int r);

/// The equality-case family: r = 2, lambda = (sqrt2, sqrt2),
/// h_{1,i2} = -h_{2,i1} = t for every i > 2, all other coefficients zero.
SffTable case_b_table(int n, int m, double t);

}  // namespace grasslab
