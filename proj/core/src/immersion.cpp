#include "grasslab/immersion.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "grasslab/jordan.hpp"
#include "grasslab/wfunction.hpp"

namespace grasslab {

namespace {

struct Frames {
    Eigen::MatrixXd jacobian;       // d x n
    Eigen::MatrixXd metric;         // n x n
    Eigen::MatrixXd tangent;        // d x n orthonormal
    Eigen::MatrixXd normal;         // d x m orthonormal
    Eigen::MatrixXd r_factor;       // n x n upper triangular, J = tangent * r
};

Eigen::MatrixXd jacobian_at(const Immersion& im, const Eigen::VectorXd& x, double h) {
    const int n = im.domain_dim();
    Eigen::MatrixXd j(im.ambient_dim(), n);
    Eigen::VectorXd xp = x, xm = x;
    for (int i = 0; i < n; ++i) {
        xp[i] = x[i] + h;
        xm[i] = x[i] - h;
        j.col(i) = (im.eval(xp) - im.eval(xm)) / (2.0 * h);
        xp[i] = x[i];
        xm[i] = x[i];
    }
    return j;
}

// Tangent frame from sign-fixed QR of the Jacobian (oriented with the
// coordinate order); normal frame as the complement, with its last column
// negated if needed so the full frame is positively oriented in the ambient
// space.
Frames frames_at(const Immersion& im, const Eigen::VectorXd& x, double h) {
    const int n = im.domain_dim();
    const int d = im.ambient_dim();
    Frames f;
    f.jacobian = jacobian_at(im, x, h);
    {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(f.jacobian);
        if (svd.singularValues().minCoeff() <= 1e-8) {
            throw RankDeficientJacobian("difference Jacobian is rank deficient");
        }
    }
    f.metric = f.jacobian.transpose() * f.jacobian;

    Eigen::HouseholderQR<Eigen::MatrixXd> qr(f.jacobian);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
    Eigen::MatrixXd r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i) {
        if (r(i, i) < 0.0) {
            q.col(i) = -q.col(i);
            r.row(i) = -r.row(i);
        }
    }
    f.tangent = q.leftCols(n);
    f.normal = q.rightCols(d - n);
    f.r_factor = r;
    if (Eigen::PartialPivLU<Eigen::MatrixXd>(q).determinant() < 0.0) {
        f.normal.col(d - n - 1) = -f.normal.col(d - n - 1);
    }
    return f;
}

void require_inside(const Immersion& im, const Eigen::VectorXd& x, double margin) {
    if (x.size() != im.domain_dim()) {
        throw DimensionMismatch("domain point has the wrong dimension");
    }
    if (!im.box().contains(x, margin)) {
        throw OutOfBox("stencil leaves the validity box");
    }
}

// Second partial derivatives of the map, central differences.
std::vector<std::vector<Eigen::VectorXd>> second_derivatives(const Immersion& im,
                                                             const Eigen::VectorXd& x,
                                                             double h) {
    const int n = im.domain_dim();
    const Eigen::VectorXd f0 = im.eval(x);
    std::vector<std::vector<Eigen::VectorXd>> dd(n, std::vector<Eigen::VectorXd>(n));
    Eigen::VectorXd y = x;
    for (int i = 0; i < n; ++i) {
        y[i] = x[i] + h;
        const Eigen::VectorXd fp = im.eval(y);
        y[i] = x[i] - h;
        const Eigen::VectorXd fm = im.eval(y);
        y[i] = x[i];
        dd[i][i] = (fp - 2.0 * f0 + fm) / (h * h);
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            Eigen::VectorXd z = x;
            z[i] += h; z[j] += h;
            Eigen::VectorXd fpp = im.eval(z);
            z[j] -= 2.0 * h;
            Eigen::VectorXd fpm = im.eval(z);
            z[i] -= 2.0 * h;
            Eigen::VectorXd fmm = im.eval(z);
            z[j] += 2.0 * h;
            Eigen::VectorXd fmp = im.eval(z);
            dd[i][j] = dd[j][i] = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
        }
    }
    return dd;
}

}  // namespace

Eigen::VectorXd Immersion::eval(const Eigen::VectorXd& x) const {
    if (x.size() != domain_dim_) {
        throw DimensionMismatch("domain point has the wrong dimension");
    }
    Eigen::VectorXd y = map_(x);
    if (y.size() != ambient_dim_) {
        throw DimensionMismatch("map returned a value of the wrong dimension");
    }
    return y;
}

Immersion GraphFunction::as_immersion() const {
    const int n = n_;
    const int m = m_;
    auto f = f_;
    return Immersion(
        n, n + m,
        [n, m, f](const Eigen::VectorXd& x) {
            Eigen::VectorXd y(n + m);
            y.head(n) = x;
            y.tail(m) = f(x);
            return y;
        },
        box_, recommended_step_);
}

double ImmersedPatch::sff_norm_squared() const {
    double total = 0.0;
    for (const auto& hmat : sff) total += hmat.squaredNorm();
    return total;
}

Eigen::VectorXd ImmersedPatch::mean_curvature_from_sff() const {
    Eigen::VectorXd h = Eigen::VectorXd::Zero(normal_frame.rows());
    for (size_t a = 0; a < sff.size(); ++a) h += sff[a].trace() * normal_frame.col(a);
    return h;
}

ImmersedPatch patch_at(const Immersion& im, const Eigen::VectorXd& x, double step) {
    require_inside(im, x, 1.0000001 * step);
    const int n = im.domain_dim();
    const int m = im.codim();

    const Frames f = frames_at(im, x, step);
    const auto dd = second_derivatives(im, x, step);

    ImmersedPatch patch;
    patch.base_point = x;
    patch.metric = f.metric;
    patch.tangent_frame = f.tangent;
    patch.normal_frame = f.normal;
    patch.fd_step = step;
    patch.error_budget = 1e3 * step * step;

    // Normal projections of the coordinate second derivatives, then the
    // change of basis to the orthonormal tangent frame.
    const Eigen::MatrixXd r_inv =
        f.r_factor.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(n, n));
    patch.sff.reserve(m);
    for (int a = 0; a < m; ++a) {
        Eigen::MatrixXd b(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) b(i, j) = f.normal.col(a).dot(dd[i][j]);
        patch.sff.push_back(r_inv.transpose() * b * r_inv);
    }

    // Mean curvature by tracing against the inverse metric; independent of
    // the trace of the stored coefficients up to rounding.
    const Eigen::MatrixXd ginv = f.metric.llt().solve(Eigen::MatrixXd::Identity(n, n));
    Eigen::VectorXd h = Eigen::VectorXd::Zero(im.ambient_dim());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) h += ginv(i, j) * dd[i][j];
    patch.mean_curvature = f.normal * (f.normal.transpose() * h);
    return patch;
}

double gauss_w(const ImmersedPatch& patch, const Subspace& q0) {
    return w_inner(patch.normal_space(), q0).w;
}

double gauss_v_at(const Immersion& im, const Subspace& q0, const Eigen::VectorXd& x,
                  double step) {
    if (q0.dim() != im.codim()) {
        throw DimensionMismatch("reference plane dimension must equal the codimension");
    }
    require_inside(im, x, 1.0000001 * step);
    const Frames f = frames_at(im, x, step);
    return v_value(Subspace(f.normal), q0);
}

double slope_delta(const GraphFunction& g, const Eigen::VectorXd& x, double step) {
    if (x.size() != g.n()) throw DimensionMismatch("point has the wrong dimension");
    if (!g.box().contains(x, 1.0000001 * step)) throw OutOfBox("stencil leaves the box");
    Eigen::MatrixXd df(g.m(), g.n());
    Eigen::VectorXd y = x;
    for (int i = 0; i < g.n(); ++i) {
        y[i] = x[i] + step;
        const Eigen::VectorXd fp = g.eval(y);
        y[i] = x[i] - step;
        const Eigen::VectorXd fm = g.eval(y);
        y[i] = x[i];
        df.col(i) = (fp - fm) / (2.0 * step);
    }
    const Eigen::MatrixXd a =
        Eigen::MatrixXd::Identity(g.n(), g.n()) + df.transpose() * df;
    return std::sqrt(Eigen::PartialPivLU<Eigen::MatrixXd>(a).determinant());
}

Eigen::VectorXd lawson_osserman(const Eigen::VectorXd& x) {
    if (x.size() != 4) throw DimensionMismatch("expects a point of R^4");
    const double r = x.norm();
    if (r < 0.05) throw AtVertex("cone vertex neighborhood excluded");
    Eigen::VectorXd eta(3);
    eta << x[0] * x[0] + x[1] * x[1] - x[2] * x[2] - x[3] * x[3],
           2.0 * (x[0] * x[2] + x[1] * x[3]),
           2.0 * (x[1] * x[2] - x[0] * x[3]);
    return (std::sqrt(5.0) / 2.0 / r) * eta;
}

Immersion cone_over(const Immersion& spherical, double t_lo, double t_hi) {
    const int k = spherical.domain_dim();
    // Probe the base on a deterministic grid.
    const Eigen::VectorXd span = spherical.box().hi - spherical.box().lo;
    for (int probe = 0; probe < 9; ++probe) {
        Eigen::VectorXd y = spherical.box().lo + (0.1 + 0.8 * probe / 8.0) * span;
        if (std::abs(spherical.eval(y).norm() - 1.0) > 1e-10) {
            throw NotSpherical("base immersion must take values on the unit sphere");
        }
    }
    Box box;
    box.lo.resize(k + 1);
    box.hi.resize(k + 1);
    box.lo[0] = t_lo;
    box.hi[0] = t_hi;
    box.lo.tail(k) = spherical.box().lo;
    box.hi.tail(k) = spherical.box().hi;
    auto base = spherical;
    return Immersion(
        k + 1, spherical.ambient_dim(),
        [base](const Eigen::VectorXd& ty) {
            return (base.eval(ty.tail(ty.size() - 1)) * ty[0]).eval();
        },
        box, spherical.recommended_step());
}

double conelike_check(const Immersion& cone, const Subspace& q0, int ray_samples,
                      double step) {
    const int k = cone.domain_dim() - 1;
    const Box& box = cone.box();
    const double t_lo = box.lo[0] + 2.0 * step;
    const double t_hi = box.hi[0] - 2.0 * step;

    Rng rng(1);
    double worst = 0.0;
    for (int s = 0; s < ray_samples; ++s) {
        Eigen::VectorXd y(k + 1);
        for (int i = 1; i <= k; ++i) {
            const double margin = 2.0 * step + 0.05 * (box.hi[i] - box.lo[i]);
            y[i] = rng.uniform(box.lo[i] + margin, box.hi[i] - margin);
        }
        double vmin = std::numeric_limits<double>::infinity();
        double vmax = -vmin;
        for (int j = 0; j < 5; ++j) {
            y[0] = t_lo + (t_hi - t_lo) * j / 4.0;
            const double v = gauss_v_at(cone, q0, y, step);
            vmin = std::min(vmin, v);
            vmax = std::max(vmax, v);
        }
        worst = std::max(worst, vmax - vmin);
    }
    return worst;
}

double laplacian_v_direct(const Immersion& im, const Subspace& q0,
                          const Eigen::VectorXd& x, double step) {
    require_inside(im, x, 3.0000001 * step);
    const int n = im.domain_dim();
    const double h = step;

    auto v_of = [&](const Eigen::VectorXd& y) { return gauss_v_at(im, q0, y, h); };
    auto grad_v = [&](const Eigen::VectorXd& y) {
        Eigen::VectorXd g(n);
        Eigen::VectorXd z = y;
        for (int j = 0; j < n; ++j) {
            z[j] = y[j] + h;
            const double vp = v_of(z);
            z[j] = y[j] - h;
            const double vm = v_of(z);
            z[j] = y[j];
            g[j] = (vp - vm) / (2.0 * h);
        }
        return g;
    };
    // Contravariant flux sqrt(g) g^{ij} d_j v at y.
    auto flux = [&](const Eigen::VectorXd& y) {
        const Eigen::MatrixXd g = frames_at(im, y, h).metric;
        const double sqrtg = std::sqrt(g.determinant());
        const Eigen::MatrixXd ginv = g.llt().solve(Eigen::MatrixXd::Identity(n, n));
        return (sqrtg * (ginv * grad_v(y))).eval();
    };

    const double sqrtg0 = std::sqrt(frames_at(im, x, h).metric.determinant());
    double div = 0.0;
    Eigen::VectorXd y = x;
    for (int i = 0; i < n; ++i) {
        y[i] = x[i] + h;
        const double fp = flux(y)[i];
        y[i] = x[i] - h;
        const double fm = flux(y)[i];
        y[i] = x[i];
        div += (fp - fm) / (2.0 * h);
    }
    return div / sqrtg0;
}

double codazzi_residual(const Immersion& im, const Eigen::VectorXd& x, double step) {
    require_inside(im, x, 2.0000001 * step);
    const int n = im.domain_dim();
    const int d = im.ambient_dim();
    const double h = step;

    // Normal-projected coordinate second derivatives at y.
    auto b_at = [&](const Eigen::VectorXd& y) {
        const Frames f = frames_at(im, y, h);
        const auto dd = second_derivatives(im, y, h);
        std::vector<std::vector<Eigen::VectorXd>> b(n, std::vector<Eigen::VectorXd>(n));
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                b[i][j] = f.normal * (f.normal.transpose() * dd[i][j]);
                if (j > i) b[j][i] = b[i][j];
            }
        return b;
    };

    const Frames f0 = frames_at(im, x, h);
    const auto b0 = b_at(x);
    const Eigen::MatrixXd pn = f0.normal * f0.normal.transpose();
    const Eigen::MatrixXd ginv =
        f0.metric.llt().solve(Eigen::MatrixXd::Identity(n, n));

    // Metric derivatives and Christoffel symbols.
    std::vector<Eigen::MatrixXd> dg(n);
    {
        Eigen::VectorXd y = x;
        for (int k = 0; k < n; ++k) {
            y[k] = x[k] + h;
            const Eigen::MatrixXd gp = frames_at(im, y, h).metric;
            y[k] = x[k] - h;
            const Eigen::MatrixXd gm = frames_at(im, y, h).metric;
            y[k] = x[k];
            dg[k] = (gp - gm) / (2.0 * h);
        }
    }
    auto christoffel = [&](int l, int k, int i) {
        double sum = 0.0;
        for (int mm = 0; mm < n; ++mm) {
            sum += ginv(l, mm) * (dg[k](mm, i) + dg[i](mm, k) - dg[mm](k, i));
        }
        return 0.5 * sum;
    };

    // Covariant derivative of the curvature tensor in coordinates.
    std::vector<std::vector<std::vector<Eigen::VectorXd>>> nabla(
        n, std::vector<std::vector<Eigen::VectorXd>>(n, std::vector<Eigen::VectorXd>(n)));
    {
        Eigen::VectorXd y = x;
        for (int k = 0; k < n; ++k) {
            y[k] = x[k] + h;
            const auto bp = b_at(y);
            y[k] = x[k] - h;
            const auto bm = b_at(y);
            y[k] = x[k];
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    Eigen::VectorXd term = pn * ((bp[i][j] - bm[i][j]) / (2.0 * h));
                    for (int l = 0; l < n; ++l) {
                        term -= christoffel(l, k, i) * b0[l][j];
                        term -= christoffel(l, k, j) * b0[i][l];
                    }
                    nabla[k][i][j] = term;
                }
            }
        }
    }

    double residual = 0.0;
    for (int k = 0; k < n; ++k)
        for (int i = k + 1; i < n; ++i)
            for (int j = 0; j < n; ++j)
                residual = std::max(residual, (nabla[k][i][j] - nabla[i][k][j]).norm());
    return residual;
}

SffTable aligned_sff_table(const ImmersedPatch& patch, const Subspace& q0) {
    const int n = static_cast<int>(patch.tangent_frame.cols());
    const int m = static_cast<int>(patch.normal_frame.cols());
    if (q0.dim() != m) {
        throw DimensionMismatch("reference plane dimension must equal the codimension");
    }
    const AlignedBases ab = aligned_bases(patch.normal_space(), q0);

    // Change of bases: aligned normal directions against the patch normal
    // frame, aligned tangent directions against the patch tangent frame.
    const Eigen::MatrixXd e = patch.normal_frame.transpose() * ab.u;   // m x m
    const Eigen::MatrixXd c = patch.tangent_frame.transpose() * ab.v;  // n x n

    Eigen::VectorXd lam(ab.r);
    for (int a = 0; a < ab.r; ++a) {
        lam[a] = std::tan(ab.thetas[a]);
        // rounding can reorder ties inside an angle cluster
        if (a > 0) lam[a] = std::min(lam[a], lam[a - 1]);
    }
    SffTable table(n, m, ab.r, lam);
    for (int a = 0; a < m; ++a) {
        Eigen::MatrixXd ha = Eigen::MatrixXd::Zero(n, n);
        for (int b = 0; b < m; ++b) {
            if (e(b, a) != 0.0) ha += e(b, a) * (c.transpose() * patch.sff[b] * c);
        }
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) table.set_h(a, i, j, 0.5 * (ha(i, j) + ha(j, i)));
    }
    return table;
}

}  // namespace grasslab
