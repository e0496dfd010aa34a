#include "grasslab/curvature_algebra.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace grasslab {

namespace {
constexpr double kSqrt8 = 2.8284271247461903;  // largest admissible slope
}

SffTable::SffTable(int n, int m, int r, Eigen::VectorXd lambdas)
    : n_(n), m_(m), r_(r), lambdas_(std::move(lambdas)) {
    if (n_ < 1 || m_ < 1) throw DimensionMismatch("table needs n, m >= 1");
    if (r_ < 0 || r_ > std::min(m_, n_)) {
        throw DimensionMismatch("need 0 <= r <= min(m, n)");
    }
    if (lambdas_.size() != r_) throw DimensionMismatch("lambdas must have length r");
    for (int a = 0; a < r_; ++a) {
        if (lambdas_[a] <= 0.0) throw PreconditionViolated("slopes must be positive");
        if (a > 0 && lambdas_[a] > lambdas_[a - 1] + 1e-14) {
            throw PreconditionViolated("slopes must be descending");
        }
    }
    packed_.assign(m_, std::vector<double>(static_cast<size_t>(n_) * (n_ + 1) / 2, 0.0));
}

int SffTable::pack(int i, int j) const {
    if (i < 0 || j < 0 || i >= n_ || j >= n_) throw DimensionMismatch("tangent index out of range");
    if (i > j) std::swap(i, j);
    return i * n_ - i * (i - 1) / 2 + (j - i);
}

Eigen::MatrixXd SffTable::normal_form(int alpha) const {
    if (alpha < 0 || alpha >= m_) throw DimensionMismatch("normal index out of range");
    Eigen::MatrixXd out(n_, n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) out(i, j) = h(alpha, i, j);
    return out;
}

Eigen::MatrixXd SffTable::normal_form(const Eigen::VectorXd& nu) const {
    if (nu.size() != m_) throw DimensionMismatch("normal coefficient vector must have length m");
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n_, n_);
    for (int a = 0; a < m_; ++a) {
        if (nu[a] != 0.0) out += nu[a] * normal_form(a);
    }
    return out;
}

double SffTable::norm_b_squared() const {
    double total = 0.0;
    for (int a = 0; a < m_; ++a)
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) total += h(a, i, j) * h(a, i, j);
    return total;
}

double SffTable::v_squared() const {
    double prod = 1.0;
    for (int a = 0; a < r_; ++a) prod *= 1.0 + lambdas_[a] * lambdas_[a];
    return prod;
}

double term_i(const Eigen::VectorXd& lambdas, const Eigen::VectorXd& h_col) {
    const int r = static_cast<int>(lambdas.size());
    if (h_col.size() != r) throw DimensionMismatch("term_i needs one coefficient per slope");
    double total = 0.0;
    for (int a = 0; a < r; ++a) {
        total += (2.0 + 2.0 * lambdas[a] * lambdas[a]) * h_col[a] * h_col[a];
        for (int b = 0; b < r; ++b) {
            if (b != a) total += lambdas[a] * lambdas[b] * h_col[a] * h_col[b];
        }
    }
    return total;
}

double term_ii(double lam_a, double lam_b, double h_ab, double h_ba) {
    return 2.0 * h_ab * h_ab + 2.0 * h_ba * h_ba + 2.0 * lam_a * lam_b * h_ab * h_ba;
}

double term_iii(double a, double b, double c, double x, double y, double z) {
    return 2.0 * (x * x + y * y + z * z) +
           2.0 * (a * b * x * y + b * c * y * z + c * a * z * x);
}

Eigen::Matrix3d term_iii_matrix(double a, double b, double c) {
    Eigen::Matrix3d q;
    q << 2.0, a * b, c * a,
         a * b, 2.0, b * c,
         c * a, b * c, 2.0;
    return q;
}

Certificate certify_iii_positive(long samples, std::uint64_t seed) {
    if (samples < 1) throw ConfigError("need at least one sample");
    Rng rng(seed);
    Certificate cert;
    cert.lemma = "triple-form-positivity";
    cert.samples = samples;
    cert.seed = seed;
    cert.tolerance = 1e-12;
    cert.extremal_value = std::numeric_limits<double>::infinity();
    for (long s = 0; s < samples; ++s) {
        double a, b, c;
        do {
            a = rng.uniform(0.0, kSqrt8);
            b = rng.uniform(0.0, kSqrt8);
            c = rng.uniform(0.0, kSqrt8);
            if (a < b) std::swap(a, b);
            if (b < c) std::swap(b, c);
            if (a < b) std::swap(a, b);
        } while (a <= 0.0 || c <= 0.0 ||
                 (1.0 + a * a) * (1.0 + b * b) * (1.0 + c * c) > 9.0);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(term_iii_matrix(a, b, c));
        const double lo = eig.eigenvalues().minCoeff();
        if (lo < cert.extremal_value) {
            cert.extremal_value = lo;
            cert.extremal_point = {a, b, c};
        }
    }
    cert.pass = cert.extremal_value > 0.0;
    return cert;
}

double region_f(const RegionPoint& p) {
    if (!p.valid()) {
        throw RegionViolation("point outside the region u > 3 > v >= w > 1, uvw <= 9");
    }
    return 1.0 / (3.0 - p.u) + 1.0 / (3.0 - p.v) + 1.0 / (3.0 - p.w);
}

ScanResult scan_region_f(int grid_density) {
    if (grid_density < 10) throw ConfigError("grid density must be at least 10");
    const int d = grid_density;

    ScanResult best;
    best.max_found = -std::numeric_limits<double>::infinity();
    auto consider = [&best](double u, double v, double w) {
        if (v < w) std::swap(v, w);
        const RegionPoint p{u, v, w};
        if (!p.valid()) return;
        const double f = region_f(p);
        if (f > best.max_found) {
            best.max_found = f;
            best.argmax = p;
        }
    };
    // On the active constraint surface uvw = 9 the value dominates any point
    // with the same (v, w), since f increases in u.
    auto surface = [&consider](double v, double w) {
        if (v <= 1.0 || w <= 1.0 || v >= 3.0 || w >= 3.0 || v * w >= 3.0) return;
        double u = 9.0 / (v * w);
        while (u * v * w > 9.0) u = std::nextafter(u, 0.0);
        consider(u, v, w);
    };

    for (int i = 1; i < d; ++i) {
        const double v = 1.0 + 2.0 * i / d;
        for (int j = 1; j <= i; ++j) {
            const double w = 1.0 + 2.0 * j / d;
            surface(v, w);
            for (int k = 1; k < d; ++k) consider(3.0 + 6.0 * k / d, v, w);
        }
    }

    // Local refinement: shrinking boxes around the running argmax, staying on
    // the constraint surface.
    double half = 2.0 / d;
    for (int iter = 0; iter < 48; ++iter) {
        const double cv = best.argmax.v;
        const double cw = best.argmax.w;
        for (int i = 0; i <= 8; ++i) {
            for (int j = 0; j <= 8; ++j) {
                surface(cv + half * (i - 4) / 4.0, cw + half * (j - 4) / 4.0);
            }
        }
        half *= 0.7;
    }
    return best;
}

double term_iv(const Eigen::VectorXd& lambdas, int alpha,
               const Eigen::VectorXd& diag_col, const Eigen::VectorXd& cross_col) {
    const int r = static_cast<int>(lambdas.size());
    if (alpha < 0 || alpha >= r) throw ClusterOutOfRange("alpha out of range");
    if (diag_col.size() != r || cross_col.size() != r) {
        throw DimensionMismatch("term_iv needs one coefficient per slope");
    }
    const double la = lambdas[alpha];
    double total = (1.0 + 2.0 * la * la) * diag_col[alpha] * diag_col[alpha];
    for (int b = 0; b < r; ++b) {
        if (b == alpha) continue;
        total += diag_col[b] * diag_col[b] +
                 (2.0 + 2.0 * lambdas[b] * lambdas[b]) * cross_col[b] * cross_col[b];
        total += 2.0 * la * lambdas[b] * diag_col[b] * cross_col[b];
    }
    for (int b = 0; b < r; ++b) {
        for (int g = 0; g < r; ++g) {
            if (b == g) continue;
            total += lambdas[b] * lambdas[g] * cross_col[b] * cross_col[g];
        }
    }
    return total;
}

namespace {

// term_iv as a quadratic form over [x0; (d_b, c_b) for b != alpha] together
// with the diagonal reference form (1; 1, 2 per b).
void term_iv_forms(const Eigen::VectorXd& lambdas, int alpha,
                   Eigen::MatrixXd& q, Eigen::VectorXd& d_diag) {
    const int r = static_cast<int>(lambdas.size());
    const int dim = 2 * r - 1;
    q = Eigen::MatrixXd::Zero(dim, dim);
    d_diag = Eigen::VectorXd::Ones(dim);
    const double la = lambdas[alpha];

    auto d_index = [&](int b) { return 1 + 2 * (b < alpha ? b : b - 1); };
    auto c_index = [&](int b) { return 2 + 2 * (b < alpha ? b : b - 1); };
    // Index of the variable carrying h_{b, alpha b} (x0 doubles as the
    // cross coefficient at b = alpha).
    auto cross_index = [&](int b) { return b == alpha ? 0 : c_index(b); };

    q(0, 0) = 1.0 + 2.0 * la * la;
    for (int b = 0; b < r; ++b) {
        if (b == alpha) continue;
        q(d_index(b), d_index(b)) = 1.0;
        q(c_index(b), c_index(b)) = 2.0 + 2.0 * lambdas[b] * lambdas[b];
        q(d_index(b), c_index(b)) += la * lambdas[b];
        q(c_index(b), d_index(b)) += la * lambdas[b];
        d_diag[c_index(b)] = 2.0;
    }
    for (int b = 0; b < r; ++b) {
        for (int g = b + 1; g < r; ++g) {
            q(cross_index(b), cross_index(g)) += lambdas[b] * lambdas[g];
            q(cross_index(g), cross_index(b)) += lambdas[b] * lambdas[g];
        }
    }
}

}  // namespace

double term_iv_ratio_min(const Eigen::VectorXd& lambdas, int alpha) {
    Eigen::MatrixXd q;
    Eigen::VectorXd d_diag;
    term_iv_forms(lambdas, alpha, q, d_diag);
    const Eigen::VectorXd scale = d_diag.cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd normalized = scale.asDiagonal() * q * scale.asDiagonal();
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(normalized).eigenvalues().minCoeff();
}

double estimate_eps0(int r, int lambda_grid, long h_samples, std::uint64_t seed) {
    if (r < 1 || r > 3) throw ConfigError("slope count must be 1, 2 or 3");
    if (lambda_grid < 2) throw ConfigError("lambda grid density must be at least 2");

    double inf = std::numeric_limits<double>::infinity();
    // Nested descending grid over the admissible slope region.
    auto lam_of = [&](int k) { return kSqrt8 * k / lambda_grid; };
    std::vector<Eigen::VectorXd> grid;
    if (r == 1) {
        for (int k1 = 1; k1 <= lambda_grid; ++k1) {
            Eigen::VectorXd lam(1);
            lam << lam_of(k1);
            grid.push_back(lam);
        }
    } else if (r == 2) {
        for (int k1 = 1; k1 <= lambda_grid; ++k1)
            for (int k2 = 1; k2 <= k1; ++k2) {
                Eigen::VectorXd lam(2);
                lam << lam_of(k1), lam_of(k2);
                grid.push_back(lam);
            }
    } else {
        for (int k1 = 1; k1 <= lambda_grid; ++k1)
            for (int k2 = 1; k2 <= k1; ++k2)
                for (int k3 = 1; k3 <= k2; ++k3) {
                    Eigen::VectorXd lam(3);
                    lam << lam_of(k1), lam_of(k2), lam_of(k3);
                    grid.push_back(lam);
                }
    }
    for (const auto& lam : grid) {
        double prod = 1.0;
        for (int a = 0; a < r; ++a) prod *= 1.0 + lam[a] * lam[a];
        if (prod > 9.0) continue;
        for (int alpha = 0; alpha < r; ++alpha) {
            inf = std::min(inf, term_iv_ratio_min(lam, alpha));
        }
    }

    // Random cross-check of the same ratio away from grid points.
    Rng rng(seed);
    for (long s = 0; s < h_samples; ++s) {
        Eigen::VectorXd lam(r);
        double prod;
        do {
            for (int a = 0; a < r; ++a) lam[a] = rng.uniform(0.0, kSqrt8);
            std::sort(lam.data(), lam.data() + r, std::greater<double>());
            prod = 1.0;
            for (int a = 0; a < r; ++a) prod *= 1.0 + lam[a] * lam[a];
        } while (lam[r - 1] <= 0.0 || prod > 9.0);
        const int alpha = static_cast<int>(s % r);
        Eigen::MatrixXd q;
        Eigen::VectorXd d_diag;
        term_iv_forms(lam, alpha, q, d_diag);
        const Eigen::VectorXd x = rng.gaussian_vector(2 * r - 1);
        const double denom = x.dot(d_diag.asDiagonal() * x);
        if (denom > 1e-14) inf = std::min(inf, x.dot(q * x) / denom);
    }
    return inf;
}

double laplacian_v_quadratic(const SffTable& t) {
    const int n = t.n();
    const int m = t.m();
    const int r = t.r();
    const Eigen::VectorXd& lam = t.lambdas();

    double total = 0.0;
    // Squares that receive no slope coupling: every coefficient with normal
    // index beyond r, and for coupled normal directions the block with both
    // tangent indices beyond r.
    for (int a = 0; a < m; ++a) {
        const int lo = (a < r) ? r : 0;
        for (int i = lo; i < n; ++i)
            for (int j = lo; j < n; ++j) total += t.h(a, i, j) * t.h(a, i, j);
    }
    if (r == 0) return total;

    for (int i = r; i < n; ++i) {
        Eigen::VectorXd col(r);
        for (int a = 0; a < r; ++a) col[a] = t.h(a, i, a);
        total += term_i(lam, col);
        for (int a = 0; a < r; ++a)
            for (int b = a + 1; b < r; ++b)
                total += term_ii(lam[a], lam[b], t.h(a, i, b), t.h(b, i, a));
    }
    for (int a = 0; a < r; ++a)
        for (int b = a + 1; b < r; ++b)
            for (int g = b + 1; g < r; ++g)
                total += term_iii(lam[a], lam[b], lam[g],
                                  t.h(a, b, g), t.h(b, g, a), t.h(g, a, b));
    for (int a = 0; a < r; ++a) {
        Eigen::VectorXd diag_col(r), cross_col(r);
        for (int b = 0; b < r; ++b) {
            diag_col[b] = t.h(a, b, b);
            cross_col[b] = t.h(b, a, b);
        }
        total += term_iv(lam, a, diag_col, cross_col);
    }
    return total;
}

EqualityClassification classify_equality_case(const SffTable& t, double tolerance) {
    if (t.v_squared() > 9.0 + 1e-9) {
        throw PreconditionViolated("classification applies in the v <= 3 regime");
    }
    const double q = laplacian_v_quadratic(t);
    if (q > tolerance) {
        throw PreconditionViolated("quadratic form value exceeds the tolerance");
    }

    EqualityClassification out;
    if (t.norm_b_squared() <= tolerance) {
        out.kind = EqualityCase::CaseA;
        return out;
    }

    out.kind = EqualityCase::Inconsistent;
    const int n = t.n();
    if (t.r() != 2 || n < 3) return out;
    const double sqrt2 = std::sqrt(2.0);
    if (std::abs(t.lambdas()[0] - sqrt2) > tolerance ||
        std::abs(t.lambdas()[1] - sqrt2) > tolerance) {
        return out;
    }

    Eigen::VectorXd s(n - 2);
    for (int i = 2; i < n; ++i) s[i - 2] = t.h(1, i, 0);
    for (int a = 0; a < t.m(); ++a) {
        for (int i = 0; i < n; ++i) {
            for (int j = i; j < n; ++j) {
                const double value = t.h(a, i, j);
                if (a == 1 && i == 0 && j >= 2) {
                    continue;  // the free entries h_{2, i 1} = s_i
                }
                if (a == 0 && i == 1 && j >= 2) {
                    if (std::abs(value + s[j - 2]) > tolerance) return out;  // antisymmetry
                    continue;
                }
                if (std::abs(value) > tolerance) return out;
            }
        }
    }
    out.kind = EqualityCase::CaseB;
    out.theta0 = std::atan(0.5 * (t.lambdas()[0] + t.lambdas()[1]));
    out.s = s;
    return out;
}

AustereResult austere_check(const SffTable& t, double tolerance) {
    const int n = t.n();
    const int m = t.m();

    std::vector<Eigen::VectorXd> directions;
    for (int a = 0; a < m; ++a) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
        e[a] = 1.0;
        directions.push_back(e);
    }
    for (int a = 0; a < m; ++a) {
        for (int b = a + 1; b < m; ++b) {
            Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
            e[a] = e[b] = M_SQRT1_2;
            directions.push_back(e);
            e[b] = -M_SQRT1_2;
            directions.push_back(e);
        }
    }
    Rng mesh_rng(0x517cc1b727220a95ULL);  // fixed: the mesh is part of the contract
    for (int s = 0; s < 50; ++s) directions.push_back(mesh_rng.unit_vector(m));

    AustereResult out;
    out.austere = true;
    for (const auto& nu : directions) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(t.normal_form(nu));
        const Eigen::VectorXd& ev = eig.eigenvalues();  // ascending
        for (int i = 0; i < n; ++i) {
            if (std::abs(ev[i] + ev[n - 1 - i]) > tolerance) {
                out.austere = false;
                break;
            }
        }
        if (!out.austere) break;
    }
    if (!out.austere) return out;

    // Span of the normal forms.
    Eigen::MatrixXd stacked(m, n * n);
    for (int a = 0; a < m; ++a) {
        const Eigen::MatrixXd ha = t.normal_form(a);
        stacked.row(a) = Eigen::Map<const Eigen::VectorXd>(ha.data(), n * n).transpose();
    }
    const Eigen::VectorXd singular_values =
        Eigen::JacobiSVD<Eigen::MatrixXd>(stacked).singularValues();
    int span_dim = 0;
    for (double sv : singular_values) {
        if (sv > tolerance) ++span_dim;
    }
    if (span_dim < 2) return out;  // simple stays false

    // Candidate distinguished direction: top eigenvector of the sum of
    // squared forms (it dominates when all forms share one direction).
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
    for (int a = 0; a < m; ++a) {
        const Eigen::MatrixXd ha = t.normal_form(a);
        c += ha * ha;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ceig(c);
    const Eigen::VectorXd v0 = ceig.eigenvectors().col(n - 1);

    Eigen::HouseholderQR<Eigen::MatrixXd> qr(v0);
    const Eigen::MatrixXd perp =
        (qr.householderQ() * Eigen::MatrixXd::Identity(n, n)).rightCols(n - 1);

    bool simple = true;
    for (const auto& nu : directions) {
        const Eigen::MatrixXd form = t.normal_form(nu);
        if (std::abs(v0.dot(form * v0)) > tolerance) {
            simple = false;
            break;
        }
        if ((perp.transpose() * form * perp).cwiseAbs().maxCoeff() > tolerance) {
            simple = false;
            break;
        }
    }
    out.simple = simple;
    if (simple) out.v0 = v0;
    return out;
}

SffTable sample_table(Rng& rng, int n, int m, int r) {
    Eigen::VectorXd lam(r);
    if (r > 0) {
        double prod;
        do {
            for (int a = 0; a < r; ++a) lam[a] = rng.uniform(0.0, kSqrt8);
            std::sort(lam.data(), lam.data() + r, std::greater<double>());
            prod = 1.0;
            for (int a = 0; a < r; ++a) prod *= 1.0 + lam[a] * lam[a];
        } while (lam[r - 1] <= 0.0 || prod > 9.0);
    }
    SffTable t(n, m, r, lam);
    for (int a = 0; a < m; ++a) {
        Eigen::MatrixXd raw(n, n);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) raw(i, j) = rng.uniform(-1.0, 1.0);
        const Eigen::MatrixXd sym = 0.5 * (raw + raw.transpose());
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) t.set_h(a, i, j, sym(i, j));
    }
    return t;
}

SffTable case_b_table(int n, int m, double t_value) {
    if (n < 3 || m < 2) throw DimensionMismatch("equality family needs n >= 3, m >= 2");
    Eigen::VectorXd lam(2);
    lam << std::sqrt(2.0), std::sqrt(2.0);
    SffTable t(n, m, 2, lam);
    for (int i = 2; i < n; ++i) {
        t.set_h(0, i, 1, t_value);
        t.set_h(1, i, 0, -t_value);
    }
    return t;
}

}  // namespace grasslab
