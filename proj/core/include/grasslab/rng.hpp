#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <random>

namespace grasslab {

/// Seeded generator with hand-rolled distributions so that identical seeds
/// give bit-identical streams on every platform/standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Marsaglia polar method.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

    Eigen::VectorXd gaussian_vector(int n) {
        Eigen::VectorXd x(n);
        for (int i = 0; i < n; ++i) x[i] = gaussian();
        return x;
    }

    Eigen::MatrixXd gaussian_matrix(int rows, int cols) {
        Eigen::MatrixXd a(rows, cols);
        for (int j = 0; j < cols; ++j)
            for (int i = 0; i < rows; ++i) a(i, j) = gaussian();
        return a;
    }

    /// Uniform point on the unit sphere in R^n.
    Eigen::VectorXd unit_vector(int n) {
        Eigen::VectorXd x;
        do {
            x = gaussian_vector(n);
        } while (x.norm() < 1e-12);
        return x / x.norm();
    }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace grasslab
