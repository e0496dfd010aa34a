#include "grasslab/catalog.hpp"

#include <cmath>

namespace grasslab {

namespace {

Box square_box(int dims, double lo, double hi) {
    Box b;
    b.lo = Eigen::VectorXd::Constant(dims, lo);
    b.hi = Eigen::VectorXd::Constant(dims, hi);
    return b;
}

Eigen::VectorXd vec2(double a, double b) {
    Eigen::VectorXd v(2);
    v << a, b;
    return v;
}

CatalogObject affine_object() {
    // Dyadic coefficients keep the difference stencils exactly flat.
    Eigen::Matrix2d a;
    a << 0.5, -0.25, 1.5, 0.75;
    GraphFunction g(2, 2,
                    [a](const Eigen::VectorXd& x) { return (a * x).eval(); },
                    square_box(2, -1.0, 1.0), 0x1p-13);
    CatalogObject obj{"affine", g.as_immersion(), g, Subspace::coordinate(4, 2, 2),
                      vec2(0.125, -0.25)};
    obj.sample_radius = 0.25;
    obj.expect_minimal = true;
    return obj;
}

CatalogObject sphere_object() {
    const double rho = 1.25;
    GraphFunction g(2, 1,
                    [rho](const Eigen::VectorXd& x) {
                        Eigen::VectorXd y(1);
                        y << std::sqrt(rho * rho - x.squaredNorm());
                        return y;
                    },
                    square_box(2, -0.375, 0.375), 1e-4);
    CatalogObject obj{"sphere", g.as_immersion(), g, Subspace::coordinate(3, 2, 1),
                      vec2(0.0625, -0.125)};
    obj.sample_radius = 0.15;
    return obj;
}

CatalogObject helicoid_object() {
    Box box;
    box.lo = vec2(-0.75, 0.75);
    box.hi = vec2(0.75, 1.5);
    Immersion im(2, 3,
                 [](const Eigen::VectorXd& s) {
                     Eigen::VectorXd y(3);
                     y << s[1] * std::cos(s[0]), s[1] * std::sin(s[0]), s[0];
                     return y;
                 },
                 box, 1e-4);
    // Oriented unit normal at the center chart point.
    const double u = 0.125, v = 1.0;
    Eigen::MatrixXd nu(3, 1);
    nu << -std::sin(u), std::cos(u), -v;
    nu /= nu.norm();
    CatalogObject obj{"helicoid", im, std::nullopt, Subspace(nu), vec2(u, v)};
    obj.sample_radius = 0.2;
    obj.expect_minimal = true;
    return obj;
}

Immersion clifford_torus() {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    return Immersion(2, 4,
                     [inv_sqrt2](const Eigen::VectorXd& s) {
                         Eigen::VectorXd y(4);
                         y << std::cos(s[0]), std::sin(s[0]), std::cos(s[1]), std::sin(s[1]);
                         return (inv_sqrt2 * y).eval();
                     },
                     square_box(2, -1.2, 1.2), 1e-4);
}

CatalogObject clifford_cone_object() {
    Immersion cone = cone_over(clifford_torus());
    Eigen::VectorXd center(3);
    center << 1.0, 0.25, 0.5;
    const Subspace q0 = patch_at(cone, center, 1e-4).normal_space();
    CatalogObject obj{"clifford-cone", cone, std::nullopt, q0, center};
    obj.sample_radius = 0.15;
    obj.expect_minimal = true;
    obj.is_cone = true;
    return obj;
}

CatalogObject lawson_osserman_object() {
    GraphFunction g(4, 3, [](const Eigen::VectorXd& x) { return lawson_osserman(x); },
                    square_box(4, -1.5, 1.5), 1e-4);
    Eigen::VectorXd center = Eigen::VectorXd::Constant(4, 0.5);  // unit point
    CatalogObject obj{"lawson-osserman", g.as_immersion(), g,
                      Subspace::coordinate(7, 4, 3), center};
    obj.sample_radius = 0.1;
    obj.expect_minimal = true;
    obj.expected_w = 1.0 / 9.0;
    return obj;
}

CatalogObject paraboloid_object() {
    GraphFunction g(2, 1,
                    [](const Eigen::VectorXd& x) {
                        Eigen::VectorXd y(1);
                        y << 0.75 + 0.5 * x.squaredNorm();
                        return y;
                    },
                    square_box(2, 0.25, 1.25), 1e-4);
    CatalogObject obj{"paraboloid", g.as_immersion(), g, Subspace::coordinate(3, 2, 1),
                      vec2(0.5, 0.75)};
    obj.sample_radius = 0.2;
    return obj;
}

CatalogObject circle_cone_object(const std::string& name, double radius) {
    const double height = std::sqrt(1.0 - radius * radius);
    Box base_box = square_box(1, -1.0, 1.0);
    Immersion circle(1, 3,
                     [radius, height](const Eigen::VectorXd& s) {
                         Eigen::VectorXd y(3);
                         y << radius * std::cos(s[0]), radius * std::sin(s[0]), height;
                         return y;
                     },
                     base_box, 1e-4);
    Immersion cone = cone_over(circle);
    Eigen::VectorXd center = vec2(1.0, 0.25);
    const Subspace q0 = patch_at(cone, center, 1e-4).normal_space();
    CatalogObject obj{name, cone, std::nullopt, q0, center};
    obj.sample_radius = 0.2;
    obj.expect_minimal = (radius == 1.0);
    obj.is_cone = true;
    return obj;
}

}  // namespace

std::vector<std::string> catalog_names() {
    return {"affine",          "sphere",   "helicoid",          "clifford-cone",
            "lawson-osserman", "paraboloid", "small-circle-cone", "equator-cone"};
}

CatalogObject make_object(const std::string& name) {
    if (name == "affine") return affine_object();
    if (name == "sphere") return sphere_object();
    if (name == "helicoid") return helicoid_object();
    if (name == "clifford-cone") return clifford_cone_object();
    if (name == "lawson-osserman") return lawson_osserman_object();
    if (name == "paraboloid") return paraboloid_object();
    if (name == "small-circle-cone") return circle_cone_object("small-circle-cone", 0.5);
    if (name == "equator-cone") return circle_cone_object("equator-cone", 1.0);
    throw ConfigError("unknown object: " + name);
}

}  // namespace grasslab
