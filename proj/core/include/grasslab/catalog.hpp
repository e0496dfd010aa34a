#pragma once

#include <optional>
#include <string>
#include <vector>

#include "grasslab/immersion.hpp"

namespace grasslab {

/// A named immersion with its reference plane and report expectations.
struct CatalogObject {
    std::string name;
    Immersion immersion;
    std::optional<GraphFunction> graph;  // set for graph-type objects
    Subspace default_q0;
    Eigen::VectorXd center;       // default evaluation point in the domain
    double sample_radius = 0.1;   // neighborhood for sampled reports
    bool expect_minimal = false;
    bool is_cone = false;         // domain coordinate 0 is the ray parameter
    std::optional<double> expected_w;  // known w against default_q0
};

/// Registered object names.
std::vector<std::string> catalog_names();

/// Builds the object registered under `name`; throws ConfigError otherwise.
CatalogObject make_object(const std::string& name);

}  // namespace grasslab
