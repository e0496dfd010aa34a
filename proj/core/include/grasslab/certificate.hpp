#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace grasslab {

/// Result record of a sampling/scanning certification run.
struct Certificate {
    std::string lemma;  // identifier of the certified statement
    long samples = 0;
    std::uint64_t seed = 0;
    double extremal_value = 0.0;
    std::vector<double> extremal_point;  // argmin or argmax
    bool maximizing = false;             // names the extremal_point key
    double tolerance = 0.0;
    bool pass = false;

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["lemma"] = lemma;
        j["samples"] = samples;
        j["seed"] = seed;
        j["extremal_value"] = extremal_value;
        j[maximizing ? "argmax" : "argmin"] = extremal_point;
        j["tolerance"] = tolerance;
        j["pass"] = pass;
        return j;
    }
};

}  // namespace grasslab
