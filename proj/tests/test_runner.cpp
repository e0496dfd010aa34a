#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "grasslab/runner.hpp"

using namespace grasslab;

namespace {

// Writes text to a temp file and returns its path.
std::string temp_file(const std::string& name, const std::string& text) {
    const std::string path = "/tmp/grasslab_test_" + name;
    std::ofstream out(path);
    out << text;
    return path;
}

nlohmann::ordered_json payload_without_timestamp(const RunResult& result) {
    nlohmann::ordered_json copy = result.report;
    copy.erase("timestamp");
    return copy;
}

}  // namespace

TEST_CASE("inline frame parsing") {
    const auto frames = parse_inline_frames("1 0 0\n0 1 0\n\n0 0 1\n");
    REQUIRE(frames.size() == 2);
    CHECK(frames[0].dim() == 2);
    CHECK(frames[0].ambient_dim() == 3);
    CHECK(frames[1].dim() == 1);
    CHECK_THROWS_AS(parse_inline_frames("1 0\n0 1 0\n"), ConfigError);
    CHECK_THROWS_AS(parse_inline_frames("\n\n"), ConfigError);
}

TEST_CASE("wfun on identical inline frames reports w = 1") {
    RunConfig cfg;
    cfg.command = "wfun";
    cfg.inline_path = temp_file("wfun.txt", "1 0 0 0\n0 1 0 0\n\n1 0 0 0\n0 1 0 0\n");
    const RunResult result = run(cfg);
    CHECK(result.exit_code == 0);
    CHECK(result.report["pass"] == true);
    REQUIRE(result.report["records"].size() == 1);
    CHECK(result.report["records"][0]["w"].get<double>() == doctest::Approx(1.0));
    CHECK(result.report["records"][0]["v"].get<double>() == doctest::Approx(1.0));
    std::remove(cfg.inline_path.c_str());
}

TEST_CASE("angles on random pairs passes its oracle contract") {
    RunConfig cfg;
    cfg.command = "angles";
    cfg.samples = 5;
    cfg.seed = 3;
    const RunResult result = run(cfg);
    CHECK(result.exit_code == 0);
    CHECK(result.report["records"].size() == 5);
    CHECK(result.report["extremal"]["max_oracle_deviation"].get<double>() <= 1e-9);
}

TEST_CASE("an unreachable tolerance turns into exit code 1") {
    RunConfig cfg;
    cfg.command = "angles";
    cfg.samples = 5;
    cfg.seed = 3;
    cfg.cert_tol = 1e-18;
    const RunResult result = run(cfg);
    CHECK(result.exit_code == 1);
    CHECK(result.report["pass"] == false);
}

TEST_CASE("config validation") {
    RunConfig cfg;
    cfg.command = "no-such-command";
    CHECK_THROWS_AS(run(cfg), ConfigError);

    cfg.command = "scan-f";
    cfg.density = 5;
    CHECK_THROWS_AS(run(cfg), ConfigError);

    cfg.density = 0;
    cfg.format = "xml";
    CHECK_THROWS_AS(run(cfg), ConfigError);

    RunConfig no_object;
    no_object.command = "check-immersion";
    CHECK_THROWS_AS(run(no_object), ConfigError);

    RunConfig bad_q0;
    bad_q0.command = "check-immersion";
    bad_q0.object = "sphere";
    bad_q0.q0 = "whatever";
    CHECK_THROWS_AS(run(bad_q0), ConfigError);
}

TEST_CASE("scan-f honors the bound") {
    RunConfig cfg;
    cfg.command = "scan-f";
    cfg.density = 30;
    const RunResult result = run(cfg);
    CHECK(result.exit_code == 0);
    CHECK(result.report["records"][0]["max_found"].get<double>() <= 5.0 / 6.0 + 1e-6);
}

TEST_CASE("certificates embed their configuration") {
    RunConfig cfg;
    cfg.command = "certify-III";
    cfg.samples = 500;
    cfg.seed = 9;
    const RunResult result = run(cfg);
    CHECK(result.exit_code == 0);
    const auto& cert = result.report["records"][0];
    CHECK(cert["lemma"] == "triple-form-positivity");
    CHECK(cert["samples"].get<long>() == 500);
    CHECK(cert["seed"].get<std::uint64_t>() == 9);
    CHECK(cert["pass"] == true);
    CHECK(result.report["config"]["versions"]["grasslab"] == kVersion);
}

TEST_CASE("estimate-eps0 reports positive values for each slope count") {
    RunConfig cfg;
    cfg.command = "estimate-eps0";
    cfg.density = 10;
    cfg.samples = 200;
    const RunResult result = run(cfg);
    CHECK(result.exit_code == 0);
    REQUIRE(result.report["records"].size() == 3);
    for (const auto& rec : result.report["records"]) {
        CHECK(rec["estimate"].get<double>() > 0.0);
    }
}

TEST_CASE("certify-prop35 passes both certificates") {
    RunConfig cfg;
    cfg.command = "certify-prop35";
    cfg.samples = 400;
    cfg.seed = 7;
    const RunResult result = run(cfg);
    CHECK(result.exit_code == 0);
    REQUIRE(result.report["records"].size() == 2);
    CHECK(result.report["records"][0]["extremal_value"].get<double>() >= -1e-10);
    CHECK(result.report["records"][1]["pass"] == true);
}

TEST_CASE("check-immersion on the steep cone graph") {
    RunConfig cfg;
    cfg.command = "check-immersion";
    cfg.object = "lawson-osserman";
    cfg.samples = 5;
    cfg.seed = 1;
    const RunResult result = run(cfg);
    CHECK(result.exit_code == 0);
    CHECK(result.report["pass"] == true);
    for (const auto& rec : result.report["records"]) {
        CHECK(std::abs(rec["w"].get<double>() - 1.0 / 9.0) <= 1e-6);
        CHECK(rec["mean_curvature_norm"].get<double>() < 1e-5);
        CHECK(std::abs(rec["delta_f"].get<double>() - 9.0) <= 1e-4);
    }
}

TEST_CASE("check-immersion accepts an inline reference plane") {
    RunConfig cfg;
    cfg.command = "check-immersion";
    cfg.object = "sphere";
    cfg.samples = 3;
    cfg.q0 = "inline";
    cfg.inline_path = temp_file("q0.txt", "0 0 1\n");
    const RunResult result = run(cfg);
    CHECK(result.report["records"].size() == 3);
    std::remove(cfg.inline_path.c_str());
}

TEST_CASE("bridge-check on the diagonal-torus cone") {
    RunConfig cfg;
    cfg.command = "bridge-check";
    cfg.object = "clifford-cone";
    cfg.samples = 2;
    cfg.seed = 4;
    const RunResult result = run(cfg);
    CHECK(result.exit_code == 0);
    CHECK(result.report["extremal"]["max_abs_diff"].get<double>() <= 1e-3);
}

TEST_CASE("reruns with identical config produce identical payloads") {
    RunConfig cfg;
    cfg.command = "certify-III";
    cfg.samples = 2000;
    cfg.seed = 42;
    const auto first = payload_without_timestamp(run(cfg));
    const auto second = payload_without_timestamp(run(cfg));
    CHECK(first.dump() == second.dump());

    RunConfig imm;
    imm.command = "check-immersion";
    imm.object = "clifford-cone";
    imm.samples = 3;
    imm.seed = 5;
    const auto third = payload_without_timestamp(run(imm));
    const auto fourth = payload_without_timestamp(run(imm));
    CHECK(third.dump() == fourth.dump());
}

TEST_CASE("csv output flattens one record per row") {
    RunConfig cfg;
    cfg.command = "angles";
    cfg.samples = 3;
    cfg.format = "csv";
    cfg.out = "/tmp/grasslab_test_angles.csv";
    const RunResult result = run(cfg);
    write_report(result, cfg);
    std::ifstream in(cfg.out);
    std::string header;
    std::getline(in, header);
    CHECK(header.find("index") != std::string::npos);
    CHECK(header.find("oracle_deviation") != std::string::npos);
    int rows = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) ++rows;
    }
    CHECK(rows == 3);
    std::remove(cfg.out.c_str());
}

TEST_CASE("report carries the six top-level fields in order") {
    RunConfig cfg;
    cfg.command = "scan-f";
    cfg.density = 10;
    const RunResult result = run(cfg);
    std::vector<std::string> keys;
    for (auto it = result.report.begin(); it != result.report.end(); ++it) {
        keys.push_back(it.key());
    }
    const std::vector<std::string> expected = {"command", "config",   "records",
                                               "extremal", "pass", "timestamp"};
    CHECK(keys == expected);
}
