#include "grasslab/runner.hpp"

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "grasslab/catalog.hpp"
#include "grasslab/certificate.hpp"
#include "grasslab/curvature_algebra.hpp"
#include "grasslab/immersion.hpp"
#include "grasslab/jordan.hpp"
#include "grasslab/wfunction.hpp"

namespace grasslab {

namespace {

using json = nlohmann::ordered_json;

std::string timestamp_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json config_json(const RunConfig& c) {
    json j;
    j["command"] = c.command;
    j["cluster_tol"] = c.cluster_tol;
    j["fd_step"] = c.fd_step;
    j["cert_tol"] = c.cert_tol;
    j["seed"] = c.seed;
    j["density"] = c.density;
    j["samples"] = c.samples;
    j["ray_samples"] = c.ray_samples;
    j["subspace_dim"] = c.subspace_dim;
    j["codim"] = c.codim;
    j["object"] = c.object;
    j["q0"] = c.q0;
    j["inline_path"] = c.inline_path;
    j["format"] = c.format;
    j["versions"] = {{"grasslab", kVersion}};
    return j;
}

std::vector<double> to_vector(const Eigen::VectorXd& v) {
    return {v.data(), v.data() + v.size()};
}

// Reference angles from the eigenvalues of the composite projection
// restricted to P (the cross-Gram normal matrix), arccos of square roots.
std::vector<double> restricted_projection_angles(const Subspace& p, const Subspace& q0) {
    const Eigen::MatrixXd cross = q0.frame().transpose() * p.frame();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cross.transpose() * cross);
    std::vector<double> out;
    for (int i = 0; i < p.dim(); ++i) {
        const double mu = std::clamp(eig.eigenvalues()[i], 0.0, 1.0);
        out.push_back(std::acos(std::sqrt(mu)));
    }
    std::sort(out.rbegin(), out.rend());
    return out;
}

double oracle_deviation(const JordanAngleDecomposition& dec) {
    const auto ref = restricted_projection_angles(dec.p(), dec.q0());
    const auto got = dec.angles();
    double dev = 0.0;
    for (size_t i = 0; i < ref.size(); ++i) dev = std::max(dev, std::abs(ref[i] - got[i]));
    return dev;
}

struct CommandOutput {
    json records = json::array();
    json extremal = json::object();
    bool pass = true;
};

std::pair<Subspace, Subspace> inline_pair(const RunConfig& cfg) {
    if (cfg.inline_path.empty()) throw ConfigError("--inline file required");
    const auto frames = load_inline_frames(cfg.inline_path);
    if (frames.size() < 2) throw ConfigError("inline input needs two frames");
    return {frames[0], frames[1]};
}

CommandOutput run_angles(const RunConfig& cfg) {
    CommandOutput out;
    double worst = 0.0;
    auto record_pair = [&](int index, const Subspace& p, const Subspace& q0) {
        const auto dec = jordan_decomposition(p, q0, cfg.cluster_tol);
        const double dev = oracle_deviation(dec);
        worst = std::max(worst, dev);
        json rec;
        rec["index"] = index;
        rec["m"] = p.dim();
        rec["ambient_dim"] = p.ambient_dim();
        json angles = json::array(), mults = json::array();
        for (const auto& c : dec.clusters()) {
            angles.push_back(c.theta);
            mults.push_back(c.multiplicity);
        }
        rec["angles"] = angles;
        rec["multiplicities"] = mults;
        rec["oracle_deviation"] = dev;
        out.records.push_back(rec);
    };
    if (!cfg.inline_path.empty()) {
        const auto [p, q0] = inline_pair(cfg);
        record_pair(0, p, q0);
    } else {
        Rng rng(cfg.seed);
        const int d = cfg.subspace_dim + cfg.codim;
        for (long s = 0; s < cfg.samples; ++s) {
            record_pair(static_cast<int>(s), Subspace::random(rng, d, cfg.subspace_dim),
                        Subspace::random(rng, d, cfg.subspace_dim));
        }
    }
    out.extremal["max_oracle_deviation"] = worst;
    out.pass = worst <= cfg.cert_tol;
    return out;
}

CommandOutput run_wfun(const RunConfig& cfg) {
    CommandOutput out;
    double worst_product = 0.0, worst_flip = 0.0, worst_bound = 0.0;
    auto record_pair = [&](int index, const Subspace& p, const Subspace& q0) {
        const WValue wv = w_inner(p, q0);
        const double flip_sum = wv.w + orientation_flip(p, q0);
        const double product_dev = std::abs(std::abs(wv.w) - wv.angle_product);
        worst_product = std::max(worst_product, product_dev);
        worst_flip = std::max(worst_flip, std::abs(flip_sum));
        worst_bound = std::max(worst_bound, std::abs(wv.w) - 1.0);
        json rec;
        rec["index"] = index;
        rec["w"] = wv.w;
        rec["angle_product"] = wv.angle_product;
        if (wv.w > tol::kPositiveW) rec["v"] = 1.0 / wv.w;
        rec["flip_sum"] = flip_sum;
        out.records.push_back(rec);
    };
    if (!cfg.inline_path.empty()) {
        const auto [p, q0] = inline_pair(cfg);
        record_pair(0, p, q0);
    } else {
        Rng rng(cfg.seed);
        const int d = cfg.subspace_dim + cfg.codim;
        for (long s = 0; s < cfg.samples; ++s) {
            record_pair(static_cast<int>(s), Subspace::random(rng, d, cfg.subspace_dim),
                        Subspace::random(rng, d, cfg.subspace_dim));
        }
    }
    out.extremal["max_angle_product_deviation"] = worst_product;
    out.extremal["max_flip_sum"] = worst_flip;
    out.pass = worst_product <= 1e-10 && worst_flip <= 1e-12 && worst_bound <= 1e-12;
    return out;
}

CommandOutput run_certify_ii(const RunConfig& cfg) {
    CommandOutput out;
    Rng rng(cfg.seed);
    const long per_cell = std::max<long>(1, cfg.samples / cfg.density);

    Certificate grid_cert;
    grid_cert.lemma = "pair-form-positivity";
    grid_cert.samples = per_cell * cfg.density;
    grid_cert.seed = cfg.seed;
    grid_cert.tolerance = cfg.cert_tol;
    grid_cert.extremal_value = std::numeric_limits<double>::infinity();
    for (int g = 1; g <= cfg.density; ++g) {
        const double product = 2.0 * g / cfg.density;  // lam_a * lam_b in (0, 2]
        for (long s = 0; s < per_cell; ++s) {
            const double h_ab = rng.uniform(-1.0, 1.0);
            const double h_ba = rng.uniform(-1.0, 1.0);
            const double value = term_ii(product, 1.0, h_ab, h_ba);
            if (value < grid_cert.extremal_value) {
                grid_cert.extremal_value = value;
                grid_cert.extremal_point = {product, h_ab, h_ba};
            }
        }
    }
    grid_cert.pass = grid_cert.extremal_value >= -cfg.cert_tol;

    Certificate equality_cert;
    equality_cert.lemma = "pair-form-equality-manifold";
    equality_cert.maximizing = true;
    equality_cert.samples = 100;
    equality_cert.seed = cfg.seed;
    equality_cert.tolerance = cfg.cert_tol;
    equality_cert.extremal_value = 0.0;
    const double sqrt2 = std::sqrt(2.0);
    for (int k = 0; k < 100; ++k) {
        const double t = -2.0 + 4.0 * (k + 0.5) / 100.0;
        const double value = std::abs(term_ii(sqrt2, sqrt2, t, -t));
        if (value > equality_cert.extremal_value) {
            equality_cert.extremal_value = value;
            equality_cert.extremal_point = {t};
        }
    }
    equality_cert.pass = equality_cert.extremal_value <= cfg.cert_tol;

    out.records.push_back(grid_cert.to_json());
    out.records.push_back(equality_cert.to_json());
    out.extremal["min_pair_form"] = grid_cert.extremal_value;
    out.extremal["max_equality_manifold"] = equality_cert.extremal_value;
    out.pass = grid_cert.pass && equality_cert.pass;
    return out;
}

CommandOutput run_certify_iii(const RunConfig& cfg) {
    CommandOutput out;
    const Certificate cert = certify_iii_positive(cfg.samples, cfg.seed);
    out.records.push_back(cert.to_json());
    out.extremal["min_eigenvalue"] = cert.extremal_value;
    out.pass = cert.pass;
    return out;
}

CommandOutput run_scan_f(const RunConfig& cfg) {
    CommandOutput out;
    const ScanResult scan = scan_region_f(cfg.density);
    const double uvw = scan.argmax.u * scan.argmax.v * scan.argmax.w;
    json rec;
    rec["max_found"] = scan.max_found;
    rec["argmax"] = {scan.argmax.u, scan.argmax.v, scan.argmax.w};
    rec["argmax_uvw"] = uvw;
    out.records.push_back(rec);
    out.extremal["max_found"] = scan.max_found;
    out.pass = scan.max_found <= 5.0 / 6.0 + cfg.cert_tol && std::abs(uvw - 9.0) <= 1e-3;
    return out;
}

CommandOutput run_estimate_eps0(const RunConfig& cfg) {
    CommandOutput out;
    double worst = std::numeric_limits<double>::infinity();
    for (int r = 1; r <= 3; ++r) {
        const double value = estimate_eps0(r, cfg.density, cfg.samples, cfg.seed);
        worst = std::min(worst, value);
        json rec;
        rec["r"] = r;
        rec["estimate"] = value;
        rec["pass"] = value > 0.0;
        out.records.push_back(rec);
    }
    out.extremal["min_estimate"] = worst;
    out.pass = worst > 0.0;
    return out;
}

CommandOutput run_certify_prop35(const RunConfig& cfg) {
    CommandOutput out;
    Rng rng(cfg.seed);
    static constexpr int kShapes[][3] = {{3, 2, 1}, {3, 2, 2}, {4, 3, 2}, {4, 3, 3},
                                         {5, 4, 3}, {2, 2, 2}, {6, 3, 3}, {5, 2, 1}};
    constexpr int kNumShapes = 8;

    Certificate sign_cert;
    sign_cert.lemma = "laplacian-v-nonnegativity";
    sign_cert.samples = cfg.samples;
    sign_cert.seed = cfg.seed;
    sign_cert.tolerance = cfg.cert_tol;
    sign_cert.extremal_value = std::numeric_limits<double>::infinity();
    for (long s = 0; s < cfg.samples; ++s) {
        const auto& shape = kShapes[s % kNumShapes];
        const SffTable t = sample_table(rng, shape[0], shape[1], shape[2]);
        const double value = laplacian_v_quadratic(t);
        if (value < sign_cert.extremal_value) {
            sign_cert.extremal_value = value;
            sign_cert.extremal_point = {static_cast<double>(shape[0]),
                                        static_cast<double>(shape[1]),
                                        static_cast<double>(shape[2])};
        }
    }
    sign_cert.pass = sign_cert.extremal_value >= -cfg.cert_tol;

    Certificate equality_cert;
    equality_cert.lemma = "equality-case-structure";
    equality_cert.maximizing = true;
    equality_cert.samples = 100;
    equality_cert.seed = cfg.seed;
    equality_cert.tolerance = cfg.cert_tol;
    equality_cert.extremal_value = 0.0;
    bool classified = true;
    const double theta0 = std::atan(std::sqrt(2.0));
    for (int k = 0; k < 100 && classified; ++k) {
        const double t = -2.0 + 4.0 * (k + 0.5) / 100.0;
        const SffTable table = case_b_table(4, 3, t);
        const double value = std::abs(laplacian_v_quadratic(table));
        equality_cert.extremal_value = std::max(equality_cert.extremal_value, value);
        const auto cls = classify_equality_case(table, cfg.cert_tol);
        classified = cls.kind == EqualityCase::CaseB &&
                     std::abs(cls.theta0 - theta0) <= 1e-9;
    }
    equality_cert.pass = classified && equality_cert.extremal_value <= cfg.cert_tol;

    out.records.push_back(sign_cert.to_json());
    out.records.push_back(equality_cert.to_json());
    out.extremal["min_quadratic_form"] = sign_cert.extremal_value;
    out.extremal["max_equality_family"] = equality_cert.extremal_value;
    out.pass = sign_cert.pass && equality_cert.pass;
    return out;
}

Subspace resolve_q0(const RunConfig& cfg, const CatalogObject& obj) {
    if (cfg.q0 == "coordinate") return obj.default_q0;
    if (cfg.q0 == "inline") {
        const auto frames = load_inline_frames(cfg.inline_path);
        if (frames.empty()) throw ConfigError("inline q0 file holds no frame");
        if (frames[0].ambient_dim() != obj.immersion.ambient_dim() ||
            frames[0].dim() != obj.immersion.codim()) {
            throw ConfigError("inline q0 has incompatible dimensions");
        }
        return frames[0];
    }
    throw ConfigError("--q0 must be 'coordinate' or 'inline'");
}

Eigen::VectorXd sample_domain_point(Rng& rng, const CatalogObject& obj, double margin) {
    const Box& box = obj.immersion.box();
    for (int attempt = 0; attempt < 128; ++attempt) {
        Eigen::VectorXd x = obj.center;
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            x[i] += rng.uniform(-obj.sample_radius, obj.sample_radius);
        }
        if (box.contains(x, margin)) return x;
    }
    return obj.center;
}

CommandOutput run_check_immersion(const RunConfig& cfg) {
    CommandOutput out;
    const CatalogObject obj = make_object(cfg.object);
    const Subspace q0 = resolve_q0(cfg, obj);
    const double step = cfg.fd_step;

    Rng rng(cfg.seed);
    double max_h = 0.0, min_w = std::numeric_limits<double>::infinity(), max_w = -min_w;
    double max_graph_dev = 0.0, budget = 0.0;
    for (long s = 0; s < cfg.samples; ++s) {
        const Eigen::VectorXd x = sample_domain_point(rng, obj, 5.0 * step);
        const ImmersedPatch patch = patch_at(obj.immersion, x, step);
        budget = patch.error_budget;
        const double w = gauss_w(patch, q0);
        const double h_norm = patch.mean_curvature.norm();
        max_h = std::max(max_h, h_norm);
        min_w = std::min(min_w, w);
        max_w = std::max(max_w, w);
        json rec;
        rec["index"] = s;
        rec["point"] = to_vector(x);
        rec["w"] = w;
        if (w > tol::kPositiveW) rec["v"] = 1.0 / w;
        rec["mean_curvature_norm"] = h_norm;
        rec["sff_norm_sq"] = patch.sff_norm_squared();
        if (obj.graph) {
            const double delta = slope_delta(*obj.graph, x, step);
            rec["delta_f"] = delta;
            max_graph_dev = std::max(max_graph_dev, std::abs(delta * w - 1.0));
        }
        out.records.push_back(rec);
    }
    out.extremal["max_mean_curvature_norm"] = max_h;
    out.extremal["min_w"] = min_w;
    out.extremal["max_w"] = max_w;
    out.extremal["error_budget"] = budget;

    out.pass = true;
    if (obj.expect_minimal && max_h > budget) out.pass = false;
    if (obj.expected_w &&
        (std::abs(min_w - *obj.expected_w) > cfg.cert_tol ||
         std::abs(max_w - *obj.expected_w) > cfg.cert_tol)) {
        out.pass = false;
    }
    if (obj.graph) {
        out.extremal["max_slope_identity_deviation"] = max_graph_dev;
        if (max_graph_dev > 1e-8) out.pass = false;
    }
    if (obj.is_cone) {
        const double variation = conelike_check(obj.immersion, q0, cfg.ray_samples, step);
        out.extremal["conelike_variation"] = variation;
        if (variation > 1e-9) out.pass = false;
    }
    return out;
}

CommandOutput run_bridge_check(const RunConfig& cfg) {
    CommandOutput out;
    const CatalogObject obj = make_object(cfg.object);
    const Subspace q0 = resolve_q0(cfg, obj);
    const double step = cfg.fd_step;

    Rng rng(cfg.seed);
    double worst = 0.0;
    for (long s = 0; s < cfg.samples; ++s) {
        const Eigen::VectorXd x = sample_domain_point(rng, obj, 8.0 * step);
        const double direct = laplacian_v_direct(obj.immersion, q0, x, step);
        const ImmersedPatch patch = patch_at(obj.immersion, x, step);
        const double v = 1.0 / gauss_w(patch, q0);
        const double scaled = v * laplacian_v_quadratic(aligned_sff_table(patch, q0));
        const double diff = std::abs(direct - scaled);
        worst = std::max(worst, diff);
        json rec;
        rec["index"] = s;
        rec["point"] = to_vector(x);
        rec["v"] = v;
        rec["laplacian_direct"] = direct;
        rec["v_times_quadratic"] = scaled;
        rec["abs_diff"] = diff;
        out.records.push_back(rec);
    }
    out.extremal["max_abs_diff"] = worst;
    out.pass = worst <= cfg.cert_tol;
    return out;
}

RunConfig resolve_defaults(RunConfig cfg) {
    auto def_samples = [&](long v) { if (cfg.samples == 0) cfg.samples = v; };
    auto def_density = [&](int v) { if (cfg.density == 0) cfg.density = v; };
    auto def_tol = [&](double v) { if (cfg.cert_tol == 0.0) cfg.cert_tol = v; };
    auto def_step = [&](double v) { if (cfg.fd_step == 0.0) cfg.fd_step = v; };

    if (cfg.command == "angles") { def_samples(10); def_tol(1e-9); }
    else if (cfg.command == "wfun") { def_samples(10); def_tol(1e-10); }
    else if (cfg.command == "certify-II") { def_samples(10000); def_density(100); def_tol(1e-12); }
    else if (cfg.command == "certify-III") { def_samples(100000); def_tol(1e-12); }
    else if (cfg.command == "scan-f") { def_density(50); def_tol(1e-6); }
    else if (cfg.command == "estimate-eps0") { def_density(20); def_samples(2000); def_tol(1e-12); }
    else if (cfg.command == "certify-prop35") { def_samples(10000); def_tol(1e-10); }
    else if (cfg.command == "check-immersion") {
        if (cfg.object.empty()) throw ConfigError("--object required");
        def_samples(20);
        def_tol(1e-6);
        if (cfg.fd_step == 0.0) cfg.fd_step = make_object(cfg.object).immersion.recommended_step();
    } else if (cfg.command == "bridge-check") {
        if (cfg.object.empty()) throw ConfigError("--object required");
        def_samples(5);
        def_step(1e-3);
        def_tol(1e-3);
    } else {
        throw ConfigError("unknown command: " + cfg.command);
    }

    if (cfg.cluster_tol <= 0.0 || cfg.cert_tol <= 0.0 || cfg.fd_step < 0.0) {
        throw ConfigError("tolerances must be positive");
    }
    if (cfg.density != 0 && cfg.density < 10) {
        throw ConfigError("density must be at least 10");
    }
    if (cfg.samples < 0) throw ConfigError("samples must be nonnegative");
    if (cfg.format != "json" && cfg.format != "csv") {
        throw ConfigError("format must be json or csv");
    }
    return cfg;
}

}  // namespace

std::vector<Subspace> parse_inline_frames(const std::string& text) {
    std::vector<std::vector<std::vector<double>>> blocks(1);
    std::istringstream stream(text);
    std::string line;
    while (std::getline(stream, line)) {
        std::istringstream row_stream(line);
        std::vector<double> row;
        double value;
        while (row_stream >> value) row.push_back(value);
        if (row.empty()) {
            if (!blocks.back().empty()) blocks.emplace_back();
        } else {
            blocks.back().push_back(std::move(row));
        }
    }
    if (blocks.back().empty()) blocks.pop_back();

    std::vector<Subspace> frames;
    for (const auto& block : blocks) {
        const size_t d = block.front().size();
        Eigen::MatrixXd raw(d, block.size());
        for (size_t r = 0; r < block.size(); ++r) {
            if (block[r].size() != d) throw ConfigError("ragged rows in inline frame");
            for (size_t c = 0; c < d; ++c) raw(c, r) = block[r][c];
        }
        frames.push_back(Subspace::orthonormalize(raw));
    }
    if (frames.empty()) throw ConfigError("no frames in inline input");
    for (const auto& f : frames) {
        if (f.ambient_dim() != frames.front().ambient_dim()) {
            throw ConfigError("inline frames have mixed ambient dimensions");
        }
    }
    return frames;
}

std::vector<Subspace> load_inline_frames(const std::string& path) {
    if (path.empty()) throw ConfigError("--inline file required");
    std::ostringstream text;
    if (path == "-") {
        text << std::cin.rdbuf();
    } else {
        std::ifstream file(path);
        if (!file) throw ConfigError("cannot open inline file: " + path);
        text << file.rdbuf();
    }
    return parse_inline_frames(text.str());
}

RunResult run(const RunConfig& config) {
    const RunConfig cfg = resolve_defaults(config);

    CommandOutput out;
    if (cfg.command == "angles") out = run_angles(cfg);
    else if (cfg.command == "wfun") out = run_wfun(cfg);
    else if (cfg.command == "certify-II") out = run_certify_ii(cfg);
    else if (cfg.command == "certify-III") out = run_certify_iii(cfg);
    else if (cfg.command == "scan-f") out = run_scan_f(cfg);
    else if (cfg.command == "estimate-eps0") out = run_estimate_eps0(cfg);
    else if (cfg.command == "certify-prop35") out = run_certify_prop35(cfg);
    else if (cfg.command == "check-immersion") out = run_check_immersion(cfg);
    else if (cfg.command == "bridge-check") out = run_bridge_check(cfg);

    RunResult result;
    result.report["command"] = cfg.command;
    result.report["config"] = config_json(cfg);
    result.report["records"] = out.records;
    result.report["extremal"] = out.extremal;
    result.report["pass"] = out.pass;
    result.report["timestamp"] = timestamp_now();
    result.exit_code = out.pass ? 0 : 1;
    return result;
}

namespace {

std::string csv_cell(const json& value) {
    if (value.is_array()) {
        std::string joined;
        for (const auto& item : value) {
            if (!joined.empty()) joined += ';';
            joined += item.dump();
        }
        return '"' + joined + '"';
    }
    if (value.is_string()) return '"' + value.get<std::string>() + '"';
    return value.dump();
}

std::string to_csv(const json& report) {
    const json& records = report["records"];
    std::ostringstream out;
    if (records.empty()) return "";
    std::vector<std::string> header;
    for (auto it = records[0].begin(); it != records[0].end(); ++it) {
        header.push_back(it.key());
    }
    for (size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    for (const auto& rec : records) {
        for (size_t i = 0; i < header.size(); ++i) {
            out << (i ? "," : "");
            if (rec.contains(header[i])) out << csv_cell(rec.at(header[i]));
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace

std::string write_report(const RunResult& result, const RunConfig& config) {
    const std::string payload =
        config.format == "csv" ? to_csv(result.report) : result.report.dump(2) + "\n";
    if (config.out.empty()) {
        std::cout << payload;
    } else {
        std::ofstream file(config.out);
        if (!file) throw ConfigError("cannot open output file: " + config.out);
        file << payload;
    }
    return payload;
}

}  // namespace grasslab
