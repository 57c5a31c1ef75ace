#include "vfl/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace vfl {

using nlohmann::json;

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string profile_csv(const ScalingReport& report) {
    std::ostringstream out;
    out << "i,radius,lower,upper,log2_lower,log2_upper\n";
    for (const auto& row : report.rows) {
        out << row.i << ',' << format_double(row.radius) << ',' << format_double(row.lower)
            << ',' << format_double(row.upper) << ',' << format_double(std::log2(row.lower))
            << ',' << format_double(std::log2(row.upper)) << '\n';
    }
    return out.str();
}

std::string sweep_csv(const SweepResult& sweep) {
    std::ostringstream out;
    out << "tau,mass,variation,quotient\n";
    for (const auto& row : sweep.rows) {
        out << format_double(row.tau) << ',' << format_double(row.mass) << ','
            << format_double(row.variation) << ',' << format_double(row.quotient) << '\n';
    }
    return out.str();
}

namespace {

json config_json(const ExampleConfig& cfg) {
    json j;
    j["n"] = cfg.n;
    j["p"] = cfg.p;
    j["alpha1"] = cfg.alpha1;
    j["q1"] = cfg.q1;
    j["alpha2"] = cfg.alpha2;
    j["q2"] = cfg.q2;
    j["window_half_width"] = cfg.window_half_width.to_double();
    j["max_level"] = cfg.max_level;
    if (cfg.weight_s) j["weight_s"] = *cfg.weight_s;
    if (cfg.weight_r) j["weight_r"] = *cfg.weight_r;
    j["smoothing"] = cfg.smoothing;
    j["quadrature"] = {{"de_max_level", cfg.quad.de_max_level},
                       {"de_rel_tol", cfg.quad.de_rel_tol},
                       {"gl_order", cfg.quad.gl_order}};
    return j;
}

json provenance_json(const ExampleVarifold& ex, std::uint64_t seed) {
    const DerivedScales& sc = ex.scales();
    json j;
    j["config"] = config_json(ex.config());
    j["config_hash"] = config_hash(ex.config());
    j["seed"] = seed;
    j["derived"] = {{"a", sc.a}, {"b", sc.b}, {"max_level", sc.max_level},
                    {"level_ratio", tail_ratio(sc)}};
    j["cloud"] = {{"seed", ex.cloud_seed()}, {"size", ex.cloud_size()}};
    return j;
}

} // namespace

std::uint64_t config_hash(const ExampleConfig& cfg) {
    std::string canon = config_json(cfg).dump();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : canon) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string build_manifest_json(const ExampleVarifold& ex) {
    json j = provenance_json(ex, 0);
    j["plane_mass_in_window"] = ex.plane_mass_in_window();
    j["bump_mass_in_window"] = ex.bump_mass_in_window();
    json levels = json::array();
    for (const auto& lv : ex.levels()) {
        levels.push_back({{"level", lv.level},
                          {"cell_count", lv.cell_count},
                          {"tau", lv.tau},
                          {"cell_scale", lv.cell_scale},
                          {"y_center", lv.y_center},
                          {"unit_mass", lv.unit.mass},
                          {"unit_curvature_moment", lv.unit.curvature_moment},
                          {"unit_tilt_moment", lv.unit.tilt_moment},
                          {"cell_mass", lv.cell_mass},
                          {"weight", lv.weight}});
    }
    j["levels"] = std::move(levels);
    j["tail_bound_from_level_0"] = tail_bound(ex, 0, ex.max_level());
    return j.dump(2) + "\n";
}

std::string scaling_report_json(const ExampleVarifold& ex, const ScalingReport& report,
                                std::uint64_t seed) {
    json j;
    j["provenance"] = provenance_json(ex, seed);
    j["kind"] = kind_name(report.spec.kind);
    j["spec"] = {{"q", report.spec.q}, {"p", report.spec.p}, {"s", report.spec.s},
                 {"r", report.spec.r},
                 {"norm", report.spec.norm == PlaneNorm::frobenius ? "frobenius" : "operator"}};
    json rows = json::array();
    for (const auto& row : report.rows) {
        rows.push_back({{"i", row.i}, {"radius", row.radius}, {"lower", row.lower},
                        {"upper", row.upper}});
    }
    j["rows"] = std::move(rows);
    j["fit"] = {{"slope_lower", report.fit.slope_lower},
                {"slope_upper", report.fit.slope_upper},
                {"residual_lower", report.fit.residual_lower},
                {"residual_upper", report.fit.residual_upper}};
    j["predicted_exponent"] = report.predicted;
    j["tolerance"] = report.tolerance;
    j["tail_bound_at_imax"] = report.tail_bound_at_imax;
    j["pass"] = report.pass;
    return j.dump(2) + "\n";
}

std::string dichotomy_json(const ExampleVarifold& ex, const DichotomyConfig& cfg,
                           const DichotomyResult& result, std::uint64_t seed) {
    json j;
    j["provenance"] = provenance_json(ex, seed);
    j["q"] = cfg.q;
    j["nu"] = cfg.nu == DichotomyConfig::Nu::complement_of_t ? "complement_of_T" : "weighted";
    j["bracket_factor"] = cfg.bracket_factor;
    j["trend_factor"] = cfg.trend_factor;
    json rows = json::array();
    for (const auto& row : result.rows) {
        rows.push_back({{"i", row.i}, {"radius", row.radius}, {"nu_ball", row.nu_ball},
                        {"nu_lower", row.nu_lower}, {"nu_upper", row.nu_upper},
                        {"ratio", row.ratio}, {"cube_lower", row.cube_lower},
                        {"cube_upper", row.cube_upper}});
    }
    j["rows"] = std::move(rows);
    j["ratio_min"] = result.ratio_min;
    j["ratio_max"] = result.ratio_max;
    j["strictly_increasing"] = result.strictly_increasing;
    j["strictly_decreasing"] = result.strictly_decreasing;
    j["verdict"] = verdict_name(result.verdict);
    return j.dump(2) + "\n";
}

std::string scan_json(const ScanResult& scan, std::uint64_t seed) {
    json j;
    j["i"] = scan.i;
    j["epsilon"] = scan.epsilon;
    j["gamma"] = scan.gamma;
    j["a_set_threshold"] = scan.a_set_threshold;
    j["seed"] = seed;
    json probes = json::array();
    for (const auto& pr : scan.probes) {
        json rows = json::array();
        for (const auto& row : pr.rows) {
            rows.push_back({{"k", row.k}, {"radius", row.radius}, {"psi", row.psi},
                            {"mass", row.mass}, {"threshold", row.threshold},
                            {"margin", row.margin}});
        }
        json point = json::array();
        for (int t = 0; t < pr.probe.dim(); ++t) point.push_back(pr.probe[t]);
        const char* member = pr.member == Membership::in     ? "in"
                             : pr.member == Membership::out ? "out"
                                                             : "indeterminate";
        probes.push_back({{"probe", point}, {"member", member},
                          {"density_margin", pr.density_margin}, {"rows", rows}});
    }
    j["probes"] = std::move(probes);
    return j.dump(2) + "\n";
}

std::string iso_report_json(const SweepResult& sweep, const IsoResult& ball,
                            const IsoResult& sphere, std::uint64_t seed) {
    json j;
    j["seed"] = seed;
    j["lebesgue_ball"] = {{"mass", ball.mass}, {"variation", ball.variation},
                          {"quotient", ball.quotient}};
    j["unit_sphere"] = {{"mass", sphere.mass}, {"variation", sphere.variation},
                        {"quotient", sphere.quotient}};
    j["ball_quotient_closed_form"] = sweep.ball_quotient;
    j["sweep_max_quotient"] = sweep.max_quotient;
    json rows = json::array();
    for (const auto& row : sweep.rows)
        rows.push_back({{"tau", row.tau}, {"mass", row.mass}, {"variation", row.variation},
                        {"quotient", row.quotient}});
    j["sweep"] = std::move(rows);
    return j.dump(2) + "\n";
}

namespace {

[[noreturn]] void config_parse_fail(const std::string& text, std::size_t byte,
                                    const std::string& what) {
    std::size_t line = 1, col = 1;
    for (std::size_t t = 0; t + 1 < byte && t < text.size(); ++t) {
        if (text[t] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    std::ostringstream msg;
    msg << "config parse error at line " << line << " column " << col << ": " << what;
    throw config_error("json", msg.str());
}

Dyadic dyadic_from_double(double x) {
    // configs carry dyadic-representable window widths
    int e = 0;
    while (x != std::floor(x)) {
        x *= 2.0;
        if (++e > 60) throw config_error("window_half_width",
                                         "window_half_width must be a dyadic rational");
    }
    return Dyadic(static_cast<std::int64_t>(x), e);
}

} // namespace

ExampleConfig parse_example_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        config_parse_fail(text, e.byte, e.what());
    }
    static const char* known[] = {"n", "p", "alpha1", "q1", "alpha2", "q2",
                                  "window_half_width", "max_level", "weight_s", "weight_r",
                                  "smoothing", "quadrature"};
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        bool ok = false;
        for (const char* k : known) ok = ok || it.key() == k;
        if (!ok) throw config_error("unknown field", "config rejects unknown field '" + it.key() + "'");
    }
    ExampleConfig cfg;
    if (doc.contains("n")) cfg.n = doc["n"].get<int>();
    if (doc.contains("p")) cfg.p = doc["p"].get<double>();
    if (doc.contains("alpha1")) cfg.alpha1 = doc["alpha1"].get<double>();
    if (doc.contains("q1")) cfg.q1 = doc["q1"].get<double>();
    if (doc.contains("alpha2")) cfg.alpha2 = doc["alpha2"].get<double>();
    if (doc.contains("q2")) cfg.q2 = doc["q2"].get<double>();
    if (doc.contains("window_half_width"))
        cfg.window_half_width = dyadic_from_double(doc["window_half_width"].get<double>());
    if (doc.contains("max_level")) cfg.max_level = doc["max_level"].get<int>();
    if (doc.contains("weight_s")) cfg.weight_s = doc["weight_s"].get<double>();
    if (doc.contains("weight_r")) cfg.weight_r = doc["weight_r"].get<double>();
    if (doc.contains("smoothing")) cfg.smoothing = doc["smoothing"].get<double>();
    if (doc.contains("quadrature")) {
        const auto& q = doc["quadrature"];
        static const char* qknown[] = {"de_max_level", "de_rel_tol", "gl_order"};
        for (auto it = q.begin(); it != q.end(); ++it) {
            bool ok = false;
            for (const char* k : qknown) ok = ok || it.key() == k;
            if (!ok)
                throw config_error("unknown field",
                                   "quadrature rejects unknown field '" + it.key() + "'");
        }
        if (q.contains("de_max_level")) cfg.quad.de_max_level = q["de_max_level"].get<int>();
        if (q.contains("de_rel_tol")) cfg.quad.de_rel_tol = q["de_rel_tol"].get<double>();
        if (q.contains("gl_order")) cfg.quad.gl_order = q["gl_order"].get<int>();
    }
    return cfg;
}

ExampleConfig load_example_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot read config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_example_config(buf.str());
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw io_error("write failed: " + path);
}

} // namespace vfl
