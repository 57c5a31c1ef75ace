// Command-line front end: builds the multiscale example, runs the scaling,
// isoperimetric, excess-scan and dichotomy experiments, and emits CSV/JSON
// reports with full provenance. Exit code 0 = pass, 1 = verdict failure,
// 2 = configuration or usage error.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vfl/example.hpp"
#include "vfl/iso.hpp"
#include "vfl/report.hpp"
#include "vfl/scaling.hpp"
#include "vfl/varifold.hpp"

namespace {

using namespace vfl;

struct CommonArgs {
    std::string config_path;
    std::string out_path;
    std::string format = "json";
    std::uint64_t seed = 0x5eed;
};

ExampleConfig resolve_config(const CommonArgs& args) {
    ExampleConfig cfg;
    if (!args.config_path.empty()) cfg = load_example_config(args.config_path);
    return cfg;
}

void emit(const CommonArgs& args, const std::string& content) {
    if (args.out_path.empty())
        std::cout << content;
    else
        write_text_file(args.out_path, content);
}

QuantityKind parse_kind(const std::string& name) {
    if (name == "mass" || name == "mass_minus_plane") return QuantityKind::mass_minus_plane;
    if (name == "height") return QuantityKind::height;
    if (name == "tilt") return QuantityKind::tilt;
    if (name == "curvature" || name == "curvature_mass") return QuantityKind::curvature_mass;
    if (name == "weighted" || name == "weighted_mass") return QuantityKind::weighted_mass;
    if (name == "weighted-power" || name == "weighted_power_mass")
        return QuantityKind::weighted_power_mass;
    throw config_error("kind", "unknown quantity kind '" + name + "'");
}

int run_derive(const CommonArgs& args) {
    ExampleConfig cfg = resolve_config(args);
    DerivedScales sc = derive_parameters(cfg);
    ExampleVarifold ex = build_example(cfg);
    emit(args, build_manifest_json(ex));
    std::cerr << "derived a=" << format_double(sc.a) << " b=" << format_double(sc.b)
              << " seed=" << args.seed << "\n";
    return 0;
}

int run_build(const CommonArgs& args) {
    ExampleConfig cfg = resolve_config(args);
    ExampleVarifold ex = build_example(cfg);
    emit(args, build_manifest_json(ex));
    return 0;
}

int run_report_scaling(const CommonArgs& args, const std::string& kind_name_arg,
                       int i_min, int i_max, double tolerance, const std::string& norm) {
    ExampleConfig cfg = resolve_config(args);
    ExampleVarifold ex = build_example(cfg);
    ex.set_cloud(args.seed, ex.cloud_size());
    QuantitySpec spec = QuantitySpec::from_config(parse_kind(kind_name_arg), cfg);
    if (norm == "operator") spec.norm = PlaneNorm::operator_norm;
    ProfileOptions opts;
    opts.i_min = i_min;
    opts.i_max = i_max;
    if (tolerance > 0.0) {
        opts.slope_tolerance = tolerance;
    } else if (spec.kind == QuantityKind::height || spec.kind == QuantityKind::tilt) {
        opts.slope_tolerance = 0.2;
    }
    ScalingReport report = dyadic_profile(ex, spec, opts);
    emit(args, args.format == "csv" ? profile_csv(report)
                                    : scaling_report_json(ex, report, args.seed));
    std::cerr << kind_name(spec.kind) << ": slopes " << format_double(report.fit.slope_lower)
              << " / " << format_double(report.fit.slope_upper) << " predicted "
              << format_double(report.predicted) << (report.pass ? " PASS" : " FAIL") << "\n";
    return report.pass ? 0 : 1;
}

int run_report_iso(const CommonArgs& args, int n, int tau_steps) {
    std::vector<double> taus;
    for (int t = 1; t <= tau_steps; ++t) taus.push_back(double(t) / tau_steps);
    SweepResult sweep = profile_sweep(taus, n);
    auto ball = make_canonical(CanonicalKind::lebesgue_ball, {n, 1.0, 48, 1.0});
    auto sphere = make_canonical(CanonicalKind::sphere, {n, 1.0, 64, 1.0});
    IsoResult ball_iso = iso_quotient(ball);
    IsoResult sphere_iso = iso_quotient(sphere);
    emit(args, args.format == "csv" ? sweep_csv(sweep)
                                    : iso_report_json(sweep, ball_iso, sphere_iso, args.seed));
    bool pass = std::fabs(ball_iso.quotient - lebesgue_ball_quotient(n)) <= 1e-9;
    std::cerr << "lebesgue quotient " << format_double(ball_iso.quotient)
              << (pass ? " PASS" : " FAIL") << "\n";
    return pass ? 0 : 1;
}

int run_scan(const CommonArgs& args, int i, const std::vector<double>& probe_flat,
             const std::string& expect) {
    ExampleConfig cfg = resolve_config(args);
    ExampleVarifold ex = build_example(cfg);
    ex.set_cloud(args.seed, ex.cloud_size());
    std::vector<Vec> probes;
    if (probe_flat.empty()) {
        probes = {Vec{0.0, 0.0, 0.0}, Vec{0.0, 0.25, -0.125}, Vec{0.0, -0.5, 0.375}};
    } else {
        if (probe_flat.size() % (cfg.n + 1) != 0)
            throw config_error("probe", "probe coordinates must come in ambient tuples");
        for (std::size_t t = 0; t < probe_flat.size(); t += cfg.n + 1) {
            Vec p(cfg.n + 1);
            for (int c = 0; c <= cfg.n; ++c) p[c] = probe_flat[t + c];
            probes.push_back(p);
        }
    }
    ScanOptions opts;
    opts.seed = args.seed;
    ScanResult scan = excess_set_scan(ex, probes, i, opts);
    emit(args, scan_json(scan, args.seed));
    int rc = 0;
    for (const auto& pr : scan.probes) {
        const char* v = pr.member == Membership::in    ? "in"
                        : pr.member == Membership::out ? "out"
                                                       : "indeterminate";
        std::cerr << "probe member=" << v << "\n";
        if (!expect.empty() && v != expect) rc = 1;
    }
    return rc;
}

int run_dichotomy(const CommonArgs& args, double q, const std::string& nu, int i_min,
                  int i_max, const std::string& expect) {
    ExampleConfig cfg = resolve_config(args);
    ExampleVarifold ex = build_example(cfg);
    ex.set_cloud(args.seed, ex.cloud_size());
    DichotomyConfig dc;
    dc.q = q;
    dc.nu = nu == "weighted" ? DichotomyConfig::Nu::weighted
                             : DichotomyConfig::Nu::complement_of_t;
    if (cfg.weight_r) dc.weight_r = *cfg.weight_r;
    dc.i_min = i_min;
    dc.i_max = i_max;
    DichotomyResult result = dichotomy_ratio(ex, dc);
    emit(args, dichotomy_json(ex, dc, result, args.seed));
    std::cerr << "dichotomy verdict " << verdict_name(result.verdict) << "\n";
    if (!expect.empty()) return expect == verdict_name(result.verdict) ? 0 : 1;
    return result.verdict == DichotomyVerdict::bounded_positive ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"multiscale varifold scaling laboratory"};
    app.require_subcommand(1);

    CommonArgs args;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", args.config_path, "example config JSON");
        sub->add_option("--out", args.out_path, "output path (stdout when absent)");
        sub->add_option("--format", args.format, "csv|json")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--seed", args.seed,
                        "seed for every sampled quantity (echoed in reports)");
    };

    auto* derive = app.add_subcommand("derive", "derive and print the scale parameters");
    add_common(derive);

    auto* build = app.add_subcommand("build", "build the example and emit its manifest");
    add_common(build);

    std::string kind = "mass", norm = "frobenius";
    int i_min = 2, i_max = 8;
    double tolerance = 0.0;
    auto* scaling = app.add_subcommand("report-scaling", "dyadic-radius scaling report");
    add_common(scaling);
    scaling->add_option("--kind", kind,
                        "mass|height|tilt|curvature|weighted|weighted-power");
    scaling->add_option("--norm", norm, "frobenius|operator")
        ->check(CLI::IsMember({"frobenius", "operator"}));
    scaling->add_option("--i-min", i_min, "smallest dyadic exponent");
    scaling->add_option("--i-max", i_max, "largest dyadic exponent");
    scaling->add_option("--tolerance", tolerance, "slope tolerance override");

    int iso_n = 2, tau_steps = 16;
    auto* iso = app.add_subcommand("report-iso", "isoperimetric quotients and tau sweep");
    add_common(iso);
    iso->add_option("--n", iso_n, "varifold dimension")->check(CLI::Range(2, 3));
    iso->add_option("--tau-steps", tau_steps, "sweep grid size");

    int scan_i = 4;
    std::vector<double> probe_flat;
    std::string expect;
    auto* scan = app.add_subcommand("scan-excess", "B_i membership scan");
    add_common(scan);
    scan->add_option("--i", scan_i, "scale index i");
    scan->add_option("--probe", probe_flat, "probe coordinates, ambient tuples");
    scan->add_option("--expect", expect, "in|out: verdict expectation")
        ->check(CLI::IsMember({"in", "out"}));

    double q = 2.125;
    std::string nu = "complement", dich_expect;
    int di_min = 2, di_max = 8;
    auto* dich = app.add_subcommand("dichotomy", "density-ratio dichotomy experiment");
    add_common(dich);
    dich->add_option("--q", q, "exponent of the ratio nu(B)/s^(nq)");
    dich->add_option("--nu", nu, "complement|weighted")
        ->check(CLI::IsMember({"complement", "weighted"}));
    dich->add_option("--i-min", di_min, "first dyadic index");
    dich->add_option("--i-max", di_max, "last dyadic index");
    dich->add_option("--expect", dich_expect,
                     "bounded-positive|toward-infinity|toward-zero");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (derive->parsed()) return run_derive(args);
        if (build->parsed()) return run_build(args);
        if (scaling->parsed())
            return run_report_scaling(args, kind, i_min, i_max, tolerance, norm);
        if (iso->parsed()) return run_report_iso(args, iso_n, tau_steps);
        if (scan->parsed()) return run_scan(args, scan_i, probe_flat, expect);
        if (dich->parsed()) return run_dichotomy(args, q, nu, di_min, di_max, dich_expect);
    } catch (const config_error& e) {
        std::cerr << "configuration error [" << e.constraint << "]: " << e.what() << "\n";
        return 2;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
