// heightlab: exact dynamical degrees, canonical heights and orbit analysis
// for the concrete system families described in the README.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <thread>

#include "heightlab/errors.hpp"
#include "heightlab/io.hpp"
#include "heightlab/orbits.hpp"

using namespace heightlab;
using nlohmann::json;

namespace {

int exit_code_for(const error& e) {
    switch (e.code()) {
        case errc::precision_exhausted:
        case errc::no_convergence:
            return 3;
        case errc::budget_exceeded:
            return 4;
        default:
            return 2;
    }
}

void emit(const json& j, const std::string& csv_path, const std::string& csv_payload) {
    std::cout << j.dump(2) << "\n";
    if (!csv_path.empty()) {
        std::ofstream out(csv_path);
        if (!out) fail(errc::invalid_input, "cannot write csv file '" + csv_path + "'");
        out << csv_payload;
    }
}

json ball_json(const BallReal& b, int sig) {
    return json{{"lo", BallReal::exact(b.lo_rat()).midpoint_str(sig)},
                {"hi", BallReal::exact(b.hi_rat()).midpoint_str(sig)},
                {"mid", b.midpoint_str(sig)}};
}

json estimate_json(const CanonicalEstimate& est, int sig) {
    json j;
    j["mode"] = to_string(est.mode);
    j["limsup"] = ball_json(est.limsup_est, sig);
    j["liminf"] = ball_json(est.liminf_est, sig);
    if (est.limsup_exact) j["limsup_exact"] = to_string(*est.limsup_exact);
    if (est.liminf_exact) j["liminf_exact"] = to_string(*est.liminf_exact);
    if (est.error_bound) j["error_bound"] = ball_json(*est.error_bound, sig);
    if (!est.note.empty()) j["note"] = est.note;
    return j;
}

struct CommonOpts {
    std::string system_file;
    std::string point;
    std::string tolerance = "1/1000000";
    std::string output = "json";
    std::string csv_path;
    int precision_bits = 0;
    int sig_figs = 12;
    int steps = 20;
    int budget = 256;
    long bound = 10;
    int jobs = 1;
};

void run_spectral(const CommonOpts& opt) {
    System sys = load_system_file(opt.system_file);
    SystemSpectral sp = system_spectral(sys, opt.precision_bits);
    json j;
    j["label"] = sys.label;
    j["delta"] = ball_json(sp.delta, opt.sig_figs);
    if (sp.delta_exact) j["delta"]["exact"] = to_string(*sp.delta_exact);
    j["l"] = sp.l;
    j["l_is_upper_bound_only"] = sp.l_upper_bound_only;
    j["certification"] = to_string(sp.certification);
    j["tag"] = sp.tag;
    if (sp.matrix_data) {
        j["dominant_factors"] = json::array();
        for (const auto& df : sp.matrix_data->dominant_factors)
            j["dominant_factors"].push_back({{"factor", df.factor.to_string()},
                                             {"min_poly_multiplicity", df.min_poly_mult},
                                             {"certification", to_string(df.cert)}});
    }
    j["version"] = tool_version;
    emit(j, "", "");
}

void run_series(const CommonOpts& opt) {
    System sys = load_system_file(opt.system_file);
    SystemPoint pt = parse_point(sys, opt.point);
    HeightSeries hs = height_series(sys, pt, opt.steps, parse_rational(opt.tolerance));
    ReportTable t = series_table(sys, hs, opt.sig_figs);
    if (opt.output == "csv") {
        std::cout << t.to_csv();
        if (!opt.csv_path.empty()) {
            std::ofstream out(opt.csv_path);
            out << t.to_csv();
        }
        return;
    }
    emit(t.to_json(), opt.csv_path, t.to_csv());
}

void run_canonical(const CommonOpts& opt) {
    System sys = load_system_file(opt.system_file);
    SystemPoint pt = parse_point(sys, opt.point);
    BigRat tol = parse_rational(opt.tolerance);
    json j;
    j["label"] = sys.label;
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, P1Morphism>) {
                j["estimate"] = estimate_json(
                    call_silverman(s, std::get<ProjectivePoint>(pt), tol), opt.sig_figs);
            } else if constexpr (std::is_same_v<T, LatticeSystem>) {
                j["estimate"] =
                    estimate_json(lattice_canonical(s, std::get<RatVector>(pt)), opt.sig_figs);
            } else if constexpr (std::is_same_v<T, WehlerSystem>) {
                j["estimate"] = estimate_json(
                    nef_canonical_wehler(s, std::get<WehlerPoint>(pt), opt.steps), opt.sig_figs);
            } else {
                fail(errc::invalid_input,
                     "canonical estimates cover p1_morphism, lattice and wehler systems");
            }
        },
        sys.value);
    j["version"] = tool_version;
    emit(j, "", "");
}

void run_zf(const CommonOpts& opt) {
    System sys = load_system_file(opt.system_file);
    const auto* lat = std::get_if<LatticeSystem>(&sys.value);
    if (!lat) fail(errc::invalid_input, "zf membership runs on lattice systems");
    ZfResult r = zf_membership(*lat, std::get<RatVector>(parse_point(sys, opt.point)));
    json j;
    j["label"] = sys.label;
    j["member"] = to_string(r.member);
    j["certification"] = to_string(r.certification);
    if (!r.note.empty()) j["note"] = r.note;
    if (r.kernel_basis) {
        j["kernel_basis"] = json::array();
        for (const auto& b : *r.kernel_basis) {
            json row = json::array();
            for (const auto& c : b) row.push_back(to_string(c));
            j["kernel_basis"].push_back(row);
        }
    }
    j["version"] = tool_version;
    emit(j, "", "");
}

void run_scan(const CommonOpts& opt) {
    System sys = load_system_file(opt.system_file);
    const auto* f = std::get_if<P1Morphism>(&sys.value);
    if (!f) fail(errc::invalid_input, "northcott scans run on p1_morphism systems");
    BigRat tol = parse_rational(opt.tolerance);

    ScanResult merged;
    int jobs = std::max(1, opt.jobs);
    if (jobs == 1) {
        merged = northcott_scan(*f, opt.bound, tol, opt.budget);
    } else {
        // parallel across independent points: each worker scans a residue
        // class of the enumerated list
        auto pts = enumerate_p1_points(opt.bound);
        std::vector<ScanResult> parts((size_t)jobs);
        std::vector<std::thread> threads;
        System fs{*f, sys.label};
        for (int w = 0; w < jobs; ++w)
            threads.emplace_back([&, w] {
                BallReal c0 = f->bounds().height_change_bound(global_precision_bits());
                BigRat refute = c0.hi_rat() / BigRat(f->degree() - 1) + 2 * tol + 1;
                for (size_t i = (size_t)w; i < pts.size(); i += (size_t)jobs) {
                    auto est = call_silverman(*f, pts[i], tol);
                    if (est.limsup_est.lo_rat() >= 2 * tol) continue;
                    OrbitRecord rec = detect_preperiodic(fs, SystemPoint{pts[i]}, opt.budget);
                    if (rec.period) {
                        parts[(size_t)w].confirmed.push_back(pts[i]);
                        continue;
                    }
                    bool refuted = false;
                    for (const auto& k : rec.keys) {
                        auto colon = k.find(':');
                        BigInt p(k.substr(0, colon)), q(k.substr(colon + 1));
                        BigInt core = abs(p) > abs(q) ? abs(p) : abs(q);
                        if (core > 1 && BallReal::log_of(core).lo_rat() > refute) refuted = true;
                    }
                    if (!refuted) parts[(size_t)w].anomalies.push_back(pts[i]);
                }
            });
        for (auto& t : threads) t.join();
        for (auto& part : parts) {
            merged.confirmed.insert(merged.confirmed.end(), part.confirmed.begin(),
                                    part.confirmed.end());
            merged.anomalies.insert(merged.anomalies.end(), part.anomalies.begin(),
                                    part.anomalies.end());
        }
    }
    // canonical ordering keeps the output independent of --jobs
    auto by_key = [](const ProjectivePoint& a, const ProjectivePoint& b) {
        return a.key() < b.key();
    };
    std::sort(merged.confirmed.begin(), merged.confirmed.end(), by_key);
    std::sort(merged.anomalies.begin(), merged.anomalies.end(), by_key);
    json j;
    j["label"] = sys.label;
    j["bound"] = opt.bound;
    j["confirmed"] = json::array();
    for (const auto& p : merged.confirmed) j["confirmed"].push_back(p.key());
    j["anomalies"] = json::array();
    for (const auto& p : merged.anomalies) j["anomalies"].push_back(p.key());
    j["version"] = tool_version;
    emit(j, "", "");
}

void run_intersect(const CommonOpts& opt, const std::string& system2, const std::string& point2) {
    System f = load_system_file(opt.system_file);
    System g = system2.empty() ? f : load_system_file(system2);
    SystemPoint x = parse_point(f, opt.point);
    SystemPoint y = parse_point(g, point2.empty() ? opt.point : point2);
    IntersectionReport rep = orbit_intersection(f, x, g, y, opt.steps);
    GapBoundResult gap = gap_bound_check(f, x, g, y, std::max(1, opt.steps / 4));
    json j;
    j["pairs"] = json::array();
    for (const auto& [n, m] : rep.pairs) j["pairs"].push_back({n, m});
    if (rep.max_gap) j["max_gap"] = *rep.max_gap;
    j["ap_decomposition"] = json::array();
    for (const auto& ap : rep.ap_decomposition)
        j["ap_decomposition"].push_back({{"k", ap[0]}, {"i", ap[1]}, {"j", ap[2]}});
    j["residual_pairs"] = json::array();
    for (const auto& [n, m] : rep.residual_pairs) j["residual_pairs"].push_back({n, m});
    j["truncated"] = {{"f", rep.truncated_f}, {"g", rep.truncated_g}};
    j["gap_hypothesis_ok"] = gap.hypothesis_ok;
    if (gap.stable_gap) j["stable_gap"] = *gap.stable_gap;
    if (!gap.note.empty()) j["gap_note"] = gap.note;
    j["version"] = tool_version;
    emit(j, "", "");
}

void run_preperiodic(const CommonOpts& opt) {
    System sys = load_system_file(opt.system_file);
    SystemPoint pt = parse_point(sys, opt.point);
    OrbitRecord rec = detect_preperiodic(sys, pt, opt.budget);
    json j;
    j["label"] = sys.label;
    if (rec.tail_length) j["tail_length"] = *rec.tail_length;
    if (rec.period) j["period"] = *rec.period;
    j["preperiodic"] = rec.period.has_value();
    j["truncated"] = rec.truncated;
    if (!rec.truncation_note.empty()) j["truncation_note"] = rec.truncation_note;
    j["orbit_prefix"] = json::array();
    for (size_t i = 0; i < rec.keys.size() && i < 64; ++i) j["orbit_prefix"].push_back(rec.keys[i]);
    j["version"] = tool_version;
    emit(j, "", "");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"heightlab: exact dynamical degrees, canonical heights, orbit analysis"};
    app.require_subcommand(1);

    CommonOpts opt;
    std::string system2, point2;

    auto add_common = [&](CLI::App* cmd, bool with_point) {
        cmd->add_option("--system", opt.system_file, "system description file (JSON)")->required();
        if (with_point) cmd->add_option("--point", opt.point, "point literal")->required();
        cmd->add_option("--tolerance", opt.tolerance, "rational tolerance, e.g. 1/1000000");
        cmd->add_option("--precision-bits", opt.precision_bits, "working precision in bits");
        cmd->add_option("--sig-figs", opt.sig_figs, "significant digits in decimal renderings");
        cmd->add_option("--output", opt.output, "json or csv");
        cmd->add_option("--csv", opt.csv_path, "also write the table to this CSV file");
        cmd->add_option("--budget", opt.budget, "orbit step budget");
        cmd->add_option("--jobs", opt.jobs, "parallel workers across independent points");
    };

    auto* spectral = app.add_subcommand("spectral", "dynamical degree and growth exponent");
    add_common(spectral, false);

    auto* series = app.add_subcommand("series", "height series table n -> h_n, a_n");
    add_common(series, true);
    series->add_option("--steps", opt.steps, "number of rows");

    auto* canonical = app.add_subcommand("canonical", "canonical height estimate");
    add_common(canonical, true);
    canonical->add_option("--steps", opt.steps, "n_max for empirical estimates");

    auto* zf = app.add_subcommand("zf", "Z_f membership for lattice systems");
    add_common(zf, true);

    auto* scan = app.add_subcommand("scan", "Northcott scan for preperiodic points");
    add_common(scan, false);
    scan->add_option("--bound", opt.bound, "multiplicative height bound");

    auto* intersect = app.add_subcommand("intersect", "orbit intersection analysis");
    add_common(intersect, true);
    intersect->add_option("--steps", opt.steps, "orbit length N");
    intersect->add_option("--system2", system2, "second system (defaults to the first)");
    intersect->add_option("--point2", point2, "second start point");

    auto* preper = app.add_subcommand("preperiodic", "cycle detection for one point");
    add_common(preper, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (opt.precision_bits > 0) set_global_precision_bits(opt.precision_bits);
        if (spectral->parsed()) run_spectral(opt);
        else if (series->parsed()) run_series(opt);
        else if (canonical->parsed()) run_canonical(opt);
        else if (zf->parsed()) run_zf(opt);
        else if (scan->parsed()) run_scan(opt);
        else if (intersect->parsed()) run_intersect(opt, system2, point2);
        else if (preper->parsed()) run_preperiodic(opt);
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
