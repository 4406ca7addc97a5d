#include "optocool/cli.hpp"

#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "optocool/config.hpp"
#include "optocool/cooling.hpp"
#include "optocool/covariance.hpp"
#include "optocool/errors.hpp"
#include "optocool/format.hpp"
#include "optocool/linear_model.hpp"
#include "optocool/noise.hpp"
#include "optocool/rates.hpp"
#include "optocool/report.hpp"
#include "optocool/spectra.hpp"
#include "optocool/steady_state.hpp"
#include "optocool/trajectory.hpp"

namespace optocool {

namespace {

using nlohmann::json;

constexpr std::uint64_t kDefaultSeed = 42;

struct Globals {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::string format;
    bool no_timestamp = false;
};

struct Output {
    std::string stem;               // file stem of the primary output
    json report;                    // always built; primary when format == json
    std::string csv;                // primary when format == csv
    std::vector<std::pair<std::string, std::string>> extra_files;
    std::ostringstream summary;
};

std::string utc_timestamp() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string report_csv(const json& report) {
    std::string s = "key,value\n";
    for (const auto& [k, v] : flatten(report)) s += csv_field(k) + ',' + csv_field(v) + '\n';
    return s;
}

json header(const std::string& command, const RunConfig& cfg, std::uint64_t seed, const Globals& g) {
    json j = {{"command", command}, {"seed", seed}, {"config", to_json(cfg)}};
    if (!g.no_timestamp) j["generated_at"] = utc_timestamp();
    return j;
}

void summary_line(Output& o, const std::string& key, double v) {
    o.summary << "  " << key << " = " << fmt_double(v) << '\n';
}

std::uint64_t resolve_seed(const Globals& g, const RunConfig& cfg) {
    if (g.seed) return *g.seed;
    if (cfg.run.seed) return *cfg.run.seed;
    return kDefaultSeed;
}

double max_abs(const std::array<double, 6>& r) {
    double m = 0.0;
    for (double v : r) m = std::max(m, std::abs(v));
    return m;
}

Output cmd_steady_state(const RunConfig& cfg, std::uint64_t seed, const Globals& g) {
    const SystemParams& p = cfg.params;
    const SteadyState exact = solve_classical_steady_state(p);
    SteadyState approx = approximate_steady_state(p);
    approx.residual = p.Omega_c > 0.0
                          ? max_abs(steady_state_residual(p, approx.alpha_1, approx.alpha_2, approx.beta))
                          : 0.0;

    const auto ratio = [](const SteadyState& s) {
        return std::abs(s.alpha_1) > 0.0 ? std::abs(s.alpha_2) / std::abs(s.alpha_1) : 0.0;
    };
    Output o;
    o.stem = "steady_state";
    o.report = header("steady-state", cfg, seed, g);
    o.report["exact"] = to_json(exact);
    o.report["exact"]["ratio_alpha2_alpha1"] = ratio(exact);
    o.report["approximate"] = to_json(approx);
    o.report["approximate"]["ratio_alpha2_alpha1"] = ratio(approx);
    o.report["ratio_resolved_sideband_estimate"] = p.gamma_1 / (2.0 * p.omega_m);

    o.summary << "steady state (exact):\n";
    summary_line(o, "|alpha_1|", std::abs(exact.alpha_1));
    summary_line(o, "|alpha_2|", std::abs(exact.alpha_2));
    summary_line(o, "ratio_alpha2_alpha1", ratio(exact));
    summary_line(o, "Delta_L_rad_s", exact.Delta_L);
    summary_line(o, "residual", exact.residual);
    return o;
}

json ensemble_json(const EnsembleResult& mc, double n_lyapunov) {
    json j = to_json(mc);
    const double dev = mc.n_stderr > 0.0 ? (mc.n_mean - n_lyapunov) / mc.n_stderr : 0.0;
    j["deviation_sigma"] = dev;
    j["within_3_sigma"] = std::abs(dev) <= 3.0;
    return j;
}

Output cmd_cool(const RunConfig& cfg, std::uint64_t seed, const Globals& g, std::size_t trajectories) {
    const SystemParams& p = cfg.params;
    const CoolingReport r = cooling_report(p, cfg.noise);
    Output o;
    o.stem = "cool";
    o.report = header("cool", cfg, seed, g);
    o.report["cooling"] = to_json(r);
    o.summary << "cooling:\n";
    summary_line(o, "n_lyapunov", r.n_lyapunov);
    summary_line(o, "n_total_estimate", r.n_total_estimate);
    summary_line(o, "n_phase", r.n_phase);
    summary_line(o, "n_q_limit", r.n_q_limit);
    summary_line(o, "gamma_tilde_rad_s", r.gamma_tilde);

    if (trajectories > 0) {
        EnsembleOptions eo;
        eo.n_traj = trajectories;
        eo.dt = cfg.run.dt;
        eo.t_final = cfg.run.t_final;
        eo.seed = seed;
        eo.threads = cfg.run.threads;
        const LinearModel model = build_cooling_model(p, r.steady_state, cfg.noise);
        const EnsembleResult mc = ensemble_phonon(model, eo);
        o.report["monte_carlo"] = ensemble_json(mc, r.n_lyapunov);
        summary_line(o, "monte_carlo.n_mean", mc.n_mean);
        summary_line(o, "monte_carlo.n_stderr", mc.n_stderr);
    } else {
        o.report["monte_carlo"] = nullptr;
    }
    return o;
}

std::vector<double> sweep_grid(const RunOptions& r) {
    if (r.sweep_points == 1) return {r.sweep_from};
    if (r.sweep_log && !(r.sweep_from > 0.0 && r.sweep_to > 0.0)) {
        throw Error(ErrorKind::Config, "logarithmic sweep needs positive bounds");
    }
    std::vector<double> v(r.sweep_points);
    const double n = static_cast<double>(r.sweep_points - 1);
    for (std::size_t i = 0; i < r.sweep_points; ++i) {
        const double u = static_cast<double>(i) / n;
        if (r.sweep_log) {
            const double lo = std::log10(r.sweep_from), hi = std::log10(r.sweep_to);
            v[i] = std::pow(10.0, lo + u * (hi - lo));
        } else {
            v[i] = r.sweep_from + u * (r.sweep_to - r.sweep_from);
        }
    }
    v.front() = r.sweep_from;
    v.back() = r.sweep_to;
    return v;
}

Output cmd_sweep(const std::string& text, const RunConfig& cfg, std::uint64_t seed, const Globals& g) {
    const std::string& axis = cfg.run.sweep_axis;
    if (axis.empty()) throw Error(ErrorKind::Config, "sweep needs an axis (--axis or [run] sweep_axis)");
    const auto section = section_of(axis);
    if (!section || *section == "measurement") {
        throw Error(ErrorKind::Config, "unknown sweep axis '" + axis + "'");
    }

    static const std::vector<std::string> columns = {
        "n_lyapunov",   "n_phase",           "noise_reduction",   "n_total_estimate",
        "n_q_limit",    "gamma_tilde_rad_s", "coupling_g_rad_s",  "suppression_factor",
        "max_re_rad_s", "stable",            "adiabatic_ok"};

    Output o;
    o.stem = "sweep";
    o.report = header("sweep", cfg, seed, g);
    o.report["axis"] = axis;
    json rows = json::array();
    o.csv = csv_field(axis);
    for (const auto& c : columns) o.csv += ',' + c;
    o.csv += '\n';

    for (double v : sweep_grid(cfg.run)) {
        const RunConfig point = parse_config(set_key(text, *section, axis, v));
        json row;
        try {
            row = to_json(cooling_report(point.params, point.noise));
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::Unstable) throw;
            row = {{"stable", false}};
            for (const auto& c : columns) {
                if (!row.contains(c)) row[c] = c == "adiabatic_ok" ? json(false) : json(std::nan(""));
            }
        }
        row["value"] = v;
        o.csv += fmt_double(v);
        for (const auto& c : columns) {
            const json& cell = row[c];
            o.csv += ',';
            o.csv += cell.is_boolean() ? (cell.get<bool>() ? "true" : "false") : fmt_double(cell.get<double>());
        }
        o.csv += '\n';
        rows.push_back(std::move(row));
    }
    o.report["points"] = std::move(rows);
    o.summary << "sweep over " << axis << ": " << o.report["points"].size() << " points\n";
    return o;
}

Output cmd_thermometry(const RunConfig& cfg, std::uint64_t seed, const Globals& g) {
    if (!cfg.measurement) throw Error(ErrorKind::Config, "thermometry needs a [measurement] section");
    const SystemParams& p = cfg.params;
    const MeasurementInput& mi = *cfg.measurement;

    std::optional<CoolingReport> cooling;
    if (!mi.gamma_mp || !mi.n_mf) cooling = cooling_report(p, cfg.noise);
    const SteadyState cooling_ss = cooling ? cooling->steady_state : solve_classical_steady_state(p);

    MeasurementParams base;
    base.omega_3 = mi.omega_3;
    base.gamma_3p = mi.gamma_3p;
    base.Omega_d = mi.Omega_d;
    base.sideband = mi.sideband;
    base.gamma_mp = mi.gamma_mp ? *mi.gamma_mp : p.gamma_m + cooling->gamma_tilde;
    base.n_mf = mi.n_mf ? *mi.n_mf : cooling->n_lyapunov;
    base = validate_measurement(base);

    MeasurementParams blue = base, red = base;
    blue.sideband = Sideband::Blue;
    red.sideband = Sideband::Red;
    const MeasurementSteadyState ss_blue = measurement_steady_state(p, blue);
    const MeasurementSteadyState ss_red = measurement_steady_state(p, red);

    const auto grid = default_omega_grid(base, cfg.run.spectrum_points);
    const SpectrumResult s_blue = output_spectrum(p, blue, ss_blue.alpha_3, grid);
    const SpectrumResult s_red = output_spectrum(p, red, ss_red.alpha_3, grid);
    const double g3 = p.eta * p.omega_m * std::abs(ss_blue.alpha_3);

    Output o;
    o.stem = "thermometry";
    o.report = header("thermometry", cfg, seed, g);
    o.report["measurement"] = to_json(base);
    o.report["n_mf_source"] = mi.n_mf ? "config" : "cooling";
    o.report["gamma_mp_source"] = mi.gamma_mp ? "config" : "cooling";
    o.report["detection_steady_state"] = {{"blue", to_json(ss_blue)}, {"red", to_json(ss_red)}};
    o.report["g3_rad_s"] = g3;

    json rwa = {{"peak_blue", s_blue.peak_intensity},
                {"peak_red", s_red.peak_intensity},
                {"expected_ratio", sideband_ratio(base.n_mf)}};
    const PhononEstimate est = infer_phonon(s_red.peak_intensity, s_blue.peak_intensity);
    rwa["estimate"] = to_json(est);
    o.report["rwa"] = rwa;

    json full = {{"stable", true}};
    try {
        const std::vector<double> centre{0.0};
        const double pb = output_spectrum_full(p, blue, ss_blue.alpha_3, centre).peak_intensity;
        const double pr = output_spectrum_full(p, red, ss_red.alpha_3, centre).peak_intensity;
        full["peak_blue"] = pb;
        full["peak_red"] = pr;
        full["estimate"] = to_json(infer_phonon(pr, pb));
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::Unstable && e.kind() != ErrorKind::RatioOutOfRange) throw;
        full["stable"] = e.kind() != ErrorKind::Unstable;
        full["estimate"] = nullptr;
    }
    o.report["full_model"] = full;
    o.report["backaction"] = to_json(backaction_check(p, base, ss_blue.alpha_3, cooling_ss));
    o.report["routh_hurwitz"] = to_json(routh_hurwitz_measurement(p, blue, ss_blue.alpha_3));

    std::ostringstream spectra;
    write_spectra_csv(spectra, s_blue, s_red);
    o.csv = spectra.str();
    if (g.format == "json" && !g.out_dir.empty()) {
        o.extra_files.emplace_back("thermometry_spectra.csv", o.csv);
        o.report["spectra_file"] = "thermometry_spectra.csv";
    } else {
        o.report["spectra_file"] = g.format == "csv" ? json("thermometry.csv") : json(nullptr);
    }

    o.summary << "thermometry:\n";
    summary_line(o, "n_mf", base.n_mf);
    summary_line(o, "rwa.peak_blue", s_blue.peak_intensity);
    summary_line(o, "rwa.peak_red", s_red.peak_intensity);
    summary_line(o, "rwa.estimate.n", est.n);
    return o;
}

Output cmd_noise_psd(const RunConfig& cfg, std::uint64_t seed, const Globals& g) {
    const NoiseModel& nm = cfg.noise;
    const SystemParams& p = cfg.params;
    const double w_max = cfg.run.psd_max.value_or(
        10.0 * std::max(p.omega_m, nm.kind == NoiseKind::FiniteCorrelation ? nm.gamma_c : 0.0));
    const std::size_t n = cfg.run.psd_points;

    Output o;
    o.stem = "noise_psd";
    o.report = header("noise-psd", cfg, seed, g);
    o.report["noise"] = to_json(nm);
    o.report["reduction_at_omega_m"] = noise_reduction_at(nm, p.omega_m);
    json w = json::array(), s = json::array();
    o.csv = "omega_rad_s,psd\n";
    for (std::size_t i = 0; i < n; ++i) {
        const double omega = n == 1 ? 0.0 : w_max * static_cast<double>(i) / static_cast<double>(n - 1);
        const double psd = psd_phase_derivative(nm, omega);
        w.push_back(omega);
        s.push_back(psd);
        o.csv += fmt_double(omega) + ',' + fmt_double(psd) + '\n';
    }
    o.report["omega_rad_s"] = std::move(w);
    o.report["psd"] = std::move(s);

    o.report["path"] = nullptr;
    if (cfg.run.noise_samples > 0) {
        const double dt = cfg.run.noise_dt.value_or(
            nm.kind == NoiseKind::FiniteCorrelation ? 0.01 / nm.gamma_c : constants::two_pi / p.omega_m / 100.0);
        const NoisePath path = sample_path(nm, dt, cfg.run.noise_samples, seed);
        std::ostringstream os;
        write_csv(os, path);
        json pj = {{"samples", path.samples.size()}, {"dt_s", path.dt}, {"seed", path.seed}, {"file", nullptr}};
        if (!g.out_dir.empty()) {
            o.extra_files.emplace_back("noise_path.csv", os.str());
            pj["file"] = "noise_path.csv";
        }
        o.report["path"] = pj;
    }
    o.summary << "noise psd:\n";
    summary_line(o, "reduction_at_omega_m", o.report["reduction_at_omega_m"].get<double>());
    return o;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::Config, "cannot write '" + path.string() + "'");
    f << content;
    if (!f) throw Error(ErrorKind::Config, "write failed for '" + path.string() + "'");
}

void emit(Output& o, const Globals& g, std::ostream& out, std::ostream& err) {
    const std::string json_text = dump_json(o.report) + '\n';
    const bool csv = g.format == "csv";
    const std::string csv_text = o.csv.empty() ? report_csv(o.report) : o.csv;
    if (g.out_dir.empty()) {
        out << (csv ? csv_text : json_text);
        err << o.summary.str();
        return;
    }
    const std::filesystem::path dir(g.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::Config, "cannot create output directory '" + g.out_dir + "'");
    if (csv) {
        write_file(dir / (o.stem + ".csv"), csv_text);
        // CSV cannot carry the config; it travels in a sidecar.
        write_file(dir / (o.stem + ".meta.json"), json_text);
    } else {
        write_file(dir / (o.stem + ".json"), json_text);
    }
    for (const auto& [name, content] : o.extra_files) write_file(dir / name, content);
    out << o.summary.str();
}

int exit_code(ErrorKind k) {
    switch (k) {
        case ErrorKind::Unstable:
        case ErrorKind::Overflow:
            return 3;
        case ErrorKind::NoConvergence:
        case ErrorKind::MultipleRoots:
        case ErrorKind::IllConditioned:
        case ErrorKind::RatioOutOfRange:
            return 4;
        default:
            return 2;
    }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sideband cooling of a mechanical oscillator under laser phase noise"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    std::uint64_t seed_flag = 0;
    app.add_option("--config", g.config_path, "INI run configuration")->required();
    app.add_option("--out", g.out_dir, "write result files into this directory");
    auto* seed_opt = app.add_option("--seed", seed_flag, "random seed (overrides the config)");
    app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_flag("--no-timestamp", g.no_timestamp, "omit the generation time from reports");

    std::size_t trajectories = 0;
    std::string axis;
    double from = 0.0, to = 0.0;
    std::size_t points = 0, samples = 0;
    bool log_grid = false;
    double noise_dt = 0.0;

    auto* ss = app.add_subcommand("steady-state", "classical steady state, exact and approximate");
    auto* cool = app.add_subcommand("cool", "cooling report from the linearised model");
    auto* traj_opt = cool->add_option("--trajectories", trajectories, "Monte-Carlo trajectories");
    auto* sweep = app.add_subcommand("sweep", "cooling report over a one-parameter grid");
    auto* axis_opt = sweep->add_option("--axis", axis, "config key to vary, e.g. gamma_l_rad_s");
    auto* from_opt = sweep->add_option("--from", from, "first value, in the key's units");
    auto* to_opt = sweep->add_option("--to", to, "last value, in the key's units");
    auto* points_opt = sweep->add_option("--points", points, "grid points");
    auto* log_opt = sweep->add_flag("--log", log_grid, "logarithmic grid");
    auto* thermo = app.add_subcommand("thermometry", "sideband-asymmetry thermometry");
    auto* psd = app.add_subcommand("noise-psd", "phase-noise spectral density and sample path");
    auto* samples_opt = psd->add_option("--samples", samples, "sample-path length");
    auto* dt_opt = psd->add_option("--dt", noise_dt, "sample-path step (s)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }
    if (*seed_opt) g.seed = seed_flag;

    try {
        std::ifstream in(g.config_path);
        if (!in) throw Error(ErrorKind::Config, "cannot read config file '" + g.config_path + "'");
        std::ostringstream text;
        text << in.rdbuf();
        RunConfig cfg = parse_config(text.str());
        const std::uint64_t seed = resolve_seed(g, cfg);
        if (g.seed) cfg.run.seed = g.seed;

        Output o;
        if (ss->parsed()) {
            if (g.format.empty()) g.format = "json";
            o = cmd_steady_state(cfg, seed, g);
        } else if (cool->parsed()) {
            if (g.format.empty()) g.format = "json";
            if (*traj_opt) cfg.run.trajectories = trajectories;
            o = cmd_cool(cfg, seed, g, cfg.run.trajectories);
        } else if (sweep->parsed()) {
            if (g.format.empty()) g.format = "csv";
            if (*axis_opt) cfg.run.sweep_axis = axis;
            if (*from_opt) cfg.run.sweep_from = from;
            if (*to_opt) cfg.run.sweep_to = to;
            if (*points_opt) cfg.run.sweep_points = points;
            if (*log_opt) cfg.run.sweep_log = log_grid;
            if (cfg.run.sweep_points < 1) throw Error(ErrorKind::Config, "--points must be >= 1");
            o = cmd_sweep(text.str(), cfg, seed, g);
        } else if (thermo->parsed()) {
            if (g.format.empty()) g.format = "json";
            o = cmd_thermometry(cfg, seed, g);
        } else if (psd->parsed()) {
            if (g.format.empty()) g.format = "csv";
            if (*samples_opt) cfg.run.noise_samples = samples;
            if (*dt_opt) cfg.run.noise_dt = noise_dt;
            o = cmd_noise_psd(cfg, seed, g);
        }
        emit(o, g, out, err);
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    }
}

}  // namespace optocool
