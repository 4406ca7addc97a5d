#include "optocool/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string_view>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "optocool/errors.hpp"
#include "optocool/format.hpp"

namespace optocool {

namespace {

namespace pt = boost::property_tree;

// Frequency-like quantities accept either a _hz or a _rad_s spelling.
struct Section {
    std::string_view name;
    std::vector<std::string_view> frequencies;
    std::vector<std::string_view> plain;
};

const std::array<Section, 4>& schema() {
    static const std::array<Section, 4> s{{
        {"system",
         {"omega_m", "gamma_1", "gamma_2", "gamma_m", "omega_c", "omega_1"},
         {"quality_factor", "eta", "mass_kg", "radius_m", "temperature_k"}},
        {"noise", {"gamma_c"}, {"model", "gamma_l_rad_s"}},
        {"measurement", {"omega_3", "gamma_3p", "omega_d", "gamma_mp"}, {"sideband", "n_mf"}},
        {"run",
         {},
         {"seed", "trajectories", "threads", "dt_s", "t_final_s", "spectrum_points", "psd_points",
          "psd_max_rad_s", "noise_samples", "noise_dt_s", "sweep_axis", "sweep_from", "sweep_to",
          "sweep_points", "sweep_log"}},
    }};
    return s;
}

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorKind::Config, msg); }

const Section* find_section(std::string_view name) {
    for (const auto& s : schema()) {
        if (s.name == name) return &s;
    }
    return nullptr;
}

// Base quantity name if `key` is a unit-suffixed spelling of a frequency in `s`.
std::optional<std::string_view> frequency_base(const Section& s, std::string_view key) {
    for (auto base : s.frequencies) {
        if (key.size() > base.size() && key.substr(0, base.size()) == base) {
            const auto suffix = key.substr(base.size());
            if (suffix == "_hz" || suffix == "_rad_s") return base;
        }
    }
    return std::nullopt;
}

bool accepts(const Section& s, std::string_view key) {
    return frequency_base(s, key) || std::find(s.plain.begin(), s.plain.end(), key) != s.plain.end();
}

double parse_double(const std::string& where, const std::string& text) {
    double v = 0.0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) config_error(where + ": expected a number, got '" + text + "'");
    return v;
}

std::uint64_t parse_uint(const std::string& where, const std::string& text) {
    std::uint64_t v = 0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) {
        config_error(where + ": expected a non-negative integer, got '" + text + "'");
    }
    return v;
}

bool parse_bool(const std::string& where, const std::string& text) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    config_error(where + ": expected true or false, got '" + text + "'");
}

class SectionReader {
public:
    SectionReader(const pt::ptree* tree, std::string name) : tree_(tree), name_(std::move(name)) {}

    std::optional<std::string> text(const std::string& key) const {
        if (!tree_) return std::nullopt;
        if (auto v = tree_->get_optional<std::string>(pt::ptree::path_type(key, '\0'))) return *v;
        return std::nullopt;
    }

    std::optional<double> number(const std::string& key) const {
        const auto t = text(key);
        if (!t) return std::nullopt;
        return parse_double(where(key), *t);
    }

    std::optional<std::uint64_t> count(const std::string& key) const {
        const auto t = text(key);
        if (!t) return std::nullopt;
        return parse_uint(where(key), *t);
    }

    std::optional<double> frequency(const std::string& base) const {
        const auto hz = number(base + "_hz");
        const auto rad = number(base + "_rad_s");
        if (hz && rad) config_error("[" + name_ + "] both " + base + "_hz and " + base + "_rad_s given");
        if (hz) return *hz * constants::two_pi;
        return rad;
    }

    double require_frequency(const std::string& base) const {
        const auto v = frequency(base);
        if (!v) config_error("[" + name_ + "] missing " + base + "_hz or " + base + "_rad_s");
        return *v;
    }

    double require_number(const std::string& key) const {
        const auto v = number(key);
        if (!v) config_error("[" + name_ + "] missing " + key);
        return *v;
    }

    std::string where(const std::string& key) const { return "[" + name_ + "] " + key; }

private:
    const pt::ptree* tree_;
    std::string name_;
};

pt::ptree read_tree(const std::string& text) {
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        config_error("config syntax: " + std::string(e.what()));
    }
    for (const auto& [name, sec] : tree) {
        const Section* s = find_section(name);
        if (!s) {
            if (sec.empty()) config_error("key '" + name + "' outside any section");
            config_error("unknown section [" + name + "]");
        }
        for (const auto& [key, value] : sec) {
            if (!accepts(*s, key)) config_error("unknown key '" + key + "' in [" + name + "]");
        }
    }
    return tree;
}

const pt::ptree* child(const pt::ptree& tree, const char* name) {
    const auto it = tree.find(name);
    return it == tree.not_found() ? nullptr : &it->second;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    const pt::ptree tree = read_tree(text);
    RunConfig c;

    const SectionReader sys(child(tree, "system"), "system");
    if (!child(tree, "system")) config_error("missing [system] section");
    c.system.omega_m = sys.require_frequency("omega_m");
    c.system.gamma_1 = sys.require_frequency("gamma_1");
    c.system.gamma_2 = sys.require_frequency("gamma_2");
    c.system.gamma_m = sys.frequency("gamma_m");
    c.system.quality_factor = sys.number("quality_factor");
    c.system.eta = sys.number("eta");
    c.system.Omega_c = sys.require_frequency("omega_c");
    c.system.omega_1 = sys.frequency("omega_1");
    c.system.mass = sys.number("mass_kg");
    c.system.radius = sys.number("radius_m");
    c.system.temperature = sys.require_number("temperature_k");
    c.params = validate_params(c.system);

    const SectionReader noise(child(tree, "noise"), "noise");
    const std::string model = noise.text("model").value_or("white");
    const double gamma_l = noise.number("gamma_l_rad_s").value_or(0.0);
    const auto gamma_c = noise.frequency("gamma_c");
    if (model == "white") {
        if (gamma_c) config_error("[noise] gamma_c applies only to model = finite_correlation");
        c.noise = NoiseModel::white(gamma_l);
    } else if (model == "finite_correlation") {
        if (!gamma_c) config_error("[noise] finite_correlation needs gamma_c_hz or gamma_c_rad_s");
        c.noise = NoiseModel::finite_correlation(gamma_l, *gamma_c);
    } else {
        config_error("[noise] model must be white or finite_correlation, got '" + model + "'");
    }

    if (const auto* m = child(tree, "measurement")) {
        const SectionReader meas(m, "measurement");
        MeasurementInput mi;
        mi.omega_3 = meas.require_frequency("omega_3");
        mi.gamma_3p = meas.require_frequency("gamma_3p");
        mi.Omega_d = meas.require_frequency("omega_d");
        const std::string sb = meas.text("sideband").value_or("blue");
        if (sb == "blue") {
            mi.sideband = Sideband::Blue;
        } else if (sb == "red") {
            mi.sideband = Sideband::Red;
        } else {
            config_error("[measurement] sideband must be blue or red, got '" + sb + "'");
        }
        mi.gamma_mp = meas.frequency("gamma_mp");
        mi.n_mf = meas.number("n_mf");
        c.measurement = mi;
    }

    const SectionReader run(child(tree, "run"), "run");
    RunOptions& r = c.run;
    r.seed = run.count("seed");
    r.trajectories = run.count("trajectories").value_or(0);
    r.threads = static_cast<unsigned>(run.count("threads").value_or(0));
    r.dt = run.number("dt_s");
    r.t_final = run.number("t_final_s");
    r.spectrum_points = run.count("spectrum_points").value_or(r.spectrum_points);
    r.psd_points = run.count("psd_points").value_or(r.psd_points);
    r.psd_max = run.number("psd_max_rad_s");
    r.noise_samples = run.count("noise_samples").value_or(0);
    r.noise_dt = run.number("noise_dt_s");
    r.sweep_axis = run.text("sweep_axis").value_or("");
    r.sweep_from = run.number("sweep_from").value_or(0.0);
    r.sweep_to = run.number("sweep_to").value_or(0.0);
    r.sweep_points = run.count("sweep_points").value_or(r.sweep_points);
    if (const auto t = run.text("sweep_log")) r.sweep_log = parse_bool(run.where("sweep_log"), *t);
    if (r.spectrum_points < 1 || r.psd_points < 1 || r.sweep_points < 1) {
        config_error("[run] point counts must be >= 1");
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) config_error("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string to_ini(const RunConfig& c) {
    std::ostringstream os;
    const auto line = [&](const char* key, double v) { os << key << " = " << fmt_double(v) << '\n'; };
    const auto opt = [&](const char* key, const std::optional<double>& v) {
        if (v) line(key, *v);
    };

    const SystemParamsInput& s = c.system;
    os << "[system]\n";
    line("omega_m_rad_s", s.omega_m);
    line("gamma_1_rad_s", s.gamma_1);
    line("gamma_2_rad_s", s.gamma_2);
    opt("gamma_m_rad_s", s.gamma_m);
    opt("quality_factor", s.quality_factor);
    opt("eta", s.eta);
    line("omega_c_rad_s", s.Omega_c);
    opt("omega_1_rad_s", s.omega_1);
    opt("mass_kg", s.mass);
    opt("radius_m", s.radius);
    line("temperature_k", s.temperature);

    os << "\n[noise]\nmodel = " << to_string(c.noise.kind) << '\n';
    line("gamma_l_rad_s", c.noise.Gamma_l);
    if (c.noise.kind == NoiseKind::FiniteCorrelation) line("gamma_c_rad_s", c.noise.gamma_c);

    if (c.measurement) {
        const MeasurementInput& m = *c.measurement;
        os << "\n[measurement]\n";
        line("omega_3_rad_s", m.omega_3);
        line("gamma_3p_rad_s", m.gamma_3p);
        line("omega_d_rad_s", m.Omega_d);
        os << "sideband = " << to_string(m.sideband) << '\n';
        opt("gamma_mp_rad_s", m.gamma_mp);
        opt("n_mf", m.n_mf);
    }

    const RunOptions& r = c.run;
    os << "\n[run]\n";
    if (r.seed) os << "seed = " << *r.seed << '\n';
    os << "trajectories = " << r.trajectories << '\n';
    os << "threads = " << r.threads << '\n';
    opt("dt_s", r.dt);
    opt("t_final_s", r.t_final);
    os << "spectrum_points = " << r.spectrum_points << '\n';
    os << "psd_points = " << r.psd_points << '\n';
    opt("psd_max_rad_s", r.psd_max);
    os << "noise_samples = " << r.noise_samples << '\n';
    opt("noise_dt_s", r.noise_dt);
    if (!r.sweep_axis.empty()) os << "sweep_axis = " << r.sweep_axis << '\n';
    line("sweep_from", r.sweep_from);
    line("sweep_to", r.sweep_to);
    os << "sweep_points = " << r.sweep_points << '\n';
    os << "sweep_log = " << (r.sweep_log ? "true" : "false") << '\n';
    return os.str();
}

std::optional<std::string> section_of(const std::string& key) {
    for (const auto& s : schema()) {
        if (s.name != "run" && accepts(s, key)) return std::string(s.name);
    }
    return std::nullopt;
}

std::string set_key(const std::string& text, const std::string& section, const std::string& key,
                    double value) {
    pt::ptree tree = read_tree(text);
    const Section* s = find_section(section);
    if (!s || !accepts(*s, key)) config_error("unknown key '" + key + "' in [" + section + "]");
    if (tree.find(section) == tree.not_found()) tree.push_back({section, pt::ptree{}});
    pt::ptree& target = tree.find(section)->second;
    if (const auto base = frequency_base(*s, key)) {
        target.erase(std::string(*base) + "_hz");
        target.erase(std::string(*base) + "_rad_s");
    }
    // Q and gamma_m describe the same damping; keep only the one being swept.
    if (section == "system" && key == "quality_factor") {
        target.erase("gamma_m_hz");
        target.erase("gamma_m_rad_s");
    } else if (section == "system" && frequency_base(*s, key) == std::string_view("gamma_m")) {
        target.erase("quality_factor");
    }
    target.put(pt::ptree::path_type(key, '\0'), fmt_double(value));
    std::ostringstream os;
    pt::write_ini(os, tree);
    return os.str();
}

}  // namespace optocool
