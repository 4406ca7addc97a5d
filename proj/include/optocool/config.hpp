#pragma once

// INI run configuration.
//
//   [system]       omega_m, gamma_1, gamma_2, gamma_m, omega_c, omega_1 as *_hz or *_rad_s;
//                  quality_factor, eta, mass_kg, radius_m, temperature_k
//   [noise]        model = white | finite_correlation, gamma_l_rad_s, gamma_c_hz | gamma_c_rad_s
//   [measurement]  omega_3, gamma_3p, omega_d, gamma_mp as *_hz or *_rad_s; sideband = blue | red; n_mf
//   [run]          seed, trajectories, threads, dt_s, t_final_s, spectrum_points,
//                  psd_points, psd_max_rad_s, noise_samples, noise_dt_s,
//                  sweep_axis, sweep_from, sweep_to, sweep_points, sweep_log
//
// *_hz values are multiplied by 2 pi, *_rad_s values are used verbatim.
// gamma_l_rad_s is a plain rate in s^-1. Unknown sections or keys are errors.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "optocool/core_model.hpp"

namespace optocool {

struct MeasurementInput {
    double omega_3 = 0.0;
    double gamma_3p = 0.0;
    double Omega_d = 0.0;
    Sideband sideband = Sideband::Blue;
    std::optional<double> gamma_mp;  // gamma_m + gamma_tilde of the cooling stage when unset
    std::optional<double> n_mf;      // cooled phonon number when unset
};

struct RunOptions {
    std::optional<std::uint64_t> seed;
    std::size_t trajectories = 0;
    unsigned threads = 0;
    std::optional<double> dt;
    std::optional<double> t_final;
    std::size_t spectrum_points = 1001;
    std::size_t psd_points = 1001;
    std::optional<double> psd_max;
    std::size_t noise_samples = 0;
    std::optional<double> noise_dt;
    std::string sweep_axis;
    double sweep_from = 0.0;
    double sweep_to = 0.0;
    std::size_t sweep_points = 11;
    bool sweep_log = false;
};

struct RunConfig {
    SystemParamsInput system;
    SystemParams params;  // validated form of `system`
    NoiseModel noise;
    std::optional<MeasurementInput> measurement;
    RunOptions run;
};

/// Throws Error(Config) for syntax errors, unknown keys, missing or
/// malformed values; validation failures keep their own kind.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Writes the config back as INI with *_rad_s keys and 17 significant digits;
/// parse_config(to_ini(c)) reproduces c.
std::string to_ini(const RunConfig& c);

/// Returns `text` with one key replaced (or inserted), e.g. set_key(t, "noise", "gamma_l_rad_s", v).
/// Any sibling spelling of the same quantity (*_hz vs *_rad_s) is removed.
std::string set_key(const std::string& text, const std::string& section, const std::string& key,
                    double value);

/// Section holding `key`, or nullopt if no section accepts it.
std::optional<std::string> section_of(const std::string& key);

}  // namespace optocool
