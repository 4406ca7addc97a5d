#include "optocool/report.hpp"

#include "optocool/format.hpp"

namespace optocool {

using nlohmann::json;

namespace {

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json matrix(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

void flatten_into(const json& j, const std::string& prefix,
                  std::vector<std::pair<std::string, std::string>>& out) {
    const auto key = [&](const std::string& k) { return prefix.empty() ? k : prefix + "." + k; };
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) flatten_into(it.value(), key(it.key()), out);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) flatten_into(j[i], key(std::to_string(i)), out);
    } else if (j.is_string()) {
        out.emplace_back(prefix, j.get<std::string>());
    } else if (j.is_number_float()) {
        out.emplace_back(prefix, fmt_double(j.get<double>()));
    } else if (j.is_null()) {
        out.emplace_back(prefix, "");
    } else {
        out.emplace_back(prefix, j.dump());
    }
}

}  // namespace

json to_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

json to_json(const SystemParams& p) {
    return {{"omega_m_rad_s", p.omega_m},
            {"gamma_1_rad_s", p.gamma_1},
            {"gamma_2_rad_s", p.gamma_2},
            {"gamma_m_rad_s", p.gamma_m},
            {"quality_factor", p.quality_factor},
            {"eta", p.eta},
            {"omega_c_rad_s", p.Omega_c},
            {"temperature_k", p.temperature},
            {"omega_1_rad_s", opt(p.omega_1)},
            {"mass_kg", opt(p.mass)},
            {"radius_m", opt(p.radius)},
            {"n_mi", p.n_mi()},
            {"resolved_sideband", p.resolved_sideband()}};
}

json to_json(const NoiseModel& n) {
    json j = {{"model", std::string(to_string(n.kind))}, {"gamma_l_rad_s", n.Gamma_l}};
    if (n.kind == NoiseKind::FiniteCorrelation) j["gamma_c_rad_s"] = n.gamma_c;
    return j;
}

json to_json(const MeasurementParams& mp) {
    return {{"omega_3_rad_s", mp.omega_3}, {"gamma_3p_rad_s", mp.gamma_3p},
            {"omega_d_rad_s", mp.Omega_d}, {"sideband", std::string(to_string(mp.sideband))},
            {"gamma_mp_rad_s", mp.gamma_mp}, {"n_mf", mp.n_mf}};
}

json to_json(const RunConfig& c) {
    json j = {{"system", to_json(c.params)}, {"noise", to_json(c.noise)}};
    if (c.measurement) {
        const auto& m = *c.measurement;
        j["measurement"] = {{"omega_3_rad_s", m.omega_3},
                            {"gamma_3p_rad_s", m.gamma_3p},
                            {"omega_d_rad_s", m.Omega_d},
                            {"sideband", std::string(to_string(m.sideband))},
                            {"gamma_mp_rad_s", opt(m.gamma_mp)},
                            {"n_mf", opt(m.n_mf)}};
    } else {
        j["measurement"] = nullptr;
    }
    const RunOptions& r = c.run;
    j["run"] = {{"seed", r.seed ? json(*r.seed) : json(nullptr)},
                {"trajectories", r.trajectories},
                {"threads", r.threads},
                {"dt_s", opt(r.dt)},
                {"t_final_s", opt(r.t_final)},
                {"spectrum_points", r.spectrum_points},
                {"psd_points", r.psd_points},
                {"psd_max_rad_s", opt(r.psd_max)},
                {"noise_samples", r.noise_samples},
                {"noise_dt_s", opt(r.noise_dt)},
                {"sweep_axis", r.sweep_axis},
                {"sweep_from", r.sweep_from},
                {"sweep_to", r.sweep_to},
                {"sweep_points", r.sweep_points},
                {"sweep_log", r.sweep_log}};
    return j;
}

json to_json(const SteadyState& ss) {
    return {{"alpha_1", to_json(ss.alpha_1)},
            {"alpha_2", to_json(ss.alpha_2)},
            {"beta", to_json(ss.beta)},
            {"Delta_L_rad_s", ss.Delta_L},
            {"residual", ss.residual},
            {"iterations", ss.iterations}};
}

json to_json(const MeasurementSteadyState& ss) {
    return {{"alpha_3", to_json(ss.alpha_3)},
            {"beta_p", to_json(ss.beta_p)},
            {"Delta_Lp_rad_s", ss.Delta_Lp},
            {"effective_detuning_rad_s", ss.effective_detuning},
            {"residual", ss.residual}};
}

json to_json(const CoolingReport& r) {
    return {{"steady_state", to_json(r.steady_state)},
            {"coupling_g_rad_s", r.coupling_g},
            {"gamma_tilde_rad_s", r.gamma_tilde},
            {"adiabatic_ok", r.adiabatic_ok},
            {"n_mi", r.n_mi},
            {"n_phase", r.n_phase},
            {"q_limit_bound", r.q_limit_bound},
            {"n_q_limit", r.n_q_limit},
            {"n_total_estimate", r.n_total_estimate},
            {"n_lyapunov", r.n_lyapunov},
            {"n_lyapunov_with_a1", opt(r.n_lyapunov_with_a1)},
            {"stable", r.stable},
            {"max_re_rad_s", r.max_re},
            {"suppression_factor", r.suppression_factor},
            {"noise_reduction", r.noise_reduction},
            {"lyapunov_residual", r.lyapunov_residual},
            {"min_physical_eigenvalue", r.min_physical_eigenvalue}};
}

json to_json(const EnsembleResult& r, bool include_per_trajectory) {
    json j = {{"mode", r.mode},
              {"n_mean", r.n_mean},
              {"n_stderr", r.n_stderr},
              {"n_traj", r.n_traj},
              {"dt_s", r.dt},
              {"t_final_s", r.t_final},
              {"seed", r.seed},
              {"covariance_mean", matrix(r.covariance_mean)},
              {"covariance_stderr", matrix(r.covariance_stderr)}};
    if (include_per_trajectory) j["per_trajectory"] = r.per_trajectory;
    return j;
}

json to_json(const RouthHurwitzReport& r) {
    return {{"full_inequality", r.full_inequality},
            {"simplified", r.simplified},
            {"eigen_stable_full", r.eigen_stable_full},
            {"eigen_stable_rwa", r.eigen_stable_rwa},
            {"max_re_full_rad_s", r.max_re_full},
            {"max_re_rwa_rad_s", r.max_re_rwa},
            {"g3_rad_s", r.g3},
            {"rwa_threshold_g3_rad_s", r.rwa_threshold_g3},
            {"disagreement", r.disagreement}};
}

json to_json(const BackactionFlags& f) {
    return {{"weak_measurement", f.weak_measurement},
            {"amplitude_hierarchy", f.amplitude_hierarchy},
            {"stable", f.stable},
            {"stability_margin", f.stability_margin}};
}

json to_json(const PhononEstimate& e) { return {{"n", e.n}, {"sigma", e.sigma}, {"ratio", e.ratio}}; }

std::vector<std::pair<std::string, std::string>> flatten(const json& j) {
    std::vector<std::pair<std::string, std::string>> out;
    flatten_into(j, "", out);
    return out;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

}  // namespace optocool
