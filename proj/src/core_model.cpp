#include "optocool/core_model.hpp"

#include <cmath>
#include <string>

#include "optocool/errors.hpp"

namespace optocool {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::NonPositiveRate: return "NonPositiveRate";
        case ErrorKind::InconsistentQ: return "InconsistentQ";
        case ErrorKind::InvalidParameter: return "InvalidParameter";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::MultipleRoots: return "MultipleRoots";
        case ErrorKind::StepTooCoarse: return "StepTooCoarse";
        case ErrorKind::Unstable: return "Unstable";
        case ErrorKind::IllConditioned: return "IllConditioned";
        case ErrorKind::Overflow: return "Overflow";
        case ErrorKind::RatioOutOfRange: return "RatioOutOfRange";
        case ErrorKind::Config: return "Config";
    }
    return "Unknown";
}

namespace {

void require_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw Error(ErrorKind::NonPositiveRate,
                    std::string(name) + " must be finite and > 0, got " + std::to_string(value));
    }
}

void require_non_negative(double value, const char* name) {
    if (!(value >= 0.0) || !std::isfinite(value)) {
        throw Error(ErrorKind::InvalidParameter,
                    std::string(name) + " must be finite and >= 0, got " + std::to_string(value));
    }
}

}  // namespace

double SystemParams::n_mi() const noexcept { return thermal_occupation(temperature, omega_m); }

SystemParams validate_params(const SystemParamsInput& raw) {
    require_positive(raw.omega_m, "omega_m");
    require_positive(raw.gamma_1, "gamma_1");
    require_positive(raw.gamma_2, "gamma_2");
    require_non_negative(raw.Omega_c, "Omega_c");
    require_non_negative(raw.temperature, "temperature");

    double gamma_m = 0.0;
    double quality = 0.0;
    if (raw.gamma_m && raw.quality_factor) {
        require_positive(*raw.gamma_m, "gamma_m");
        require_positive(*raw.quality_factor, "quality_factor");
        const double mismatch = std::abs(*raw.quality_factor * *raw.gamma_m / raw.omega_m - 1.0);
        if (mismatch >= 1e-6) {
            throw Error(ErrorKind::InconsistentQ,
                        "quality_factor * gamma_m / omega_m deviates from 1 by " +
                            std::to_string(mismatch));
        }
        gamma_m = *raw.gamma_m;
        quality = *raw.quality_factor;
    } else if (raw.gamma_m) {
        require_positive(*raw.gamma_m, "gamma_m");
        gamma_m = *raw.gamma_m;
        quality = raw.omega_m / gamma_m;
    } else if (raw.quality_factor) {
        require_positive(*raw.quality_factor, "quality_factor");
        quality = *raw.quality_factor;
        gamma_m = raw.omega_m / quality;
    } else {
        throw Error(ErrorKind::InvalidParameter, "one of gamma_m or quality_factor is required");
    }

    if (raw.omega_1) require_positive(*raw.omega_1, "omega_1");
    if (raw.mass) require_positive(*raw.mass, "mass");
    if (raw.radius) require_positive(*raw.radius, "radius");

    double eta = 0.0;
    if (raw.eta) {
        eta = *raw.eta;
    } else if (raw.omega_1 && raw.mass && raw.radius) {
        eta = compute_eta(*raw.omega_1, raw.omega_m, *raw.mass, *raw.radius);
    } else {
        throw Error(ErrorKind::InvalidParameter,
                    "eta is required unless omega_1, mass and radius are all given");
    }
    if (!(eta > 0.0 && eta < 1.0)) {
        throw Error(ErrorKind::InvalidParameter, "eta must lie in (0, 1), got " + std::to_string(eta));
    }

    return SystemParams{raw.omega_m, raw.gamma_1, raw.gamma_2, gamma_m,     quality,    eta,
                        raw.Omega_c, raw.temperature, raw.omega_1, raw.mass, raw.radius};
}

double zero_point_motion(double mass, double omega_m) {
    require_positive(mass, "mass");
    require_positive(omega_m, "omega_m");
    return std::sqrt(constants::hbar / (mass * omega_m));
}

double compute_eta(double omega_1, double omega_m, double mass, double radius) {
    require_positive(omega_1, "omega_1");
    require_positive(radius, "radius");
    return (omega_1 / omega_m) * zero_point_motion(mass, omega_m) / radius;
}

double thermal_occupation(double temperature, double omega_m) {
    require_non_negative(temperature, "temperature");
    require_positive(omega_m, "omega_m");
    if (temperature == 0.0) return 0.0;
    const double x = constants::hbar * omega_m / (constants::k_B * temperature);
    return 1.0 / std::expm1(x);
}

std::string_view to_string(Sideband s) noexcept { return s == Sideband::Blue ? "blue" : "red"; }

std::string_view to_string(NoiseKind k) noexcept {
    return k == NoiseKind::White ? "white" : "finite_correlation";
}

MeasurementParams validate_measurement(const MeasurementParams& mp) {
    require_positive(mp.omega_3, "omega_3");
    require_positive(mp.gamma_3p, "gamma_3p");
    require_non_negative(mp.Omega_d, "Omega_d");
    require_positive(mp.gamma_mp, "gamma_mp");
    require_non_negative(mp.n_mf, "n_mf");
    return mp;
}

NoiseModel NoiseModel::white(double Gamma_l) {
    require_non_negative(Gamma_l, "Gamma_l");
    return NoiseModel{NoiseKind::White, Gamma_l, 0.0};
}

NoiseModel NoiseModel::finite_correlation(double Gamma_l, double gamma_c) {
    require_non_negative(Gamma_l, "Gamma_l");
    require_positive(gamma_c, "gamma_c");
    return NoiseModel{NoiseKind::FiniteCorrelation, Gamma_l, gamma_c};
}

}  // namespace optocool
