#include "optocool/noise.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "optocool/errors.hpp"
#include "optocool/format.hpp"
#include "optocool/rng.hpp"

namespace optocool {

double psd_phase_derivative(const NoiseModel& model, double omega) {
    if (model.kind == NoiseKind::White) return 2.0 * model.Gamma_l;
    const double gc2 = model.gamma_c * model.gamma_c;
    return 2.0 * model.Gamma_l * gc2 / (gc2 + omega * omega);
}

double correlation_finite(const NoiseModel& model, double tau) {
    return model.Gamma_l * model.gamma_c * std::exp(-model.gamma_c * std::abs(tau));
}

NoisePath sample_path(const NoiseModel& model, double dt, std::size_t n, std::uint64_t seed) {
    if (!(dt > 0.0)) throw Error(ErrorKind::InvalidParameter, "dt must be > 0");
    NoisePath path{dt, std::vector<double>(n, 0.0), seed};
    if (model.Gamma_l == 0.0 || n == 0) return path;

    NormalStream rng(seed);
    if (model.kind == NoiseKind::White) {
        const double sd = std::sqrt(2.0 * model.Gamma_l / dt);
        for (auto& s : path.samples) s = sd * rng.normal();
        return path;
    }

    if (!(dt < 0.1 / model.gamma_c)) {
        throw Error(ErrorKind::StepTooCoarse,
                    "OU sampling needs dt < 0.1/gamma_c (dt=" + std::to_string(dt) + ")");
    }
    const double sigma = std::sqrt(model.Gamma_l * model.gamma_c);
    const double decay = std::exp(-model.gamma_c * dt);
    const double kick = sigma * std::sqrt(-std::expm1(-2.0 * model.gamma_c * dt));
    double x = sigma * rng.normal();
    for (auto& s : path.samples) {
        s = x;
        x = x * decay + kick * rng.normal();
    }
    return path;
}

double suppression_factor_two_mode(double omega_m, double gamma_1) {
    if (!(omega_m > 0.0) || !(gamma_1 > 0.0)) {
        throw Error(ErrorKind::NonPositiveRate, "suppression factor needs positive rates");
    }
    const double r = 2.0 * omega_m / gamma_1;
    return r * r;
}

double noise_reduction_at(const NoiseModel& model, double omega_m) {
    if (model.kind == NoiseKind::White) return 1.0;
    const double gc2 = model.gamma_c * model.gamma_c;
    return gc2 / (gc2 + omega_m * omega_m);
}

void write_csv(std::ostream& os, const NoisePath& path) {
    os << "t,phidot\n";
    for (std::size_t k = 0; k < path.samples.size(); ++k) {
        os << fmt_double(static_cast<double>(k) * path.dt) << ',' << fmt_double(path.samples[k]) << '\n';
    }
}

}  // namespace optocool
