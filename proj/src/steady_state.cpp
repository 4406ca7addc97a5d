#include "optocool/steady_state.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "optocool/errors.hpp"

namespace optocool {

namespace {

constexpr cplx I{0.0, 1.0};

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

Vec6 pack(cplx a1, cplx a2, cplx b) {
    Vec6 x;
    x << a1.real(), a1.imag(), a2.real(), a2.imag(), b.real(), b.imag();
    return x;
}

Vec6 residual_vec(const SystemParams& p, const Vec6& x) {
    const auto r = steady_state_residual(p, {x[0], x[1]}, {x[2], x[3]}, {x[4], x[5]});
    return Eigen::Map<const Vec6>(r.data());
}

double max_abs(const Vec6& v) { return v.cwiseAbs().maxCoeff(); }

struct NewtonOutcome {
    Vec6 x;
    double residual;
    int iterations;
    bool converged;
};

NewtonOutcome newton(const SystemParams& p, Vec6 x, const SteadyStateOptions& opts) {
    // Per-unknown scales for the finite-difference step.
    const double alpha_scale = p.Omega_c / p.gamma_1;
    const double beta_scale = p.eta * alpha_scale * alpha_scale + 1e-300;
    const std::array<double, 6> scale{alpha_scale, alpha_scale, alpha_scale,
                                      alpha_scale, beta_scale,  beta_scale};

    Vec6 f = residual_vec(p, x);
    double fnorm = max_abs(f);
    int it = 0;
    for (; it < opts.max_iterations && fnorm >= opts.tolerance; ++it) {
        Mat6 jac;
        for (int j = 0; j < 6; ++j) {
            const double h = 1e-7 * std::max(std::abs(x[j]), scale[static_cast<std::size_t>(j)]);
            Vec6 xp = x, xm = x;
            xp[j] += h;
            xm[j] -= h;
            jac.col(j) = (residual_vec(p, xp) - residual_vec(p, xm)) / (2.0 * h);
        }
        const Vec6 step = jac.fullPivLu().solve(-f);
        if (!step.allFinite()) break;

        double lambda = 1.0;
        Vec6 trial = x + step;
        Vec6 ftrial = residual_vec(p, trial);
        while (!(max_abs(ftrial) < fnorm) && lambda > 1.0 / 1024.0) {
            lambda *= 0.5;
            trial = x + lambda * step;
            ftrial = residual_vec(p, trial);
        }
        if (!ftrial.allFinite()) break;
        x = trial;
        f = ftrial;
        fnorm = max_abs(f);
    }
    return {x, fnorm, it, fnorm < opts.tolerance};
}

SteadyState to_state(const SystemParams& p, const Vec6& x, double residual, int iterations) {
    SteadyState s;
    s.alpha_1 = {x[0], x[1]};
    s.alpha_2 = {x[2], x[3]};
    s.beta = {x[4], x[5]};
    s.Delta_L = p.eta * p.omega_m * 2.0 * s.beta.real();
    s.residual = residual;
    s.iterations = iterations;
    return s;
}

}  // namespace

std::array<double, 6> steady_state_residual(const SystemParams& p, cplx a1, cplx a2, cplx beta) {
    const double wm = p.omega_m;
    const double two_re_beta = 2.0 * beta.real();
    const double Delta_L = p.eta * wm * two_re_beta;
    const cplx sum = a1 + a2;
    const cplx drive = I * p.Omega_c / 2.0;

    const cplx e1 = I * Delta_L * a1 - I * p.eta * wm * sum * two_re_beta - p.gamma_1 / 2.0 * a1 + drive;
    const cplx e2 = -I * (wm - Delta_L) * a2 - I * p.eta * wm * sum * two_re_beta -
                    p.gamma_2 / 2.0 * a2 + drive;
    const cplx e3 = wm * (beta + p.eta * std::norm(sum));

    const double scale = p.Omega_c > 0.0 ? p.Omega_c : 1.0;
    return {e1.real() / scale, e1.imag() / scale, e2.real() / scale,
            e2.imag() / scale, e3.real() / scale, e3.imag() / scale};
}

SteadyState approximate_steady_state(const SystemParams& p) {
    if (p.Omega_c == 0.0) return SteadyState{};
    const cplx a1 = I * p.Omega_c / p.gamma_1;
    const cplx beta = -p.eta * std::norm(a1);
    const double Delta_L = p.eta * p.omega_m * 2.0 * beta.real();
    const cplx a2 = I * (p.Omega_c - 2.0 * Delta_L * a1) / (2.0 * I * p.omega_m + p.gamma_2);

    const auto r = steady_state_residual(p, a1, a2, beta);
    SteadyState s;
    s.alpha_1 = a1;
    s.alpha_2 = a2;
    s.beta = beta;
    s.Delta_L = Delta_L;
    s.residual = max_abs(Eigen::Map<const Vec6>(r.data()));
    return s;
}

SteadyState solve_classical_steady_state(const SystemParams& p, const SteadyStateOptions& opts) {
    if (p.Omega_c == 0.0) return SteadyState{};

    const SteadyState guess = approximate_steady_state(p);
    const NewtonOutcome main =
        newton(p, pack(guess.alpha_1, guess.alpha_2, guess.beta), opts);
    if (!main.converged) {
        throw Error(ErrorKind::NoConvergence,
                    "steady-state Newton iteration stalled at residual " +
                        std::to_string(main.residual) + " after " +
                        std::to_string(main.iterations) + " iterations");
    }

    if (opts.probe_bistability) {
        const cplx a1{main.x[0], main.x[1]};
        const cplx a2{main.x[2], main.x[3]};
        const cplx b{main.x[4], main.x[5]};
        const double separation = 1e-6 * std::abs(a1);
        for (int k = 0; k < opts.probe_starts; ++k) {
            const double mag = (k & 1) ? 1.6 : 0.6;
            const cplx rot = std::polar(1.0, (k & 2) ? 0.5 : -0.5);
            const double bscale = (k & 4) ? 2.0 : 0.3;
            SteadyStateOptions probe = opts;
            probe.probe_bistability = false;
            const NewtonOutcome alt =
                newton(p, pack(mag * rot * a1, mag * std::conj(rot) * a2, bscale * b), probe);
            if (!alt.converged) continue;
            const double dist = std::max({std::abs(cplx{alt.x[0], alt.x[1]} - a1),
                                          std::abs(cplx{alt.x[2], alt.x[3]} - a2),
                                          std::abs(cplx{alt.x[4], alt.x[5]} - b)});
            if (dist > separation) {
                throw Error(ErrorKind::MultipleRoots,
                            "distinct steady state found from perturbed start " + std::to_string(k) +
                                " (separation " + std::to_string(dist) + ")");
            }
        }
    }
    return to_state(p, main.x, main.residual, main.iterations);
}

double sideband_detuning(Sideband s, double omega_m) noexcept {
    return s == Sideband::Blue ? omega_m : -omega_m;
}

MeasurementSteadyState measurement_steady_state(const SystemParams& p, const MeasurementParams& mp) {
    MeasurementSteadyState out;
    out.effective_detuning = sideband_detuning(mp.sideband, p.omega_m);
    if (mp.Omega_d == 0.0) {
        out.Delta_Lp = out.effective_detuning;
        return out;
    }
    // i Delta_eff alpha_3 - (gamma_3'/2) alpha_3 + i Omega_d/2 = 0
    const cplx a3 = I * mp.Omega_d / (mp.gamma_3p - 2.0 * I * out.effective_detuning);
    const cplx beta_p = -p.eta * std::norm(a3);
    const double Delta_Lp = out.effective_detuning - 2.0 * p.eta * p.eta * p.omega_m * std::norm(a3);

    const cplx e1 = I * Delta_Lp * a3 - I * p.eta * p.omega_m * a3 * (2.0 * beta_p.real()) -
                    mp.gamma_3p / 2.0 * a3 + I * mp.Omega_d / 2.0;
    const double e2 = Delta_Lp + 2.0 * p.eta * p.eta * p.omega_m * std::norm(a3) - out.effective_detuning;
    const double res = std::max(std::abs(e1) / mp.Omega_d, std::abs(e2) / p.omega_m);
    if (!std::isfinite(res) || res > 1e-10) {
        throw Error(ErrorKind::NoConvergence,
                    "measurement steady state residual " + std::to_string(res));
    }
    out.alpha_3 = a3;
    out.beta_p = beta_p;
    out.Delta_Lp = Delta_Lp;
    out.residual = res;
    return out;
}

}  // namespace optocool
