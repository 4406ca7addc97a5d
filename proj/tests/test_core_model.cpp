#include "doctest.h"

#include <cmath>

#include "optocool/core_model.hpp"
#include "optocool/errors.hpp"
#include "optocool/rates.hpp"

using namespace optocool;

namespace {

constexpr double kTwoPi = 6.283185307179586;

SystemParamsInput base_input() {
    SystemParamsInput in;
    in.omega_m = kTwoPi * 100e6;
    in.gamma_1 = kTwoPi * 1e6;
    in.gamma_2 = kTwoPi * 1e6;
    in.quality_factor = 2e5;
    in.eta = 1e-4;
    in.Omega_c = kTwoPi * 20e6;
    in.temperature = 0.6;
    return in;
}

// Geometric series sum_{k>=1} exp(-k x), summed until the terms vanish.
double bose_series(double x) {
    double s = 0.0, term = std::exp(-x);
    const double q = term;
    while (term > 1e-18 * s || s == 0.0) {
        s += term;
        term *= q;
        if (term == 0.0) break;
    }
    return s;
}

ErrorKind kind_of(const SystemParamsInput& in) {
    try {
        validate_params(in);
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected validation failure");
    return ErrorKind::Config;
}

}  // namespace

TEST_CASE("validation derives gamma_m from Q and the reverse") {
    auto in = base_input();
    const auto p = validate_params(in);
    CHECK(p.gamma_m == doctest::Approx(in.omega_m / 2e5).epsilon(1e-15));
    CHECK(p.resolved_sideband());

    in.quality_factor.reset();
    in.gamma_m = kTwoPi * 500.0;
    const auto q = validate_params(in);
    CHECK(q.quality_factor == doctest::Approx(2e5).epsilon(1e-12));
}

TEST_CASE("validation rejects bad inputs with the matching kind") {
    auto in = base_input();
    in.gamma_1 = 0.0;
    CHECK(kind_of(in) == ErrorKind::NonPositiveRate);

    in = base_input();
    in.omega_m = -1.0;
    CHECK(kind_of(in) == ErrorKind::NonPositiveRate);

    in = base_input();
    in.gamma_m = in.omega_m / 1e5;  // Q = 2e5 given alongside
    CHECK(kind_of(in) == ErrorKind::InconsistentQ);

    in = base_input();
    in.gamma_m = in.omega_m / 2e5;  // consistent
    CHECK_NOTHROW(validate_params(in));

    in = base_input();
    in.quality_factor.reset();
    CHECK(kind_of(in) == ErrorKind::InvalidParameter);

    in = base_input();
    in.eta = 1.5;
    CHECK(kind_of(in) == ErrorKind::InvalidParameter);

    in = base_input();
    in.eta.reset();
    CHECK(kind_of(in) == ErrorKind::InvalidParameter);

    in = base_input();
    in.temperature = -1.0;
    CHECK(kind_of(in) == ErrorKind::InvalidParameter);
}

TEST_CASE("eta from geometry when not given directly") {
    auto in = base_input();
    in.eta.reset();
    in.omega_1 = kTwoPi * 2e14;
    in.mass = 1e-15;
    in.radius = 1e-3;
    const auto p = validate_params(in);
    CHECK(p.eta == doctest::Approx(compute_eta(*in.omega_1, in.omega_m, 1e-15, 1e-3)).epsilon(1e-15));
}

TEST_CASE("zero-point motion and eta, two-step hand evaluation") {
    // sqrt(hbar/(m w)) with m = 1e-15 kg, w = 2 pi 1e8 rad/s
    const double hbar = 1.054571817e-34;
    const double w = kTwoPi * 1e8;
    const double x_zp = std::sqrt(hbar / (1e-15 * w));
    CHECK(x_zp == doctest::Approx(1.2955e-14).epsilon(1e-4));
    CHECK(zero_point_motion(1e-15, w) == doctest::Approx(x_zp).epsilon(1e-14));

    // Radius picked so eta = 1e-4: R = (w1/wm) x_zp / 1e-4.
    const double w1 = kTwoPi * 2e14;
    const double R = (w1 / w) * x_zp / 1e-4;
    CHECK(compute_eta(w1, w, 1e-15, R) == doctest::Approx(1e-4).epsilon(1e-12));
}

TEST_CASE("eta scaling laws") {
    const double w1 = kTwoPi * 2e14, wm = kTwoPi * 1e8;
    const double e0 = compute_eta(w1, wm, 1e-15, 1e-3);
    CHECK(compute_eta(w1, wm, 2e-15, 1e-3) == doctest::Approx(e0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(compute_eta(w1, wm, 1e-15, 2e-3) == doctest::Approx(e0 / 2.0).epsilon(1e-14));
    CHECK(compute_eta(w1, wm, 1e-15, 1e30) < 1e-30);
}

TEST_CASE("thermal occupation matches the geometric series") {
    const double hbar = 1.054571817e-34, kB = 1.380649e-23;
    for (double T : {0.01, 0.6, 1.65, 10.0}) {
        for (double f : {62e6, 100e6, 5e9}) {
            const double w = kTwoPi * f;
            const double x = hbar * w / (kB * T);
            CHECK(thermal_occupation(T, w) == doctest::Approx(bose_series(x)).epsilon(1e-10));
        }
    }
}

TEST_CASE("thermal occupation frozen values and identities") {
    // Frozen from the series oracle above.
    const double x = 1.054571817e-34 * kTwoPi * 62e6 / (1.380649e-23 * 1.65);
    const double n = bose_series(x);
    CHECK(n == doctest::Approx(554.0230789011919).epsilon(1e-12));
    CHECK(thermal_occupation(1.65, kTwoPi * 62e6) == doctest::Approx(n).epsilon(1e-10));
    CHECK(thermal_occupation(0.0, kTwoPi * 62e6) == 0.0);

    // hbar w / k T = ln 2 gives exactly one phonon.
    const double w = kTwoPi * 1e9;
    const double T = 1.054571817e-34 * w / (1.380649e-23 * std::log(2.0));
    CHECK(thermal_occupation(T, w) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("thermal occupation is monotone and approaches the classical limit") {
    const double w = kTwoPi * 62e6;
    double prev = -1.0;
    for (double T = 0.001; T < 20.0; T *= 1.3) {
        const double n = thermal_occupation(T, w);
        CHECK(n > prev);
        prev = n;
        const double classical = 1.380649e-23 * T / (1.054571817e-34 * w);
        if (classical > 50.0) CHECK(std::abs(n / classical - 1.0) < 0.01);
    }
    double prev_w = 1e300;
    for (double f = 1e6; f < 1e10; f *= 2.0) {
        const double n = thermal_occupation(1.0, kTwoPi * f);
        CHECK(n < prev_w);
        prev_w = n;
    }
}

TEST_CASE("q limit at the quoted points") {
    CHECK(q_limit(1.65, kTwoPi * 62e6, 2000) == doctest::Approx(0.2776).epsilon(1e-3));
    CHECK(q_limit(0.6, kTwoPi * 62e6, 2e4) == doctest::Approx(0.0101).epsilon(1e-2));
    CHECK_THROWS_AS(q_limit(1.0, kTwoPi * 62e6, 0.0), Error);
}

TEST_CASE("measurement validation") {
    MeasurementParams mp{kTwoPi * 2e14, kTwoPi * 1e6, kTwoPi * 1e5, Sideband::Red, kTwoPi * 1e5, 0.3};
    CHECK_NOTHROW(validate_measurement(mp));
    mp.gamma_mp = 0.0;
    CHECK_THROWS_AS(validate_measurement(mp), Error);
    mp.gamma_mp = 1.0;
    mp.n_mf = -0.1;
    CHECK_THROWS_AS(validate_measurement(mp), Error);
}
