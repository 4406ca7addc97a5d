#include "doctest.h"

#include <cmath>
#include <complex>
#include <set>
#include <sstream>
#include <vector>

#include "optocool/errors.hpp"
#include "optocool/noise.hpp"
#include "optocool/rng.hpp"

using namespace optocool;

namespace {

constexpr double kTwoPi = 6.283185307179586;

// Bartlett periodogram at bin-aligned angular frequency k * 2 pi / (L dt).
double periodogram(const std::vector<double>& x, double dt, std::size_t L, std::size_t k) {
    const std::size_t segs = x.size() / L;
    const double w = kTwoPi * static_cast<double>(k) / static_cast<double>(L);
    double acc = 0.0;
    for (std::size_t s = 0; s < segs; ++s) {
        std::complex<double> sum = 0.0;
        for (std::size_t j = 0; j < L; ++j) {
            sum += x[s * L + j] * std::polar(1.0, -w * static_cast<double>(j));
        }
        acc += std::norm(sum) * dt / static_cast<double>(L);
    }
    return acc / static_cast<double>(segs);
}

}  // namespace

TEST_CASE("phase-derivative spectra") {
    const auto white = NoiseModel::white(1e3);
    CHECK(psd_phase_derivative(white, 0.0) == 2e3);
    CHECK(psd_phase_derivative(white, 1e9) == 2e3);

    const double gc = kTwoPi * 1e6;
    const auto ou = NoiseModel::finite_correlation(1e3, gc);
    CHECK(psd_phase_derivative(ou, 0.0) == doctest::Approx(2e3));
    CHECK(psd_phase_derivative(ou, gc) == doctest::Approx(1e3));
    CHECK(noise_reduction_at(ou, gc) == doctest::Approx(0.5));
    CHECK(noise_reduction_at(white, gc) == 1.0);
    CHECK(noise_reduction_at(ou, 100.0 * gc) == doctest::Approx(1.0 / 10001.0));
}

TEST_CASE("OU spectrum is the Fourier transform of its correlation") {
    const double gc = 3.0;
    const auto ou = NoiseModel::finite_correlation(2.0, gc);
    // Trapezoid on 2 int_0^inf C(tau) cos(w tau) dtau.
    const double h = 1e-4 / gc;
    for (double w : {0.0, 0.5 * gc, gc, 4.0 * gc}) {
        double s = 0.5 * correlation_finite(ou, 0.0);
        for (int k = 1; k < 400000; ++k) {
            const double t = k * h;
            s += correlation_finite(ou, t) * std::cos(w * t);
        }
        CHECK(2.0 * h * s == doctest::Approx(psd_phase_derivative(ou, w)).epsilon(1e-4));
    }
}

TEST_CASE("white path has variance 2 Gamma_l / dt") {
    const auto white = NoiseModel::white(5.0);
    const double dt = 1e-3;
    const auto path = sample_path(white, dt, 200000, 7);
    double m = 0.0, v = 0.0;
    for (double s : path.samples) m += s;
    m /= path.samples.size();
    for (double s : path.samples) v += (s - m) * (s - m);
    v /= path.samples.size() - 1;
    CHECK(v == doctest::Approx(2.0 * 5.0 / dt).epsilon(0.01));
    CHECK(std::abs(m) < 5.0 * std::sqrt(v / path.samples.size()));
}

TEST_CASE("OU path: stationary variance, lag correlation and spectrum") {
    const double gc = 1.0, G = 2.0;
    const auto ou = NoiseModel::finite_correlation(G, gc);
    const double dt = 0.01 / gc;
    const std::size_t L = 4096;
    const auto path = sample_path(ou, dt, 1024 * L, 11);
    const auto& x = path.samples;

    double v = 0.0, c = 0.0;
    const std::size_t lag = 100;  // tau = 1/gamma_c
    for (std::size_t i = 0; i + lag < x.size(); ++i) {
        v += x[i] * x[i];
        c += x[i] * x[i + lag];
    }
    v /= static_cast<double>(x.size() - lag);
    c /= static_cast<double>(x.size() - lag);
    CHECK(v == doctest::Approx(G * gc).epsilon(0.03));
    CHECK(c == doctest::Approx(correlation_finite(ou, lag * dt)).epsilon(0.06));

    for (std::size_t k : {2u, 7u, 13u, 26u}) {
        const double w = kTwoPi * static_cast<double>(k) / (static_cast<double>(L) * dt);
        CAPTURE(w);
        CHECK(periodogram(x, dt, L, k) == doctest::Approx(psd_phase_derivative(ou, w)).epsilon(0.15));
    }
}

TEST_CASE("paths are reproducible and seed dependent") {
    const auto ou = NoiseModel::finite_correlation(1.0, 1.0);
    const auto a = sample_path(ou, 1e-3, 1000, 42);
    const auto b = sample_path(ou, 1e-3, 1000, 42);
    const auto c = sample_path(ou, 1e-3, 1000, 43);
    CHECK(a.samples == b.samples);
    CHECK(a.samples != c.samples);
    std::ostringstream sa, sb;
    write_csv(sa, a);
    write_csv(sb, b);
    CHECK(sa.str() == sb.str());
    CHECK(sa.str().rfind("t,phidot\n", 0) == 0);
}

TEST_CASE("OU sampling refuses coarse steps; zero linewidth gives zeros") {
    const auto ou = NoiseModel::finite_correlation(1.0, 10.0);
    try {
        sample_path(ou, 0.02, 10, 1);
        FAIL("expected StepTooCoarse");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::StepTooCoarse);
    }
    const auto quiet = sample_path(NoiseModel::white(0.0), 1e-3, 5, 1);
    for (double s : quiet.samples) CHECK(s == 0.0);
    CHECK_THROWS_AS(NoiseModel::finite_correlation(1.0, 0.0), Error);
    CHECK_THROWS_AS(NoiseModel::white(-1.0), Error);
}

TEST_CASE("two-mode suppression factor") {
    CHECK(suppression_factor_two_mode(kTwoPi * 100e6, kTwoPi * 1e6) == doctest::Approx(4e4).epsilon(1e-12));
    CHECK(suppression_factor_two_mode(50.0, 1.0) == doctest::Approx(1e4));
    CHECK_THROWS_AS(suppression_factor_two_mode(1.0, 0.0), Error);
}

TEST_CASE("seed derivation and normal stream") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t k = 0; k < 10000; ++k) seen.insert(derive_seed(42, k));
    CHECK(seen.size() == 10000);
    CHECK(derive_seed(42, 0) != derive_seed(43, 0));
    CHECK(derive_seed(42, 5) == derive_seed(42, 5));

    NormalStream rng(123);
    double m1 = 0, m2 = 0, m4 = 0;
    const int n = 400000;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        m1 += z;
        m2 += z * z;
        m4 += z * z * z * z;
    }
    m1 /= n;
    m2 /= n;
    m4 /= n;
    CHECK(std::abs(m1) < 5.0 / std::sqrt(n));
    CHECK(m2 == doctest::Approx(1.0).epsilon(0.01));
    CHECK(m4 == doctest::Approx(3.0).epsilon(0.03));
}
