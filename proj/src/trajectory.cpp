#include "optocool/trajectory.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>
#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>
#include <thread>

#include "optocool/covariance.hpp"
#include "optocool/errors.hpp"
#include "optocool/format.hpp"
#include "optocool/rng.hpp"

namespace optocool {

namespace {

constexpr int kMaxDim = 8;
constexpr double kOverflowNorm2 = 1e200;

double time_scale(const LinearModel& model) {
    const auto st = stability_eigen(model.A);
    double w_fast = 0.0, g_max = 0.0;
    for (const auto& l : st.eigenvalues) {
        w_fast = std::max(w_fast, std::abs(l.imag()));
        g_max = std::max(g_max, std::abs(l.real()));
    }
    double scale = std::numeric_limits<double>::infinity();
    if (w_fast > 0.0) scale = std::min(scale, constants::two_pi / w_fast);
    if (g_max > 0.0) scale = std::min(scale, 1.0 / g_max);
    return scale;
}

struct Propagator {
    Eigen::MatrixXd step;   // exp(A dt)
    Eigen::MatrixXd noise;  // exp(A dt/2) sqrt(dt) B, only non-null columns of B
};

Propagator make_propagator(const LinearModel& model, double dt) {
    Propagator prop;
    prop.step = (model.A * dt).exp();
    const Eigen::MatrixXd half = (model.A * (0.5 * dt)).exp();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (model.D + model.D.transpose()));
    const Eigen::VectorXd& lam = es.eigenvalues();
    const double lmax = lam.size() > 0 ? lam.cwiseAbs().maxCoeff() : 0.0;
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        if (lam(i) > 1e-14 * lmax) keep.push_back(i);
    }
    Eigen::MatrixXd B(model.D.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c) {
        B.col(static_cast<Eigen::Index>(c)) = es.eigenvectors().col(keep[c]) * std::sqrt(lam(keep[c]));
    }
    prop.noise = half * B * std::sqrt(dt);
    return prop;
}

template <int Dim>
using Vec = Eigen::Matrix<double, Dim, 1>;
template <int Dim>
using Mat = Eigen::Matrix<double, Dim, Dim>;
template <int Dim>
using NoiseMat = Eigen::Matrix<double, Dim, Eigen::Dynamic, 0, Dim, Dim>;

[[noreturn]] void throw_overflow(std::size_t k) {
    throw Error(ErrorKind::Overflow, "trajectory diverged at step " + std::to_string(k));
}

// Time-averaged X X^T over steps [window_start, steps).
template <int Dim>
Eigen::MatrixXd run_window(const Propagator& prop, std::uint64_t seed, std::size_t steps,
                           std::size_t window_start) {
    const Mat<Dim> phi = prop.step;
    const NoiseMat<Dim> G = prop.noise;
    const Eigen::Index r = G.cols();
    Vec<Dim> x = Vec<Dim>::Zero();
    Eigen::Matrix<double, Eigen::Dynamic, 1, 0, Dim, 1> xi(r);
    Mat<Dim> acc = Mat<Dim>::Zero();
    NormalStream rng(seed);
    for (std::size_t k = 0; k < steps; ++k) {
        for (Eigen::Index i = 0; i < r; ++i) xi(i) = rng.normal();
        x = phi * x + G * xi;
        if (k >= window_start) acc.noalias() += x * x.transpose();
        if ((k & 1023u) == 0 && !(x.squaredNorm() < kOverflowNorm2)) throw_overflow(k);
    }
    if (!(x.squaredNorm() < kOverflowNorm2)) throw_overflow(steps);
    return acc / static_cast<double>(steps - window_start);
}

Eigen::MatrixXd run_window_dispatch(const Propagator& prop, Eigen::Index dim, std::uint64_t seed,
                                    std::size_t steps, std::size_t window_start) {
    switch (dim) {
        case 1: return run_window<1>(prop, seed, steps, window_start);
        case 2: return run_window<2>(prop, seed, steps, window_start);
        case 3: return run_window<3>(prop, seed, steps, window_start);
        case 4: return run_window<4>(prop, seed, steps, window_start);
        case 5: return run_window<5>(prop, seed, steps, window_start);
        case 6: return run_window<6>(prop, seed, steps, window_start);
        case 7: return run_window<7>(prop, seed, steps, window_start);
        case 8: return run_window<8>(prop, seed, steps, window_start);
        default:
            throw Error(ErrorKind::InvalidParameter,
                        "trajectory state dimension " + std::to_string(dim) + " exceeds " +
                            std::to_string(kMaxDim));
    }
}

// Pairwise summation keeps the ensemble mean independent of accumulation order.
double pairwise_sum(const double* v, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

void mean_stderr(const std::vector<double>& v, double& mean, double& stderr_out) {
    const std::size_t n = v.size();
    mean = pairwise_sum(v.data(), n) / static_cast<double>(n);
    if (n < 2) {
        stderr_out = 0.0;
        return;
    }
    std::vector<double> dev(n);
    for (std::size_t i = 0; i < n; ++i) dev[i] = (v[i] - mean) * (v[i] - mean);
    const double var = pairwise_sum(dev.data(), n) / static_cast<double>(n - 1);
    stderr_out = std::sqrt(var / static_cast<double>(n));
}

void check_step(const LinearModel& model, double dt) {
    if (!model.A.allFinite() || !model.D.allFinite()) {
        throw Error(ErrorKind::InvalidParameter, "model contains non-finite entries");
    }
    if (!(dt > 0.0)) throw Error(ErrorKind::InvalidParameter, "dt must be > 0");
    const double limit = max_step(model);
    if (!(dt < limit)) {
        throw Error(ErrorKind::StepTooCoarse,
                    "dt = " + fmt_double(dt) + " must be below " + fmt_double(limit));
    }
}

}  // namespace

double max_step(const LinearModel& model) { return 0.05 * time_scale(model); }

double default_dt(const LinearModel& model) { return time_scale(model) / 100.0; }

TrajectoryRecord integrate_trajectory(const LinearModel& model, const TrajectoryOptions& opts) {
    check_step(model, opts.dt);
    const std::size_t stride = std::max<std::size_t>(1, opts.record_stride);
    const auto dim = static_cast<Eigen::Index>(model.dimension());
    const Propagator prop = make_propagator(model, opts.dt);

    const std::size_t n_rec = opts.steps / stride + 1;
    const auto n_modes = static_cast<Eigen::Index>(model.n_modes);
    TrajectoryRecord rec;
    rec.seed = opts.seed;
    rec.t.reserve(n_rec);
    rec.x2 = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_rec), n_modes);
    rec.p2 = rec.x2;

    Eigen::VectorXd x = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd xi(prop.noise.cols());
    NormalStream rng(opts.seed);
    Eigen::Index row = 0;
    const auto record = [&](std::size_t k) {
        rec.t.push_back(static_cast<double>(k) * opts.dt);
        for (Eigen::Index j = 0; j < n_modes; ++j) {
            rec.x2(row, j) = x(2 * j) * x(2 * j);
            rec.p2(row, j) = x(2 * j + 1) * x(2 * j + 1);
        }
        ++row;
    };
    record(0);
    for (std::size_t k = 1; k <= opts.steps; ++k) {
        for (Eigen::Index i = 0; i < xi.size(); ++i) xi(i) = rng.normal();
        x = prop.step * x + prop.noise * xi;
        if (!(x.squaredNorm() < kOverflowNorm2)) throw_overflow(k);
        if (k % stride == 0) record(k);
    }
    rec.x2.conservativeResize(row, n_modes);
    rec.p2.conservativeResize(row, n_modes);
    return rec;
}

void write_csv(std::ostream& os, const TrajectoryRecord& rec, std::size_t mode) {
    const auto j = static_cast<Eigen::Index>(mode);
    os << "t,x2,p2,n\n";
    for (std::size_t r = 0; r < rec.t.size(); ++r) {
        const auto i = static_cast<Eigen::Index>(r);
        const double x2 = rec.x2(i, j), p2 = rec.p2(i, j);
        os << fmt_double(rec.t[r]) << ',' << fmt_double(x2) << ',' << fmt_double(p2) << ','
           << fmt_double(0.5 * (x2 + p2 - 1.0)) << '\n';
    }
}

EnsembleResult ensemble_phonon(const LinearModel& model, const EnsembleOptions& opts) {
    if (opts.n_traj == 0) throw Error(ErrorKind::InvalidParameter, "n_traj must be >= 1");
    const std::size_t mode = model.mode_index(opts.mode);
    const double slowest = slowest_decay_rate(model.A);
    const double dt = opts.dt.value_or(default_dt(model));
    const double t_final = opts.t_final.value_or(20.0 / slowest);
    check_step(model, dt);
    if (!(t_final >= 10.0 / slowest * (1.0 - 1e-12))) {
        throw Error(ErrorKind::InvalidParameter,
                    "t_final must be >= 10/slowest decay rate = " + fmt_double(10.0 / slowest));
    }

    const auto steps = static_cast<std::size_t>(std::ceil(t_final / dt));
    const std::size_t window_start = steps / 2;
    const auto dim = static_cast<Eigen::Index>(model.dimension());
    const Propagator prop = make_propagator(model, dt);

    std::vector<Eigen::MatrixXd> per(opts.n_traj);
    unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, opts.n_traj));
    std::vector<std::exception_ptr> errors(threads);
    const auto worker = [&](unsigned w) {
        try {
            for (std::size_t k = w; k < opts.n_traj; k += threads) {
                per[k] = run_window_dispatch(prop, dim, derive_seed(opts.seed, k), steps, window_start);
            }
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker, w);
        for (auto& t : pool) t.join();
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    EnsembleResult out;
    out.mode = opts.mode;
    out.n_traj = opts.n_traj;
    out.dt = dt;
    out.t_final = static_cast<double>(steps) * dt;
    out.seed = opts.seed;
    out.per_trajectory.resize(opts.n_traj);
    const auto jx = static_cast<Eigen::Index>(2 * mode);
    for (std::size_t k = 0; k < opts.n_traj; ++k) {
        out.per_trajectory[k] = 0.5 * (per[k](jx, jx) + per[k](jx + 1, jx + 1) - 1.0);
    }
    mean_stderr(out.per_trajectory, out.n_mean, out.n_stderr);

    out.covariance_mean = Eigen::MatrixXd::Zero(dim, dim);
    out.covariance_stderr = Eigen::MatrixXd::Zero(dim, dim);
    std::vector<double> entry(opts.n_traj);
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) {
            for (std::size_t k = 0; k < opts.n_traj; ++k) entry[k] = per[k](i, j);
            mean_stderr(entry, out.covariance_mean(i, j), out.covariance_stderr(i, j));
        }
    }
    return out;
}

}  // namespace optocool
