#pragma once

// Semiclassical Monte-Carlo sampling of a LinearModel.
//
// Each step propagates the drift exactly, X <- exp(A dt) X, and adds a
// Gaussian increment sqrt(dt) B xi (B B^T = D) injected at the half step,
// i.e. exp(A dt/2) sqrt(dt) B xi. Vacuum noise is part of D, so sampled
// moments are symmetrically ordered; n = (<x^2> + <p^2> - 1)/2.

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "optocool/linear_model.hpp"

namespace optocool {

/// Largest step accepted: 0.05 min(2 pi / omega_fast, 1/gamma_max) over the spectrum of A.
double max_step(const LinearModel& model);
/// Default step: min(2 pi / omega_fast, 1/gamma_max)/100.
double default_dt(const LinearModel& model);

struct TrajectoryOptions {
    double dt = 0.0;
    std::size_t steps = 0;
    std::uint64_t seed = 42;
    std::size_t record_stride = 1;
};

/// Instantaneous quadrature squares of one trajectory (rows = records, cols = modes).
struct TrajectoryRecord {
    std::vector<double> t;
    Eigen::MatrixXd x2;
    Eigen::MatrixXd p2;
    std::uint64_t seed = 0;
};

/// Throws StepTooCoarse if dt exceeds max_step, Overflow if the state diverges.
TrajectoryRecord integrate_trajectory(const LinearModel& model, const TrajectoryOptions& opts);

/// `t,x2,p2,n` rows for one mode.
void write_csv(std::ostream& os, const TrajectoryRecord& rec, std::size_t mode);

struct EnsembleOptions {
    std::size_t n_traj = 2000;
    std::optional<double> dt;       // default_dt when unset
    std::optional<double> t_final;  // 20 / slowest decay rate when unset
    std::uint64_t seed = 42;
    std::string mode = "am";
    unsigned threads = 0;           // 0: hardware concurrency
};

struct EnsembleResult {
    std::string mode;
    double n_mean = 0.0;
    double n_stderr = 0.0;
    std::size_t n_traj = 0;
    double dt = 0.0;
    double t_final = 0.0;
    std::uint64_t seed = 0;
    std::vector<double> per_trajectory;  // steady-window phonon estimate per trajectory
    Eigen::MatrixXd covariance_mean;     // steady-window <X X^T>
    Eigen::MatrixXd covariance_stderr;
};

/// Trajectory k uses seed derive_seed(seed, k); the steady window is the last
/// half of the horizon. Results do not depend on the thread count.
EnsembleResult ensemble_phonon(const LinearModel& model, const EnsembleOptions& opts);

}  // namespace optocool
