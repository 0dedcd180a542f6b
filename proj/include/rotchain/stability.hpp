#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <atomic>
#include <cmath>
#include <complex>
#include <limits>
#include <thread>
#include <vector>

#include "rotchain/equilibrium.hpp"
#include "rotchain/jacobian.hpp"
#include "rotchain/lumped.hpp"
#include "rotchain/shape.hpp"

namespace rotchain {

/// Eigenvalues of a real square matrix via the Schur-based solver.
inline std::vector<std::complex<double>> eigenvalues_of(const Eigen::MatrixXd& J) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(J, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw EigenFailure("eigenvalue decomposition did not converge");
    const auto& ev = solver.eigenvalues();
    std::vector<std::complex<double>> out(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) out[i] = ev[i];
    return out;
}

/// Largest real part of the spectrum; the stability indicator.
inline double lambda_max_of(const Eigen::MatrixXd& J) {
    double lm = -std::numeric_limits<double>::infinity();
    for (const auto& ev : eigenvalues_of(J)) lm = std::max(lm, ev.real());
    return lm;
}

/// Equilibrium state, spectrum and stability indicator of one configuration.
struct StabilityReport {
    double lambda_max = 0.0;  ///< [1/s]
    std::vector<std::complex<double>> eigenvalues;
    LumpedState equilibrium;
    double residual_norm = 0.0;  ///< [N]
};

/// Discretize a configuration, solve its rotating-frame equilibrium and
/// compute the spectrum of the linearized dynamics there.
inline StabilityReport analyze_stability(const Configuration& config,
                                         const LumpedModelParams& model,
                                         const ChainParams& chain,
                                         const EquilibriumOptions& options = {}) {
    StabilityReport report;
    report.equilibrium =
        solve_equilibrium(discretize(config, model.links), model, chain, config.omega, options);
    report.residual_norm = detail::force_residual(report.equilibrium, model, chain, config.omega)
                               .lpNorm<Eigen::Infinity>();
    const Eigen::MatrixXd J = analytic_jacobian(report.equilibrium, model, chain, config.omega);
    report.eigenvalues      = eigenvalues_of(J);
    report.lambda_max       = -std::numeric_limits<double>::infinity();
    for (const auto& ev : report.eigenvalues)
        report.lambda_max = std::max(report.lambda_max, ev.real());
    return report;
}

// ---------------------------------------------------------------------------
// Parameter-space sweep
// ---------------------------------------------------------------------------

/// Cell-centered sampling grid over the parameter box.
struct GridSpec {
    CubeBounds bounds{};
    int res_L_bar = 30;
    int res_T_bar = 10;
    int res_c     = 5;

    void validate() const {
        bounds.validate();
        if (res_L_bar < 2 || res_T_bar < 2 || res_c < 2)
            throw InvalidArgument("grid resolution must be at least 2 per axis");
    }

    double L_bar_at(int i) const { return (i + 0.5) * bounds.L_bar_max / res_L_bar; }
    double T_bar_at(int j) const { return (j + 0.5) * bounds.T_bar_max / res_T_bar; }
    double c_at(int k) const { return (k + 0.5) * bounds.c_max / res_c; }

    int size() const { return res_L_bar * res_T_bar * res_c; }

    /// Row-major index: L_bar outer, T_bar middle, c inner.
    int index(int i, int j, int k) const { return (i * res_T_bar + j) * res_c + k; }

    ParamPoint point_at(int flat) const {
        const int k = flat % res_c;
        const int j = (flat / res_c) % res_T_bar;
        const int i = flat / (res_c * res_T_bar);
        return {L_bar_at(i), T_bar_at(j), c_at(k)};
    }
};

/// One evaluated grid point. A failed equilibrium or eigensolve is recorded,
/// not propagated; lambda_max is NaN in that case.
struct StabilityRecord {
    ParamPoint point;
    double lambda_max = std::numeric_limits<double>::quiet_NaN();
    int mode          = 0;
    ControlInput control;
    bool equilibrium_ok = false;
};

namespace detail {

inline std::vector<StabilityRecord> sweep_grid(const GridSpec& grid,
                                               const LumpedModelParams& model,
                                               const ChainParams& chain, int jobs, int steps) {
    std::vector<StabilityRecord> records(grid.size());
    const auto evaluate = [&](int flat) {
        StabilityRecord rec;
        rec.point = grid.point_at(flat);
        try {
            const Configuration config = forward_map(rec.point, chain, steps, grid.bounds);
            rec.mode                   = config.mode;
            rec.control                = config.control;
            const StabilityReport rep  = analyze_stability(config, model, chain);
            rec.lambda_max             = rep.lambda_max;
            rec.equilibrium_ok         = true;
        } catch (const Error&) {
            // failure at this point is data; defaults already say so
        }
        records[flat] = rec;
    };

    if (jobs == 1) {
        for (int flat = 0; flat < grid.size(); ++flat) evaluate(flat);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> workers;
        workers.reserve(jobs);
        for (int w = 0; w < jobs; ++w) {
            workers.emplace_back([&] {
                for (int flat = next.fetch_add(1); flat < grid.size(); flat = next.fetch_add(1))
                    evaluate(flat);
            });
        }
        for (auto& t : workers) t.join();
    }
    return records;
}

}  // namespace detail

/// Evaluate the stability map over the whole grid. Points are independent
/// work items; with jobs > 1 they are processed by a small thread pool and
/// merged by grid index, so the output order (and content) is identical to
/// the serial sweep.
inline std::vector<StabilityRecord> stability_grid(const GridSpec& grid,
                                                   const LumpedModelParams& model,
                                                   const ChainParams& chain, int jobs = 1,
                                                   int steps = kDefaultIntegrationSteps) {
    grid.validate();
    model.validate();
    chain.validate();
    if (jobs < 1) throw InvalidArgument("jobs must be at least 1");
    return detail::sweep_grid(grid, model, chain, jobs, steps);
}

/// A single T_bar slice of the map: the same record format swept over
/// (L_bar, c) only, L_bar outer, c inner.
inline std::vector<StabilityRecord> stability_slice(const GridSpec& grid, double T_bar,
                                                    const LumpedModelParams& model,
                                                    const ChainParams& chain, int jobs = 1,
                                                    int steps = kDefaultIntegrationSteps) {
    if (!(T_bar > 0.0) || T_bar > grid.bounds.T_bar_max)
        throw InvalidArgument("slice T_bar must lie inside the cube");
    if (grid.res_L_bar < 2 || grid.res_c < 2)
        throw InvalidArgument("grid resolution must be at least 2 per axis");
    if (jobs < 1) throw InvalidArgument("jobs must be at least 1");
    GridSpec sliced         = grid;
    sliced.bounds.T_bar_max = 2.0 * T_bar;  // one cell centered exactly on T_bar
    sliced.res_T_bar        = 1;
    return detail::sweep_grid(sliced, model, chain, jobs, steps);
}

}  // namespace rotchain
