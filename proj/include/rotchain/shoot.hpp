#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "rotchain/dimensionless.hpp"
#include "rotchain/shape.hpp"
#include "rotchain/types.hpp"

namespace rotchain {

struct ShootOptions {
    double T_bar_max       = 10.0;   ///< upper end of the tension scan
    int steps              = kDefaultIntegrationSteps;
    double residual_tol    = 1e-8;   ///< |u'(L_bar) - r_bar| acceptance
    double root_separation = 1e-6;   ///< roots closer than this in T_bar merge
    int max_iterations     = 100;
};

inline constexpr int kDefaultScanResolution = 400;

/// Lower end of the tension scan; roots below this are out of scope for
/// every resolution, which keeps root counts comparable across scan
/// densities.
inline constexpr double kTensionScanFloor = 1e-6;

namespace detail {

/// Safeguarded Newton on a bracketed root of f: Newton steps with a
/// finite-difference slope, falling back to bisection whenever the step
/// leaves the bracket.
template <class F>
double refine_root(F&& f, double lo, double hi, double f_lo, double f_hi, double tol,
                   int max_iterations) {
    double x  = 0.5 * (lo + hi);
    double fx = f(x);
    for (int it = 0; it < max_iterations; ++it) {
        if (std::abs(fx) <= tol) return x;
        if ((fx < 0.0) == (f_lo < 0.0)) {
            lo   = x;
            f_lo = fx;
        } else {
            hi   = x;
            f_hi = fx;
        }
        const double delta = 1e-7 * (1.0 + std::abs(x));
        const double slope = (f(x + delta) - fx) / delta;
        double next        = (slope != 0.0) ? x - fx / slope : lo;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        x  = next;
        fx = f(x);
    }
    throw NonConvergence("shooting refinement did not reach tolerance");
}

}  // namespace detail

/// Solve the tension boundary value problem for a control (r, omega) and
/// bottom slope c: find every T in (0, T_max] whose integrated shape meets
/// u'(L_bar) = r_bar = -r omega^2 / |g|.
///
/// The residual is scanned on a uniform T_bar grid, every sign change is
/// bracketed and refined, and each refined root is mapped to a full
/// Configuration. An empty result means no solution exists in the scanned
/// range; it is a legal outcome.
inline std::vector<Configuration> shoot(double r, double omega, double c,
                                        const ChainParams& params,
                                        int scan_resolution = kDefaultScanResolution,
                                        const ShootOptions& options = {}) {
    params.validate();
    if (!(omega > 0.0)) throw NonPositiveOmega();
    if (!(c > 0.0 && c < 1.0))
        throw SlopeOutOfRange();
    if (r < 0.0) throw InvalidArgument("attachment radius must be nonnegative");
    if (scan_resolution < 2) throw InvalidArgument("scan resolution must be at least 2");

    const double g     = params.g_mag();
    const double L_bar = params.length * omega * omega / g;
    const double r_bar = -r * omega * omega / g;

    const auto residual = [&](double T_bar) {
        return integrate_terminal_u_prime(L_bar, T_bar, c, options.steps) - r_bar;
    };

    // Uniform scan over [floor, T_bar_max]; brackets hold every sign change,
    // including one against the floor for roots inside the first cell.
    std::vector<double> roots;
    const double dT = options.T_bar_max / scan_resolution;
    double prev_T   = kTensionScanFloor;
    double prev_R   = residual(prev_T);
    if (prev_R == 0.0) roots.push_back(prev_T);
    for (int j = 1; j <= scan_resolution; ++j) {
        const double T = j * dT;
        const double R = residual(T);
        if (R == 0.0) {
            roots.push_back(T);
        } else if ((R < 0.0) != (prev_R < 0.0) && prev_R != 0.0) {
            roots.push_back(detail::refine_root(residual, prev_T, T, prev_R, R,
                                                options.residual_tol, options.max_iterations));
        }
        prev_T = T;
        prev_R = R;
    }

    std::sort(roots.begin(), roots.end());
    std::vector<double> distinct;
    for (double t : roots) {
        if (distinct.empty() || t - distinct.back() > options.root_separation)
            distinct.push_back(t);
    }

    // The search box itself bounds the returned points.
    const CubeBounds box{std::max(L_bar, CubeBounds{}.L_bar_max),
                         std::max(options.T_bar_max, CubeBounds{}.T_bar_max), 1.0};
    std::vector<Configuration> solutions;
    solutions.reserve(distinct.size());
    for (double T_bar : distinct) {
        solutions.push_back(forward_map({L_bar, T_bar, c}, params, options.steps, box));
    }
    return solutions;
}

}  // namespace rotchain
