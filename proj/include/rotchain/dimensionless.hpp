#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "rotchain/types.hpp"

namespace rotchain {

// ---------------------------------------------------------------------------
// Dimensionless transform
// ---------------------------------------------------------------------------

/// Map physical inputs (omega, T, rho'(0)) to the parameter point
/// (L_bar, T_bar, c). Uses |g| so both gravity orientations share the same
/// dimensionless coordinates.
inline ParamPoint to_dimensionless(const ChainParams& params, double omega, double tension_T,
                                   double rho_prime_0) {
    params.validate();
    if (!(omega > 0.0)) throw NonPositiveOmega();
    if (rho_prime_0 < 0.0 || rho_prime_0 >= 1.0) throw SlopeOutOfRange();
    if (tension_T < 0.0) throw InvalidArgument("tension T must be nonnegative");

    const double g = params.g_mag();
    ParamPoint p;
    p.L_bar = params.length * omega * omega / g;
    p.T_bar = tension_T * omega * omega / (params.linear_density * g * g);
    p.c     = rho_prime_0;
    return p;
}

/// Rotation speed that realizes a given L_bar for this chain.
inline double omega_from_L_bar(const ChainParams& params, double L_bar) {
    return std::sqrt(L_bar * params.g_mag() / params.length);
}

/// Bottom tension that realizes a given T_bar at rotation speed omega.
inline double tension_from_T_bar(const ChainParams& params, double T_bar, double omega) {
    const double g = params.g_mag();
    return T_bar * params.linear_density * g * g / (omega * omega);
}

/// Initial value u(0) = c * T_bar / sqrt(1 - c^2).
inline double u_initial(double T_bar, double c) { return c * T_bar / std::sqrt(1.0 - c * c); }

// ---------------------------------------------------------------------------
// Shape ODE
// ---------------------------------------------------------------------------

/// Samples of the dimensionless shape state on a uniform s_bar grid.
///
/// u and u_prime solve u'' + u / sqrt((s_bar + T_bar)^2 + u^2) = 0 from
/// u(0) = c T_bar / sqrt(1 - c^2), u'(0) = 0. z_bar accumulates the
/// dimensionless height, z_bar' = (s_bar + T_bar) / sqrt((s_bar+T_bar)^2 + u^2),
/// so that rho'^2 + z_bar'^2 = 1 holds identically.
struct DimensionlessShape {
    double T_bar = 0.0;
    std::vector<double> s_bar;
    std::vector<double> u;
    std::vector<double> u_prime;
    std::vector<double> z_bar;

    std::size_t size() const { return s_bar.size(); }

    /// rho'(s) at sample i, from the algebraic identity of the first-order form.
    double rho_prime(std::size_t i) const {
        return u[i] / std::hypot(s_bar[i] + T_bar, u[i]);
    }

    /// z'(s) at sample i; complement of rho' on the unit tangent.
    double z_prime(std::size_t i) const {
        return (s_bar[i] + T_bar) / std::hypot(s_bar[i] + T_bar, u[i]);
    }
};

namespace detail {

struct OdeState {
    double u, v, z;  // v = du/ds_bar
};

inline OdeState shape_rhs(double s_bar, const OdeState& y, double T_bar) {
    const double a = s_bar + T_bar;
    const double w = 1.0 / std::sqrt(a * a + y.u * y.u);
    return {y.v, -y.u * w, a * w};
}

inline OdeState axpy(const OdeState& y, double h, const OdeState& d) {
    return {y.u + h * d.u, y.v + h * d.v, y.z + h * d.z};
}

/// One classical 4th-order step of the shape ODE.
inline OdeState rk4_step(double s_bar, const OdeState& y, double h, double T_bar) {
    const OdeState k1 = shape_rhs(s_bar, y, T_bar);
    const OdeState k2 = shape_rhs(s_bar + 0.5 * h, axpy(y, 0.5 * h, k1), T_bar);
    const OdeState k3 = shape_rhs(s_bar + 0.5 * h, axpy(y, 0.5 * h, k2), T_bar);
    const OdeState k4 = shape_rhs(s_bar + h, axpy(y, h, k3), T_bar);
    return {y.u + h / 6.0 * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u),
            y.v + h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v),
            y.z + h / 6.0 * (k1.z + 2.0 * k2.z + 2.0 * k3.z + k4.z)};
}

}  // namespace detail

inline constexpr int kDefaultIntegrationSteps = 200;
inline constexpr int kMinIntegrationSteps     = 10;

/// Integrate the dimensionless shape ODE over [0, L_bar] with a fixed-step
/// classical 4th-order scheme. The RHS denominator sqrt((s+T)^2 + u^2) is
/// bounded below by T_bar > 0, so the integration never hits a singularity.
inline DimensionlessShape integrate_shape(const ParamPoint& point,
                                          int steps = kDefaultIntegrationSteps) {
    if (!(point.L_bar > 0.0)) throw PointOutsideCube("L_bar must be positive");
    if (!(point.T_bar > 0.0)) throw PointOutsideCube("T_bar must be positive");
    if (point.c < 0.0 || point.c >= 1.0) throw PointOutsideCube("c must lie in [0, 1)");
    if (steps < kMinIntegrationSteps)
        throw InvalidArgument("integration needs at least 10 steps");

    DimensionlessShape out;
    out.T_bar = point.T_bar;
    out.s_bar.resize(steps + 1);
    out.u.resize(steps + 1);
    out.u_prime.resize(steps + 1);
    out.z_bar.resize(steps + 1);

    const double h = point.L_bar / steps;
    detail::OdeState y{u_initial(point.T_bar, point.c), 0.0, 0.0};
    out.s_bar[0]   = 0.0;
    out.u[0]       = y.u;
    out.u_prime[0] = y.v;
    out.z_bar[0]   = 0.0;

    for (int i = 0; i < steps; ++i) {
        const double s = i * h;
        y              = detail::rk4_step(s, y, h, point.T_bar);
        out.s_bar[i + 1]   = (i + 1 == steps) ? point.L_bar : (i + 1) * h;
        out.u[i + 1]       = y.u;
        out.u_prime[i + 1] = y.v;
        out.z_bar[i + 1]   = y.z;
    }
    return out;
}

/// Terminal slope value u'(L_bar) only; avoids storing the whole trajectory.
/// Used heavily by the shooting residual.
inline double integrate_terminal_u_prime(double L_bar, double T_bar, double c, int steps) {
    const double h = L_bar / steps;
    detail::OdeState y{u_initial(T_bar, c), 0.0, 0.0};
    for (int i = 0; i < steps; ++i) {
        y = detail::rk4_step(i * h, y, h, T_bar);
    }
    return y.v;
}

}  // namespace rotchain
