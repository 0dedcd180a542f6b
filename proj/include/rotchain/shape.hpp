#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "rotchain/dimensionless.hpp"
#include "rotchain/modes.hpp"
#include "rotchain/types.hpp"

namespace rotchain {

// ---------------------------------------------------------------------------
// Reconstructed shape in physical units
// ---------------------------------------------------------------------------

/// Shape of a steady rotating chain sampled along arc length.
///
/// rho is the signed radial offset in the co-rotating half plane; interior
/// samples may take either sign (the chain can wind across the axis), while
/// |rho(L)| is the attachment radius. z is anchored so z(L) = 0 and is
/// mirrored when the chain orientation flips. rho_prime and z_prime carry
/// the exact unit tangent used in the reconstruction, so
/// rho'^2 + z'^2 = 1 holds to rounding.
struct ShapeSamples {
    std::vector<double> s;          ///< arc length [m], ascending 0..L
    std::vector<double> u;          ///< dimensionless Kolodner variable
    std::vector<double> u_prime;    ///< du/ds_bar
    std::vector<double> rho;        ///< signed radial offset [m]
    std::vector<double> z;          ///< height [m], z(L) = 0
    std::vector<double> rho_prime;  ///< d rho / ds
    std::vector<double> z_prime;    ///< d z / ds
    std::vector<double> tension_F;  ///< chain tension [N]

    std::size_t size() const { return s.size(); }
};

/// A steady configuration: rotation speed, bottom constraint tension,
/// reconstructed shape, rotation mode and the realizing control.
struct Configuration {
    double omega     = 0.0;  ///< [rad/s]
    double tension_T = 0.0;  ///< z component of the bottom constraint force [N]
    ShapeSamples shape;
    int mode = 1;
    ControlInput control;
};

/// Control realized by a configuration: r = |rho(L)|, h = |z(L) - z(0)|.
inline ControlInput extract_control(const Configuration& config) {
    ControlInput c;
    c.omega = config.omega;
    c.r     = std::abs(config.shape.rho.back());
    c.h     = std::abs(config.shape.z.back() - config.shape.z.front());
    return c;
}

// ---------------------------------------------------------------------------
// Forward map f : A -> C
// ---------------------------------------------------------------------------

/// Map a parameter point to the full configuration for a given chain.
///
/// omega and T come from the dimensionless relations, the shape from
/// integrating the shape ODE and scaling back to physical units:
///   rho  = -(g/omega^2) u',   s = s_bar g / omega^2,
///   z'   = sqrt(1 - rho'^2) with z(L) = 0,
///   F    = (mu g^2 / omega^2) sqrt((s_bar + T_bar)^2 + u^2).
/// A negative chain orientation mirrors z only; all other outputs are
/// orientation-independent.
inline Configuration forward_map(const ParamPoint& point, const ChainParams& params,
                                 int steps = kDefaultIntegrationSteps,
                                 const CubeBounds& bounds = {}) {
    params.validate();
    point.validate(bounds);

    const double g      = params.g_mag();
    const double orient = params.orientation();

    Configuration out;
    out.omega     = omega_from_L_bar(params, point.L_bar);
    out.tension_T = tension_from_T_bar(params, point.T_bar, out.omega);

    const DimensionlessShape dimless = integrate_shape(point, steps);
    const double scale  = g / (out.omega * out.omega);  // s = scale * s_bar
    const double fscale = params.linear_density * g * g / (out.omega * out.omega);

    const std::size_t n = dimless.size();
    ShapeSamples& sh    = out.shape;
    sh.s.resize(n);
    sh.u = dimless.u;
    sh.u_prime = dimless.u_prime;
    sh.rho.resize(n);
    sh.z.resize(n);
    sh.rho_prime.resize(n);
    sh.z_prime.resize(n);
    sh.tension_F.resize(n);

    const double z_bar_top = dimless.z_bar.back();
    for (std::size_t i = 0; i < n; ++i) {
        const double a = dimless.s_bar[i] + point.T_bar;
        const double q = std::hypot(a, dimless.u[i]);
        sh.s[i]         = scale * dimless.s_bar[i];
        sh.rho[i]       = -scale * dimless.u_prime[i];
        sh.rho_prime[i] = dimless.u[i] / q;
        sh.z_prime[i]   = orient * a / q;
        sh.z[i]         = orient * scale * (dimless.z_bar[i] - z_bar_top);
        sh.tension_F[i] = fscale * q;
    }
    sh.s.back() = params.length;  // exact upper endpoint

    out.mode    = classify_mode(sh.u_prime);
    out.control = extract_control(out);
    return out;
}

/// Recover the parameter point of a configuration; inverse of forward_map on
/// its image. rho'(0) is read off the shape's exact bottom tangent.
inline ParamPoint to_dimensionless(const Configuration& config, const ChainParams& params) {
    return to_dimensionless(params, config.omega, config.tension_T, config.shape.rho_prime.front());
}

}  // namespace rotchain
