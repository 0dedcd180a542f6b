#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace rotchain {

// ---------------------------------------------------------------------------
// Error types
// ---------------------------------------------------------------------------

/// Base class for all rotchain errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A named invariant of an input type was violated.
struct InvalidArgument : Error {
    using Error::Error;
};

struct NonPositiveOmega : InvalidArgument {
    NonPositiveOmega() : InvalidArgument("omega must be positive") {}
};

struct SlopeOutOfRange : InvalidArgument {
    SlopeOutOfRange() : InvalidArgument("rho'(0) must lie in [0, 1)") {}
};

struct PointOutsideCube : InvalidArgument {
    explicit PointOutsideCube(const std::string& what) : InvalidArgument(what) {}
};

/// An iterative solver failed to reach its tolerance.
struct NonConvergence : Error {
    using Error::Error;
};

/// The eigenvalue decomposition did not converge.
struct EigenFailure : Error {
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Physical chain
// ---------------------------------------------------------------------------

/// Uniform chain: length [m], linear density [kg/m], signed gravity [m/s^2].
///
/// The sign of `gravity` selects the spatial orientation: positive is the
/// standard setup (driven end above the fixed end), negative mirrors the
/// whole geometry in z (driven end below, as in yarn spinning where the
/// fixed end is on top). All dimensionless quantities use |gravity| and are
/// therefore orientation-independent.
struct ChainParams {
    double length         = 0.5;   ///< L [m]
    double linear_density = 0.02;  ///< mu [kg/m]
    double gravity        = 9.81;  ///< g [m/s^2], signed

    double g_mag() const { return std::abs(gravity); }

    /// +1 for the standard orientation, -1 for the mirrored (yarn) one.
    double orientation() const { return gravity < 0.0 ? -1.0 : 1.0; }

    void validate() const {
        if (!(length > 0.0)) throw InvalidArgument("chain length must be positive");
        if (!(linear_density > 0.0)) throw InvalidArgument("linear density must be positive");
        if (gravity == 0.0 || !std::isfinite(gravity))
            throw InvalidArgument("gravity must be nonzero and finite");
    }
};

// ---------------------------------------------------------------------------
// Dimensionless parameter space
// ---------------------------------------------------------------------------

/// Bounds of the parameter box (L_bar, T_bar, c).
struct CubeBounds {
    double L_bar_max = 30.0;
    double T_bar_max = 10.0;
    double c_max     = 1.0;  // open bound; c < 1 always

    void validate() const {
        if (!(L_bar_max > 0.0) || !(T_bar_max > 0.0))
            throw InvalidArgument("cube bounds must be positive");
        if (!(c_max > 0.0) || c_max > 1.0)
            throw InvalidArgument("c_max must lie in (0, 1]");
    }
};

/// A point (L_bar, T_bar, c) of the parameter box.
///
/// c = 0 is admitted as the closure point representing the straight rest
/// shape; the interior has 0 < c < 1.
struct ParamPoint {
    double L_bar = 0.0;  ///< dimensionless arc-length bound, L * omega^2 / |g|
    double T_bar = 0.0;  ///< dimensionless bottom tension, T * omega^2 / (mu g^2)
    double c     = 0.0;  ///< bottom slope rho'(0)

    void validate(const CubeBounds& b = {}) const {
        if (!(L_bar > 0.0) || L_bar > b.L_bar_max)
            throw PointOutsideCube("L_bar must lie in (0, " + std::to_string(b.L_bar_max) + "]");
        if (!(T_bar > 0.0) || T_bar > b.T_bar_max)
            throw PointOutsideCube("T_bar must lie in (0, " + std::to_string(b.T_bar_max) + "]");
        if (c < 0.0 || c >= 1.0)
            throw PointOutsideCube("c must lie in [0, 1)");
    }
};

// ---------------------------------------------------------------------------
// Control space
// ---------------------------------------------------------------------------

/// A control input (attachment radius, rotation speed, top-bottom distance).
struct ControlInput {
    double r     = 0.0;  ///< [m]
    double omega = 0.0;  ///< [rad/s]
    double h     = 0.0;  ///< [m], vertical distance between the ends
};

}  // namespace rotchain
