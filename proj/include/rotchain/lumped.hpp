#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <vector>

#include "rotchain/shape.hpp"
#include "rotchain/types.hpp"

namespace rotchain {

/// Which air velocity field the aerodynamic drag acts against.
///
/// `rotating` treats the air as co-rotating with the frame, so drag damps
/// shape motion and vanishes on steady rotations; equilibria stay planar.
/// `inertial` treats the air as at rest in the lab frame: steady rotations
/// feel a retarding torque that only the top anchor can balance, so
/// small-radius shapes twist azimuthally or lose their equilibrium
/// altogether. The time-domain simulator always works in the lab frame and
/// corresponds to `inertial`.
enum class DragFrame { rotating, inertial };

/// N-link lumped-mass discretization of the chain: N+1 nodes joined by
/// spring links of rest length L/N. Interior nodes carry mass mu*L/N each;
/// the end nodes are boundary anchors and carry no state.
struct LumpedModelParams {
    int links              = 10;    ///< N
    double stiffness       = 1e5;   ///< k [N/m] per link
    double damping         = 0.5;   ///< d [N s/m] axial, per link
    double drag_linear     = 0.03;  ///< b [N s/m] per node
    double drag_quadratic  = 0.0;   ///< cq [kg/m] per node
    DragFrame drag_frame   = DragFrame::rotating;

    double node_mass(const ChainParams& chain) const {
        return chain.linear_density * chain.length / links;
    }
    double rest_length(const ChainParams& chain) const { return chain.length / links; }

    void validate() const {
        if (links < 2) throw InvalidArgument("lumped model needs at least 2 links");
        if (!(stiffness > 0.0)) throw InvalidArgument("spring stiffness must be positive");
        if (damping < 0.0 || drag_linear < 0.0 || drag_quadratic < 0.0)
            throw InvalidArgument("damping and drag coefficients must be nonnegative");
    }
};

/// Rotating-frame state of the interior nodes plus the two anchors.
///
/// y = [x_1, v_1, ..., x_{N-1}, v_{N-1}] with 3-vectors in meters and
/// meters/second; the fixed bottom end and the driven top end are excluded
/// from y and stored as anchors.
struct LumpedState {
    int links = 0;  ///< N
    Eigen::Vector3d anchor_bottom = Eigen::Vector3d::Zero();
    Eigen::Vector3d anchor_top    = Eigen::Vector3d::Zero();
    Eigen::VectorXd y;  ///< dimension 6(N-1)

    int interior_count() const { return links - 1; }
    int dim() const { return 6 * (links - 1); }

    Eigen::Ref<Eigen::Vector3d> pos(int i) { return y.segment<3>(6 * (i - 1)); }
    Eigen::Ref<Eigen::Vector3d> vel(int i) { return y.segment<3>(6 * (i - 1) + 3); }
    Eigen::Vector3d pos(int i) const { return y.segment<3>(6 * (i - 1)); }
    Eigen::Vector3d vel(int i) const { return y.segment<3>(6 * (i - 1) + 3); }

    /// Position of any node 0..N, anchors included.
    Eigen::Vector3d node_pos(int i) const {
        if (i == 0) return anchor_bottom;
        if (i == links) return anchor_top;
        return pos(i);
    }
    /// Velocity of any node 0..N; anchors are at rest in the rotating frame.
    Eigen::Vector3d node_vel(int i) const {
        if (i == 0 || i == links) return Eigen::Vector3d::Zero();
        return vel(i);
    }
};

namespace detail {

inline double interp_at(const std::vector<double>& grid, const std::vector<double>& values,
                        double x) {
    if (x <= grid.front()) return values.front();
    if (x >= grid.back()) return values.back();
    const auto it   = std::upper_bound(grid.begin(), grid.end(), x);
    const auto hi   = static_cast<std::size_t>(it - grid.begin());
    const double t  = (x - grid[hi - 1]) / (grid[hi] - grid[hi - 1]);
    return values[hi - 1] + t * (values[hi] - values[hi - 1]);
}

}  // namespace detail

/// Place N+1 nodes on a configuration's shape at equal arc spacing; the
/// rotating-frame x axis carries the (signed) radial profile and z is
/// shifted so the bottom node sits at the origin.
inline LumpedState discretize(const Configuration& config, int links) {
    if (links < 2) throw InvalidArgument("lumped model needs at least 2 links");
    const ShapeSamples& sh = config.shape;
    const double z0        = sh.z.front();
    const double L         = sh.s.back();

    LumpedState st;
    st.links         = links;
    st.anchor_bottom = Eigen::Vector3d::Zero();
    st.anchor_top    = Eigen::Vector3d(sh.rho.back(), 0.0, sh.z.back() - z0);
    st.y             = Eigen::VectorXd::Zero(6 * (links - 1));
    for (int i = 1; i < links; ++i) {
        const double s = L * i / links;
        st.pos(i) = Eigen::Vector3d(detail::interp_at(sh.s, sh.rho, s), 0.0,
                                    detail::interp_at(sh.s, sh.z, s) - z0);
    }
    return st;
}

namespace detail {

/// Spring + axial damper force exerted on the node at x_i by the link
/// toward x_j.
inline Eigen::Vector3d link_force(const Eigen::Vector3d& xi, const Eigen::Vector3d& xj,
                                  const Eigen::Vector3d& vi, const Eigen::Vector3d& vj,
                                  double k, double d, double l0) {
    const Eigen::Vector3d delta = xi - xj;
    const double len            = delta.norm();
    if (len < 1e-12) return Eigen::Vector3d::Zero();  // degenerate link carries no force
    const Eigen::Vector3d e = delta / len;
    const double rate       = (vi - vj).dot(e);
    return -(k * (len - l0) + d * rate) * e;
}

/// Node velocity relative to the ambient air, in rotating-frame coordinates:
/// v for co-rotating air, v + omega ez x x for air at rest in the lab frame.
inline Eigen::Vector3d drag_relative_velocity(const Eigen::Vector3d& x, const Eigen::Vector3d& v,
                                              double omega, DragFrame frame) {
    if (frame == DragFrame::rotating) return v;
    return v + omega * Eigen::Vector3d(-x.y(), x.x(), 0.0);
}

inline Eigen::Vector3d drag_force(const Eigen::Vector3d& v_rel, double b, double cq) {
    Eigen::Vector3d f = -b * v_rel;
    if (cq > 0.0) f -= cq * v_rel.norm() * v_rel;
    return f;
}

}  // namespace detail

/// Total force on interior node i in the rotating frame: spring links to
/// both neighbors, gravity, centrifugal and Coriolis terms, and drag.
inline Eigen::Vector3d node_force(const LumpedState& state, int i, const LumpedModelParams& model,
                                  const ChainParams& chain, double omega) {
    const double m  = model.node_mass(chain);
    const double l0 = model.rest_length(chain);
    const Eigen::Vector3d x = state.pos(i);
    const Eigen::Vector3d v = state.vel(i);

    Eigen::Vector3d f =
        detail::link_force(x, state.node_pos(i - 1), v, state.node_vel(i - 1), model.stiffness,
                           model.damping, l0) +
        detail::link_force(x, state.node_pos(i + 1), v, state.node_vel(i + 1), model.stiffness,
                           model.damping, l0);
    f.z() += -m * chain.gravity;                                      // signed gravity
    f.head<2>() += m * omega * omega * x.head<2>();                   // centrifugal
    f.x() += 2.0 * m * omega * v.y();                                 // Coriolis
    f.y() -= 2.0 * m * omega * v.x();
    f += detail::drag_force(detail::drag_relative_velocity(x, v, omega, model.drag_frame),
                            model.drag_linear, model.drag_quadratic);
    return f;
}

/// Time derivative of the state vector y.
inline Eigen::VectorXd dynamics_rhs(const LumpedState& state, const LumpedModelParams& model,
                                    const ChainParams& chain, double omega) {
    model.validate();
    if (omega < 0.0) throw InvalidArgument("omega must be nonnegative");
    const double m = model.node_mass(chain);

    Eigen::VectorXd dy(state.dim());
    for (int i = 1; i < state.links; ++i) {
        dy.segment<3>(6 * (i - 1))     = state.vel(i);
        dy.segment<3>(6 * (i - 1) + 3) = node_force(state, i, model, chain, omega) / m;
    }
    return dy;
}

}  // namespace rotchain
