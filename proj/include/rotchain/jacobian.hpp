#pragma once

#include <Eigen/Core>

#include "rotchain/lumped.hpp"

namespace rotchain {

namespace detail {

/// d(link force on node i)/d(x_i) and /d(v_i) for the link from x_i toward
/// x_j. The cross derivatives with respect to the neighbor are the negatives.
struct LinkBlocks {
    Eigen::Matrix3d dx;
    Eigen::Matrix3d dv;
};

inline LinkBlocks link_jacobian(const Eigen::Vector3d& xi, const Eigen::Vector3d& xj,
                                const Eigen::Vector3d& vi, const Eigen::Vector3d& vj, double k,
                                double d, double l0) {
    const Eigen::Vector3d delta = xi - xj;
    const double len            = delta.norm();
    if (len < 1e-12) return {Eigen::Matrix3d::Zero(), Eigen::Matrix3d::Zero()};
    const Eigen::Vector3d e     = delta / len;
    const Eigen::Matrix3d ee    = e * e.transpose();
    const Eigen::Matrix3d P     = Eigen::Matrix3d::Identity() - ee;
    const Eigen::Vector3d ddot  = vi - vj;
    const double rate           = ddot.dot(e);

    LinkBlocks out;
    out.dx = -k * ((1.0 - l0 / len) * Eigen::Matrix3d::Identity() + (l0 / len) * ee) -
             (d / len) * (e * (P * ddot).transpose() + rate * P);
    out.dv = -d * ee;
    return out;
}

/// d(drag force)/d(v_rel); shared by the velocity block and, through
/// d v_rel/dx = omega * S, the position block.
inline Eigen::Matrix3d drag_vrel_jacobian(const Eigen::Vector3d& v_rel, double b, double cq) {
    Eigen::Matrix3d J = -b * Eigen::Matrix3d::Identity();
    const double n    = v_rel.norm();
    if (cq > 0.0 && n > 0.0)
        J -= cq * (n * Eigen::Matrix3d::Identity() + v_rel * v_rel.transpose() / n);
    return J;
}

inline Eigen::Matrix3d spin_matrix() {
    Eigen::Matrix3d S;
    S << 0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0;  // ez x (.)
    return S;
}

}  // namespace detail

/// Exact Jacobian of dynamics_rhs with respect to y, valid at any state
/// (not only equilibria): block tridiagonal in the node index with 3x3
/// position/velocity blocks per neighbor pair.
inline Eigen::MatrixXd analytic_jacobian(const LumpedState& state, const LumpedModelParams& model,
                                         const ChainParams& chain, double omega) {
    model.validate();
    const int n     = state.interior_count();
    const double m  = model.node_mass(chain);
    const double l0 = model.rest_length(chain);
    const Eigen::Matrix3d S = detail::spin_matrix();

    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(6 * n, 6 * n);
    for (int i = 1; i <= n; ++i) {
        const int row = 6 * (i - 1);
        J.block<3, 3>(row, row + 3).setIdentity();  // d(xdot)/dv

        const Eigen::Vector3d x = state.pos(i);
        const Eigen::Vector3d v = state.vel(i);

        Eigen::Matrix3d Ax = Eigen::Matrix3d::Zero();  // d(force_i)/d(x_i)
        Eigen::Matrix3d Av = Eigen::Matrix3d::Zero();  // d(force_i)/d(v_i)

        for (const int j : {i - 1, i + 1}) {
            const auto blocks = detail::link_jacobian(x, state.node_pos(j), v, state.node_vel(j),
                                                      model.stiffness, model.damping, l0);
            Ax += blocks.dx;
            Av += blocks.dv;
            if (j >= 1 && j <= n) {  // neighbor is an interior node
                const int col = 6 * (j - 1);
                J.block<3, 3>(row + 3, col)     += -blocks.dx / m;
                J.block<3, 3>(row + 3, col + 3) += -blocks.dv / m;
            }
        }

        // centrifugal
        Ax(0, 0) += m * omega * omega;
        Ax(1, 1) += m * omega * omega;
        // Coriolis
        Av(0, 1) += 2.0 * m * omega;
        Av(1, 0) -= 2.0 * m * omega;
        // drag; the position coupling exists only when the air is at rest
        // in the lab frame
        const Eigen::Vector3d v_rel =
            detail::drag_relative_velocity(x, v, omega, model.drag_frame);
        const Eigen::Matrix3d D =
            detail::drag_vrel_jacobian(v_rel, model.drag_linear, model.drag_quadratic);
        Av += D;
        if (model.drag_frame == DragFrame::inertial) Ax += D * (omega * S);

        J.block<3, 3>(row + 3, row)     += Ax / m;
        J.block<3, 3>(row + 3, row + 3) += Av / m;
    }
    return J;
}

/// d(force)/d(positions) at zero interior velocity, the matrix used by the
/// equilibrium Newton solver. Dimension 3(N-1).
inline Eigen::MatrixXd equilibrium_force_jacobian(const LumpedState& state,
                                                  const LumpedModelParams& model,
                                                  const ChainParams& chain, double omega) {
    const int n     = state.interior_count();
    const double m  = model.node_mass(chain);
    const double l0 = model.rest_length(chain);
    const Eigen::Matrix3d S = detail::spin_matrix();
    const Eigen::Vector3d zero = Eigen::Vector3d::Zero();

    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(3 * n, 3 * n);
    for (int i = 1; i <= n; ++i) {
        const int row           = 3 * (i - 1);
        const Eigen::Vector3d x = state.pos(i);

        Eigen::Matrix3d Ax = Eigen::Matrix3d::Zero();
        for (const int j : {i - 1, i + 1}) {
            const auto blocks = detail::link_jacobian(x, state.node_pos(j), zero, zero,
                                                      model.stiffness, model.damping, l0);
            Ax += blocks.dx;
            if (j >= 1 && j <= n) J.block<3, 3>(row, 3 * (j - 1)) += -blocks.dx;
        }
        Ax(0, 0) += m * omega * omega;
        Ax(1, 1) += m * omega * omega;
        if (model.drag_frame == DragFrame::inertial) {
            const Eigen::Vector3d v_rel = omega * Eigen::Vector3d(-x.y(), x.x(), 0.0);
            Ax += detail::drag_vrel_jacobian(v_rel, model.drag_linear, model.drag_quadratic) *
                  (omega * S);
        }

        J.block<3, 3>(row, row) += Ax;
    }
    return J;
}

}  // namespace rotchain
