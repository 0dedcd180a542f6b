#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "rotchain/jacobian.hpp"
#include "rotchain/lumped.hpp"

namespace rotchain {

struct EquilibriumOptions {
    double force_tol   = 1e-9;  ///< infinity norm of the force residual [N]
    int max_iterations = 200;   ///< per solver stage
    double initial_radius_fraction = 0.1;   ///< trust radius / chain length
    double min_continuation_step   = 1e-5;  ///< smallest drag ramp increment
};

namespace detail {

inline Eigen::VectorXd force_residual(const LumpedState& state, const LumpedModelParams& model,
                                      const ChainParams& chain, double omega) {
    Eigen::VectorXd r(3 * state.interior_count());
    for (int i = 1; i < state.links; ++i)
        r.segment<3>(3 * (i - 1)) = node_force(state, i, model, chain, omega);
    return r;
}

/// Newton direction with Armijo backtracking on 0.5 |force|^2. The Newton
/// direction descends this objective whenever the position Jacobian is
/// nonsingular, indefiniteness notwithstanding.
inline bool newton_stage(LumpedState& st, const LumpedModelParams& model,
                         const ChainParams& chain, double omega,
                         const EquilibriumOptions& options) {
    Eigen::VectorXd r = force_residual(st, model, chain, omega);
    for (int it = 0; it < options.max_iterations; ++it) {
        if (r.lpNorm<Eigen::Infinity>() <= options.force_tol) return true;
        const Eigen::MatrixXd J  = equilibrium_force_jacobian(st, model, chain, omega);
        const Eigen::VectorXd dx = J.partialPivLu().solve(-r);
        if (!dx.allFinite()) return false;
        const double phi0 = 0.5 * r.squaredNorm();
        double alpha      = 1.0;
        while (true) {
            LumpedState trial = st;
            for (int i = 1; i < st.links; ++i)
                trial.pos(i) = st.pos(i) + alpha * dx.segment<3>(3 * (i - 1));
            const Eigen::VectorXd rt = force_residual(trial, model, chain, omega);
            if (0.5 * rt.squaredNorm() <= phi0 * (1.0 - 2e-4 * alpha)) {
                st = trial;
                r  = rt;
                break;
            }
            alpha *= 0.5;
            if (alpha < 1e-12) return false;
        }
    }
    return false;
}

/// Powell dogleg trust region on 0.5 |force|^2; complements the line search
/// on geometries where Newton steps blow up along soft or folded directions.
inline bool dogleg_stage(LumpedState& st, const LumpedModelParams& model,
                         const ChainParams& chain, double omega,
                         const EquilibriumOptions& options) {
    Eigen::VectorXd r = force_residual(st, model, chain, omega);
    double radius     = options.initial_radius_fraction * chain.length;

    for (int it = 0; it < options.max_iterations; ++it) {
        if (r.lpNorm<Eigen::Infinity>() <= options.force_tol) return true;

        const Eigen::MatrixXd J  = equilibrium_force_jacobian(st, model, chain, omega);
        const Eigen::VectorXd g  = J.transpose() * r;
        const Eigen::VectorXd pn = J.partialPivLu().solve(-r);
        const Eigen::VectorXd Jg = J * g;
        if (g.norm() == 0.0 || Jg.squaredNorm() == 0.0) return false;
        const Eigen::VectorXd pc = -(g.squaredNorm() / Jg.squaredNorm()) * g;
        const bool newton_ok     = pn.allFinite();

        bool accepted = false;
        for (int shrink = 0; shrink < 40; ++shrink) {
            Eigen::VectorXd p;
            if (newton_ok && pn.norm() <= radius) {
                p = pn;
            } else if (!newton_ok || pc.norm() >= radius) {
                p = -(radius / g.norm()) * g;
            } else {
                const Eigen::VectorXd d = pn - pc;
                const double a = d.squaredNorm(), b = 2.0 * pc.dot(d);
                const double cq  = pc.squaredNorm() - radius * radius;
                const double tau = (-b + std::sqrt(b * b - 4.0 * a * cq)) / (2.0 * a);
                p                = pc + tau * d;
            }

            LumpedState trial = st;
            for (int i = 1; i < st.links; ++i)
                trial.pos(i) = st.pos(i) + p.segment<3>(3 * (i - 1));
            const Eigen::VectorXd rt = force_residual(trial, model, chain, omega);
            const double actual      = 0.5 * (r.squaredNorm() - rt.squaredNorm());
            const double predicted   = 0.5 * (r.squaredNorm() - (r + J * p).squaredNorm());
            const double ratio       = predicted > 0.0 ? actual / predicted : -1.0;

            if (ratio > 1e-4) {
                st = trial;
                r  = rt;
                if (ratio > 0.75 && p.norm() > 0.8 * radius) radius *= 2.0;
                accepted = true;
                break;
            }
            radius *= 0.25;
            if (radius < 1e-14) return false;
        }
        if (!accepted) return false;
    }
    return false;
}

inline bool any_stage(LumpedState& st, const LumpedModelParams& model, const ChainParams& chain,
                      double omega, const EquilibriumOptions& options) {
    LumpedState saved = st;
    if (newton_stage(st, model, chain, omega, options)) return true;
    st = saved;
    return dogleg_stage(st, model, chain, omega, options);
}

/// Walk the drag coefficients from zero (planar solution in hand) up to the
/// full model. The azimuthal twist that balances the drag torque lies in a
/// soft curved valley; adaptive increments track it, and a genuine fold in
/// the drag parameter (no equilibrium at full drag) collapses the step size
/// and fails fast.
inline bool drag_continuation(LumpedState& st, const LumpedModelParams& model,
                              const ChainParams& chain, double omega,
                              const EquilibriumOptions& options) {
    EquilibriumOptions stage_options = options;
    stage_options.max_iterations     = 50;

    double done = 0.0, step = 0.1;
    for (int stage = 0; stage < 400 && done < 1.0; ++stage) {
        const double target      = std::min(1.0, done + step);
        LumpedModelParams staged = model;
        staged.drag_linear       *= target;
        staged.drag_quadratic    *= target;
        LumpedState saved = st;
        if (any_stage(st, staged, chain, omega, stage_options)) {
            done = target;
            step = std::min(1.7 * step, 0.25);
        } else {
            st   = saved;
            step *= 0.3;
            if (step < options.min_continuation_step) return false;
        }
    }
    return done >= 1.0;
}

}  // namespace detail

/// Find the rotating-frame equilibrium near a seed: zero velocities, force
/// residual below tolerance.
///
/// Globalization ladder, cheapest first:
///   1. damped Newton on the full model,
///   2. dogleg trust region on the full model,
///   3. drag-free planar solve (with a stiffness ramp if even that stalls),
///      then an adaptive continuation that walks the drag back in; the
///      azimuthal twist that balances the drag torque sits in a soft curved
///      valley that plain steps cannot cross.
/// Shapes that cannot transmit the drag torque through the top anchor
/// (attachment radius near zero at finite amplitude) have no equilibrium at
/// all and surface as NonConvergence.
inline LumpedState solve_equilibrium(const LumpedState& seed, const LumpedModelParams& model,
                                     const ChainParams& chain, double omega,
                                     const EquilibriumOptions& options = {}) {
    model.validate();
    chain.validate();

    const auto fresh = [&] {
        LumpedState st = seed;
        for (int i = 1; i < st.links; ++i) st.vel(i).setZero();
        return st;
    };

    LumpedState st = fresh();
    if (detail::newton_stage(st, model, chain, omega, options)) return st;
    st = fresh();
    {
        EquilibriumOptions cheap = options;
        cheap.max_iterations     = 100;
        if (detail::dogleg_stage(st, model, chain, omega, cheap)) return st;
    }

    // planar problem: drag-free dynamics keep a y = 0 seed in its half plane
    st = fresh();
    LumpedModelParams planar = model;
    planar.drag_linear       = 0.0;
    planar.drag_quadratic    = 0.0;
    if (!detail::any_stage(st, planar, chain, omega, options)) {
        st = fresh();
        bool ok = false;
        for (const double factor : {1e-2, 3e-2, 1e-1, 3e-1, 1.0}) {
            LumpedModelParams soft = planar;
            soft.stiffness         = model.stiffness * factor;
            ok                     = detail::any_stage(st, soft, chain, omega, options);
            if (!ok) break;
        }
        if (!ok) throw NonConvergence("drag-free equilibrium solve stalled");
    }

    const bool has_drag = model.drag_linear > 0.0 || model.drag_quadratic > 0.0;
    if (!has_drag) return st;

    if (!detail::drag_continuation(st, model, chain, omega, options))
        throw NonConvergence("drag continuation stalled; the configuration cannot hold the "
                             "drag torque");
    return st;
}

}  // namespace rotchain
