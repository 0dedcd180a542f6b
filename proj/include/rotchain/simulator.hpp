#pragma once

#include <Eigen/Core>
#include <cmath>
#include <string>
#include <vector>

#include "rotchain/lumped.hpp"
#include "rotchain/trajectory.hpp"
#include "rotchain/types.hpp"

namespace rotchain {

/// A node exceeded the speed guard; the usual cause is a time step above
/// the explicit-integrator stability bound.
struct BlowUp : Error {
    double time;
    explicit BlowUp(double t)
        : Error("simulation blew up at t = " + std::to_string(t)), time(t) {}
};

struct SimParams {
    double dt_factor    = 0.05;   ///< dt = dt_factor / omega_spring
    double settle       = 3.0;    ///< seconds of constant terminal control
    double output_rate  = 100.0;  ///< trace samples per second
    double blowup_speed = 1e3;    ///< m/s; diagnostic guard
    bool use_rk4        = false;  ///< classical 4th-order instead of semi-implicit
    double measure_dead_band = 0.02;  ///< fraction of max |radial| in mode counting
    double min_revolutions   = 2.0;   ///< shortest admissible measurement window
};

/// Stiffest frequency of the spring lattice; the explicit step must stay a
/// safe fraction below its period.
inline double spring_frequency(const LumpedModelParams& model, const ChainParams& chain) {
    return std::sqrt(2.0 * model.stiffness * model.links /
                     (chain.linear_density * chain.length));
}

inline double stable_time_step(const LumpedModelParams& model, const ChainParams& chain,
                               const SimParams& params = {}) {
    return params.dt_factor / spring_frequency(model, chain);
}

/// Inertial-frame state of all N+1 nodes plus the accumulated attachment
/// phase. Node 0 is pinned at the origin; node N follows the commanded
/// attachment point (r cos theta, r sin theta, orient * h).
struct SimState {
    int links = 0;
    std::vector<Eigen::Vector3d> pos;  ///< N+1 entries
    std::vector<Eigen::Vector3d> vel;
    double theta = 0.0;
    double t     = 0.0;
};

/// Nodes on the straight segment between the anchors of an initial control;
/// the bland but always-valid starting state.
inline SimState straight_line_state(const ControlInput& control, const LumpedModelParams& model,
                                    const ChainParams& chain) {
    SimState st;
    st.links = model.links;
    st.pos.resize(model.links + 1);
    st.vel.assign(model.links + 1, Eigen::Vector3d::Zero());
    const Eigen::Vector3d top(control.r, 0.0, chain.orientation() * control.h);
    for (int i = 0; i <= model.links; ++i) st.pos[i] = top * (double(i) / model.links);
    st.vel[model.links] = control.omega * Eigen::Vector3d(-top.y(), top.x(), 0.0);
    return st;
}

/// Transplant a rotating-frame equilibrium into the inertial frame at phase
/// zero: positions copied, velocities set to the rigid rotation. Shapes
/// whose top anchor sits on the negative side of the half plane are rotated
/// by pi so the anchor lands at azimuth zero, where the command drives it.
inline SimState from_equilibrium(const LumpedState& eq, double omega) {
    SimState st;
    st.links = eq.links;
    st.pos.resize(eq.links + 1);
    st.vel.resize(eq.links + 1);
    const double flip = eq.anchor_top.x() < 0.0 ? -1.0 : 1.0;
    for (int i = 0; i <= eq.links; ++i) {
        Eigen::Vector3d x = eq.node_pos(i);
        x.head<2>() *= flip;
        st.pos[i] = x;
        st.vel[i] = omega * Eigen::Vector3d(-x.y(), x.x(), 0.0);
    }
    return st;
}

namespace detail {

/// Lab-frame force on interior node i: springs, gravity, drag. No
/// fictitious terms here. The air is either at rest in the lab frame or
/// co-rotating at the commanded rate, per the model's drag frame.
inline Eigen::Vector3d sim_node_force(const SimState& st, int i, const LumpedModelParams& model,
                                      const ChainParams& chain, double omega_cmd) {
    const double m  = model.node_mass(chain);
    const double l0 = model.rest_length(chain);
    Eigen::Vector3d f =
        link_force(st.pos[i], st.pos[i - 1], st.vel[i], st.vel[i - 1], model.stiffness,
                   model.damping, l0) +
        link_force(st.pos[i], st.pos[i + 1], st.vel[i], st.vel[i + 1], model.stiffness,
                   model.damping, l0);
    f.z() += -m * chain.gravity;
    Eigen::Vector3d v_rel = st.vel[i];
    if (model.drag_frame == DragFrame::rotating)
        v_rel -= omega_cmd * Eigen::Vector3d(-st.pos[i].y(), st.pos[i].x(), 0.0);
    f += drag_force(v_rel, model.drag_linear, model.drag_quadratic);
    return f;
}

inline void apply_command(SimState& st, const ControlTrajectory::Eval& cmd, double dt,
                          const ChainParams& chain) {
    // exact advance for piecewise-linear controls
    st.theta += (cmd.omega + 0.5 * cmd.omega_dot * dt) * dt;
    const double r = cmd.r + cmd.r_dot * dt;
    const double h = cmd.h + cmd.h_dot * dt;
    const double cs = std::cos(st.theta), sn = std::sin(st.theta);
    const double omega_new = cmd.omega + cmd.omega_dot * dt;
    const double orient    = chain.orientation();
    st.pos[st.links]       = Eigen::Vector3d(r * cs, r * sn, orient * h);
    st.vel[st.links] = Eigen::Vector3d(cmd.r_dot * cs - r * omega_new * sn,
                                       cmd.r_dot * sn + r * omega_new * cs, orient * cmd.h_dot);
    st.pos[0].setZero();
    st.vel[0].setZero();
}

}  // namespace detail

/// One integrator step: velocities advance from forces, positions from the
/// new velocities (semi-implicit), then the boundary nodes are overwritten
/// from the command. The optional 4th-order mode integrates the same
/// dynamics with frozen boundary motion over the step.
inline void step(SimState& st, const ControlTrajectory::Eval& command, double dt,
                 const LumpedModelParams& model, const ChainParams& chain,
                 const SimParams& params = {}) {
    const double m = model.node_mass(chain);
    if (!params.use_rk4) {
        // forces at the old state for every node, then velocities, then positions
        static thread_local std::vector<Eigen::Vector3d> forces;
        forces.resize(st.links + 1);
        for (int i = 1; i < st.links; ++i)
            forces[i] = detail::sim_node_force(st, i, model, chain, command.omega);
        for (int i = 1; i < st.links; ++i) {
            st.vel[i] += (dt / m) * forces[i];
            st.pos[i] += dt * st.vel[i];
        }
    } else {
        const int n = st.links - 1;
        const auto deriv = [&](const SimState& s, std::vector<Eigen::Vector3d>& dx,
                               std::vector<Eigen::Vector3d>& dv) {
            for (int i = 1; i <= n; ++i) {
                dx[i] = s.vel[i];
                dv[i] = detail::sim_node_force(s, i, model, chain, command.omega) / m;
            }
        };
        std::vector<Eigen::Vector3d> k1x(n + 1), k1v(n + 1), k2x(n + 1), k2v(n + 1), k3x(n + 1),
            k3v(n + 1), k4x(n + 1), k4v(n + 1);
        SimState tmp = st;
        deriv(st, k1x, k1v);
        for (int i = 1; i <= n; ++i) {
            tmp.pos[i] = st.pos[i] + 0.5 * dt * k1x[i];
            tmp.vel[i] = st.vel[i] + 0.5 * dt * k1v[i];
        }
        deriv(tmp, k2x, k2v);
        for (int i = 1; i <= n; ++i) {
            tmp.pos[i] = st.pos[i] + 0.5 * dt * k2x[i];
            tmp.vel[i] = st.vel[i] + 0.5 * dt * k2v[i];
        }
        deriv(tmp, k3x, k3v);
        for (int i = 1; i <= n; ++i) {
            tmp.pos[i] = st.pos[i] + dt * k3x[i];
            tmp.vel[i] = st.vel[i] + dt * k3v[i];
        }
        deriv(tmp, k4x, k4v);
        for (int i = 1; i <= n; ++i) {
            st.pos[i] += dt / 6.0 * (k1x[i] + 2.0 * k2x[i] + 2.0 * k3x[i] + k4x[i]);
            st.vel[i] += dt / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
        }
    }
    detail::apply_command(st, command, dt, chain);
    st.t += dt;

    for (int i = 1; i < st.links; ++i) {
        if (st.vel[i].norm() > params.blowup_speed) throw BlowUp(st.t);
    }
}

/// One recorded instant of a simulation, with the signed radial profile in
/// the rotating frame aligned to the attachment phase.
struct TraceSample {
    double t     = 0.0;
    double theta = 0.0;
    std::vector<Eigen::Vector3d> pos;
    std::vector<Eigen::Vector3d> vel;
    std::vector<double> radial;  ///< per node, pos . (cos theta, sin theta)
};

struct SimTrace {
    int links = 0;
    std::vector<TraceSample> samples;
};

namespace detail {

/// Signed radial profile of the chain in the rotating frame aligned with
/// the attachment phase: rho_i * cos(Phi_i), where Phi_i is the node
/// azimuth relative to the attachment, unwrapped cumulatively from the
/// driven end downward. For a planar shape Phi is 0 or pi and this is the
/// classic half-plane projection; for the drag-twisted spirals the
/// simulator actually produces, an axis passage sweeps Phi through pi and
/// still shows up as exactly one sign change, while a shallow twist alone
/// never flips the sign.
inline std::vector<double> signed_radial_profile(const std::vector<Eigen::Vector3d>& pos,
                                                 double theta) {
    const std::size_t n = pos.size();
    std::vector<double> out(n, 0.0);
    double phi = 0.0;   // unwrapped azimuth relative to the anchor
    double ref = theta; // last reliable absolute azimuth
    for (std::size_t k = n; k-- > 0;) {
        const double rho = std::hypot(pos[k].x(), pos[k].y());
        if (rho < 1e-12) {
            out[k] = 0.0;
            continue;
        }
        const double az = std::atan2(pos[k].y(), pos[k].x());
        phi += std::remainder(az - ref, 2.0 * M_PI);
        ref    = az;
        out[k] = rho * std::cos(phi);
    }
    return out;
}

inline TraceSample record(const SimState& st) {
    TraceSample s;
    s.t      = st.t;
    s.theta  = st.theta;
    s.pos    = st.pos;
    s.vel    = st.vel;
    s.radial = signed_radial_profile(st.pos, st.theta);
    return s;
}

}  // namespace detail

/// Integrate through the whole trajectory plus a settle window of constant
/// terminal control, recording at the configured output rate.
inline SimTrace run(const ControlTrajectory& trajectory, const LumpedModelParams& model,
                    const ChainParams& chain, const SimState& initial,
                    const SimParams& params = {}) {
    trajectory.validate();
    model.validate();
    chain.validate();

    const double dt    = stable_time_step(model, chain, params);
    const double total = trajectory.duration() + params.settle;
    const double out_interval = 1.0 / params.output_rate;

    SimTrace trace;
    trace.links = model.links;
    SimState st = initial;
    trace.samples.push_back(detail::record(st));

    double next_out = out_interval;
    while (st.t < total) {
        const auto cmd = trajectory.at(std::min(st.t, trajectory.duration()));
        step(st, cmd, dt, model, chain, params);
        if (st.t >= next_out) {
            trace.samples.push_back(detail::record(st));
            next_out += out_interval;
        }
    }
    return trace;
}

// ---------------------------------------------------------------------------
// Rotation-mode measurement
// ---------------------------------------------------------------------------

struct ModeMeasurement {
    int mode          = 0;
    double confidence = 0.0;
    bool steady       = false;
};

namespace detail {

inline int count_crossings(const std::vector<double>& profile, double band) {
    int crossings = 0;
    double prev   = 0.0;
    bool have     = false;
    // node 0 is pinned on the axis; skip it
    for (std::size_t i = 1; i < profile.size(); ++i) {
        const double v = profile[i];
        if (std::abs(v) <= band) continue;
        if (have && ((prev < 0.0) != (v < 0.0))) ++crossings;
        prev = v;
        have = true;
    }
    return crossings;
}

inline int profile_mode(const std::vector<double>& profile, double dead_band_fraction) {
    double amax = 0.0;
    for (double v : profile) amax = std::max(amax, std::abs(v));
    return count_crossings(profile, dead_band_fraction * amax) + 1;
}

}  // namespace detail

/// Rotation mode over a steady window [t0, t1] of a trace: average the
/// rotating-frame radial profile, count interior sign crossings with a dead
/// band, and report the fraction of individual samples that agree.
inline ModeMeasurement measure_mode(const SimTrace& trace, double t0, double t1, double omega,
                                    const SimParams& params = {}) {
    if (!(t1 > t0)) throw InvalidArgument("measurement window is empty");
    if (omega > 0.0 && (t1 - t0) * omega < params.min_revolutions * 2.0 * M_PI)
        throw InvalidArgument("measurement window spans fewer than the required revolutions");

    std::vector<const TraceSample*> window;
    for (const TraceSample& s : trace.samples)
        if (s.t >= t0 && s.t <= t1) window.push_back(&s);
    if (window.size() < 8) throw InvalidArgument("measurement window has too few samples");

    const std::size_t nodes = window.front()->radial.size();

    // steadiness: scatter of the per-sample peak amplitude
    double mean_amp = 0.0;
    std::vector<double> amps;
    amps.reserve(window.size());
    for (const TraceSample* s : window) {
        double a = 0.0;
        for (double v : s->radial) a = std::max(a, std::abs(v));
        amps.push_back(a);
        mean_amp += a;
    }
    mean_amp /= amps.size();
    double var = 0.0;
    for (double a : amps) var += (a - mean_amp) * (a - mean_amp);
    const double scatter = mean_amp > 0.0 ? std::sqrt(var / amps.size()) / mean_amp : 0.0;

    ModeMeasurement out;
    out.steady = scatter <= 0.2;

    std::vector<double> averaged(nodes, 0.0);
    for (const TraceSample* s : window)
        for (std::size_t i = 0; i < nodes; ++i) averaged[i] += s->radial[i];
    for (double& v : averaged) v /= window.size();
    out.mode = detail::profile_mode(averaged, params.measure_dead_band);

    int agree = 0;
    for (const TraceSample* s : window)
        if (detail::profile_mode(s->radial, params.measure_dead_band) == out.mode) ++agree;
    out.confidence = double(agree) / window.size();
    return out;
}

/// Convenience: measure over the final window of a run, sized to the
/// terminal rotation speed with a little slack over the minimum.
inline ModeMeasurement measure_terminal_mode(const SimTrace& trace, double omega,
                                             const SimParams& params = {}) {
    const double t_end = trace.samples.back().t;
    const double span = omega > 0.0
                            ? std::max(1.1 * params.min_revolutions * 2.0 * M_PI / omega, 0.5)
                            : 1.0;
    return measure_mode(trace, t_end - span, t_end, omega, params);
}

/// Total mechanical energy of the free nodes: kinetic plus elastic plus
/// gravitational (potential zero at z = 0).
inline double mechanical_energy(const SimState& st, const LumpedModelParams& model,
                                const ChainParams& chain) {
    const double m  = model.node_mass(chain);
    const double l0 = model.rest_length(chain);
    double e        = 0.0;
    for (int i = 1; i < st.links; ++i) {
        e += 0.5 * m * st.vel[i].squaredNorm();
        e += m * chain.gravity * st.pos[i].z();
    }
    for (int i = 1; i <= st.links; ++i) {
        const double stretch = (st.pos[i] - st.pos[i - 1]).norm() - l0;
        e += 0.5 * model.stiffness * stretch * stretch;
    }
    return e;
}

}  // namespace rotchain
