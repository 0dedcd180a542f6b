#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "rotchain/types.hpp"

namespace rotchain {

struct TrajectorySample {
    double t     = 0.0;  ///< seconds, monotone from 0
    double r     = 0.0;
    double omega = 0.0;
    double h     = 0.0;
};

/// Piecewise-linear control history. Between samples every control axis
/// ramps linearly; evaluation outside the sampled range clamps to the ends.
struct ControlTrajectory {
    std::vector<TrajectorySample> samples;

    double duration() const { return samples.empty() ? 0.0 : samples.back().t; }

    struct Eval {
        double r, omega, h;
        double r_dot, omega_dot, h_dot;
    };

    Eval at(double t) const {
        if (samples.empty()) return {};
        if (t <= samples.front().t) {
            const auto& s = samples.front();
            return {s.r, s.omega, s.h, 0.0, 0.0, 0.0};
        }
        if (t >= samples.back().t) {
            const auto& s = samples.back();
            return {s.r, s.omega, s.h, 0.0, 0.0, 0.0};
        }
        const auto it = std::upper_bound(
            samples.begin(), samples.end(), t,
            [](double value, const TrajectorySample& s) { return value < s.t; });
        const TrajectorySample& hi = *it;
        const TrajectorySample& lo = *(it - 1);
        const double span          = hi.t - lo.t;
        if (span <= 0.0) return {hi.r, hi.omega, hi.h, 0.0, 0.0, 0.0};
        const double u = (t - lo.t) / span;
        return {lo.r + u * (hi.r - lo.r),
                lo.omega + u * (hi.omega - lo.omega),
                lo.h + u * (hi.h - lo.h),
                (hi.r - lo.r) / span,
                (hi.omega - lo.omega) / span,
                (hi.h - lo.h) / span};
    }

    void validate() const {
        if (samples.empty()) throw InvalidArgument("trajectory has no samples");
        if (samples.front().t != 0.0) throw InvalidArgument("trajectory must start at t = 0");
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const auto& s = samples[i];
            if (i > 0 && !(s.t >= samples[i - 1].t))
                throw InvalidArgument("trajectory times must be nondecreasing");
            if (s.r < 0.0 || s.omega < 0.0 || s.h < 0.0)
                throw InvalidArgument("trajectory controls must be nonnegative");
        }
    }
};

}  // namespace rotchain
